// include/stereoleak/error.hpp

// Copyright 2026 The stereoleak Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef STEREOLEAK_ERROR_HPP_
#define STEREOLEAK_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace stereoleak {

enum class ErrorKind {
  kLoad,         // registry or input file missing / malformed
  kValidation,   // unknown identifier or missing surface form
  kParse,        // malformed record in a delimited or line-oriented file
  kRange,        // value outside its scale bounds
  kConsistency,  // cross-record contract broken
  kNumeric,      // degenerate numerics (zero variance, rank deficiency, ...)
  kUsage,        // bad arguments to an operation
};

const char *ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure carrying the 1-based line number of the offending record.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string &what)
      : Error(ErrorKind::kParse, "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline const char *ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kLoad: return "load";
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kRange: return "range";
    case ErrorKind::kConsistency: return "consistency";
    case ErrorKind::kNumeric: return "numeric";
    case ErrorKind::kUsage: return "usage";
  }
  return "unknown";
}

}  // namespace stereoleak

#endif  // STEREOLEAK_ERROR_HPP_
