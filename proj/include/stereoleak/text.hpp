// include/stereoleak/text.hpp

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

#ifndef STEREOLEAK_TEXT_HPP_
#define STEREOLEAK_TEXT_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace stereoleak {

std::string ReadTextFile(const std::filesystem::path &path);
void WriteTextFile(const std::filesystem::path &path, std::string_view contents);

std::string_view Trim(std::string_view s);
std::vector<std::string_view> SplitLines(std::string_view text);

/// Splits one comma-separated record. Fields may be double-quoted, with ""
/// standing for a literal quote.
std::vector<std::string> SplitCsvRecord(std::string_view line);
std::string QuoteCsvField(std::string_view field);

/// Shortest decimal text that parses back to exactly `value`.
std::string FormatShortest(double value);
/// Fixed-point text with `decimals` digits after the point; "-0.00" is
/// rendered as "0.00".
std::string FormatFixed(double value, int decimals);
/// Strict full-string parse; throws std::invalid_argument on junk.
double ParseDouble(std::string_view text);

/// Lower-cases ASCII and Cyrillic letters in UTF-8 text; other code points
/// are copied unchanged.
std::string Utf8Lower(std::string_view text);

}  // namespace stereoleak

#endif  // STEREOLEAK_TEXT_HPP_
