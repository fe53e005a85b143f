// tests/test_util.hpp

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

#ifndef STEREOLEAK_TESTS_TEST_UTIL_HPP_
#define STEREOLEAK_TESTS_TEST_UTIL_HPP_

#include <filesystem>
#include <random>
#include <string>

#include "stereoleak/core.hpp"

namespace testutil {

inline const stereoleak::Registry &Bundled() {
  static const stereoleak::Registry r =
      stereoleak::Registry::LoadFile(stereoleak::BundledRegistryPath());
  return r;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path ScratchDir(const std::string &name) {
  const auto dir = std::filesystem::temp_directory_path() / ("stereoleak_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Profile over every registry cell with values drawn by `draw(group, pair)`.
template <typename F>
stereoleak::StereotypeProfile FullProfile(const stereoleak::Registry &r, const std::string &lang,
                                          stereoleak::Source source, stereoleak::ScaleKind scale,
                                          F draw) {
  stereoleak::StereotypeProfile p(lang, source, scale);
  for (std::size_t g = 0; g < r.groups().size(); ++g) {
    for (std::size_t k = 0; k < r.trait_pairs().size(); ++k) {
      stereoleak::AssociationScore s;
      s.group = r.groups()[g].id;
      s.pair = r.trait_pairs()[k].id;
      s.language = lang;
      s.source = source;
      s.scale = scale;
      s.value = draw(g, k);
      s.n_observations = 1;
      p.Set(s);
    }
  }
  return p;
}

}  // namespace testutil

#endif  // STEREOLEAK_TESTS_TEST_UTIL_HPP_
