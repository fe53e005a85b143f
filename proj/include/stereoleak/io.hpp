// include/stereoleak/io.hpp

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

#ifndef STEREOLEAK_IO_HPP_
#define STEREOLEAK_IO_HPP_

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stereoleak/core.hpp"
#include "stereoleak/leakage.hpp"
#include "stereoleak/survey.hpp"

namespace stereoleak {

// Versioned JSON record files exchanged between subcommands. Writers emit
// keys in a fixed order and doubles in shortest round-trip form, so equal
// inputs give byte-identical files.

inline constexpr int kProfilesSchema = 1;
inline constexpr int kLeakageSchema = 1;
inline constexpr int kLeakedTraitsSchema = 1;

struct ProfileBundle {
  std::vector<StereotypeProfile> profiles;
  std::map<std::pair<std::string, std::string>, int> coverage;  // human bundles only
  std::vector<CoverageFlag> flags;
  std::vector<std::string> notes;
};

ProfileBundle BundleOf(const HumanProfileSet &human);

std::string SerializeProfiles(const ProfileBundle &bundle);
ProfileBundle ParseProfiles(std::string_view text);

std::string SerializeLeakage(const std::vector<LeakageResult> &results);
/// Restores the fields written by SerializeLeakage. The covariance matrix is
/// not stored; beta, se and p hold the intercept followed by the predictors.
std::vector<LeakageResult> ParseLeakage(std::string_view text);

std::string SerializeLeakedTraits(const std::vector<LeakedTrait> &traits,
                                  const ExtractionOptions &options);
std::vector<LeakedTrait> ParseLeakedTraits(std::string_view text);

}  // namespace stereoleak

#endif  // STEREOLEAK_IO_HPP_
