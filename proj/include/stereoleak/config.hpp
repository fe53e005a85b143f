// include/stereoleak/config.hpp

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

#ifndef STEREOLEAK_CONFIG_HPP_
#define STEREOLEAK_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stereoleak/leakage.hpp"
#include "stereoleak/scoring.hpp"

namespace stereoleak {

inline constexpr const char *kConfigEnvVar = "STEREOLEAK_CONFIG";

/// Everything one pipeline run needs. Text form: one `key = value` per line,
/// `#` starts a comment, `dump` and `monolingual_dump` may repeat. Relative
/// paths resolve against the config file's directory.
struct RunConfig {
  std::filesystem::path registry;  // empty means the bundled registry
  std::optional<std::filesystem::path> survey_ratings;
  std::optional<std::filesystem::path> survey_familiarity;
  std::optional<std::filesystem::path> survey_checks;
  std::optional<std::filesystem::path> survey_demographics;
  std::vector<std::filesystem::path> dumps;
  std::vector<std::filesystem::path> monolingual_dumps;
  std::filesystem::path output_dir = "out";

  // Scoring and ingest.
  ScoringMethod scoring = ScoringMethod::kAuto;
  bool normalize_by_baseline = false;
  int required_checks = 4;
  int min_annotators = 5;

  // Fitting.
  double alpha = 0.05;
  bool bonferroni = false;
  Grouping grouping = Grouping::kSocialGroup;
  mixedfx::Method method = mixedfx::Method::kReml;
  StandardizeMode standardize = StandardizeMode::kWholeProfile;
  bool raw = false;  // fit on unstandardized profiles
  std::string monolingual_for;  // model that also gets the monolingual-predictor fits

  // Leaked traits and report.
  int k = 5;
  double theta = 0.5;
  bool cross_only = false;

  // simulate
  std::uint64_t seed = 7;
  int reps = 500;

  std::filesystem::path RegistryPath() const;
};

/// Known keys, in documentation order.
const std::vector<std::string> &ConfigKeys();

/// Applies one setting; `base` anchors relative paths. Unknown keys and
/// malformed values are usage errors.
void ApplySetting(RunConfig &config, std::string_view key, std::string_view value,
                  const std::filesystem::path &base);

RunConfig ParseConfig(std::string_view text, const std::filesystem::path &base);
RunConfig LoadConfig(const std::filesystem::path &path);

/// Throws a load error naming the first configured input that does not exist.
void CheckPaths(const RunConfig &config);

}  // namespace stereoleak

#endif  // STEREOLEAK_CONFIG_HPP_
