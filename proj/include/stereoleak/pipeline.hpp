// include/stereoleak/pipeline.hpp

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

#ifndef STEREOLEAK_PIPELINE_HPP_
#define STEREOLEAK_PIPELINE_HPP_

#include <string>
#include <utility>
#include <vector>

#include "stereoleak/config.hpp"

namespace stereoleak {

// Subcommand bodies. Each reads its inputs from the config (and from earlier
// steps' files in output_dir), writes versioned files into output_dir and
// returns the fields of its one-line summary.

namespace outputs {
inline constexpr const char *kHumanProfiles = "human_profiles.json";
inline constexpr const char *kQualityReport = "quality_report.json";
inline constexpr const char *kDemographics = "demographics.json";
inline constexpr const char *kModelProfiles = "model_profiles.json";
inline constexpr const char *kLeakage = "leakage.json";
inline constexpr const char *kLeakageMonolingual = "leakage_monolingual.json";
inline constexpr const char *kLeakedTraits = "leaked_traits.json";
inline constexpr const char *kCategoryCorrelation = "category_correlation.json";
inline constexpr const char *kSimulation = "simulation.json";
inline constexpr const char *kReportDir = "report";
}  // namespace outputs

struct StepSummary {
  std::string command;
  std::vector<std::pair<std::string, std::string>> fields;

  void Add(std::string key, std::string value) {
    fields.emplace_back(std::move(key), std::move(value));
  }
  /// "stereoleak <command> status=ok key=value ..."
  std::string Line() const;
};

StepSummary RunValidate(const RunConfig &config);
StepSummary RunIngest(const RunConfig &config);
StepSummary RunScore(const RunConfig &config);
StepSummary RunFit(const RunConfig &config);
StepSummary RunLeaks(const RunConfig &config);
StepSummary RunReport(const RunConfig &config);
StepSummary RunSimulate(const RunConfig &config);

/// ingest, score, fit, leaks and report in order.
std::vector<StepSummary> RunAll(const RunConfig &config);

}  // namespace stereoleak

#endif  // STEREOLEAK_PIPELINE_HPP_
