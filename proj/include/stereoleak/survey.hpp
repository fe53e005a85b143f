// include/stereoleak/survey.hpp

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

#ifndef STEREOLEAK_SURVEY_HPP_
#define STEREOLEAK_SURVEY_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stereoleak/core.hpp"

namespace stereoleak {

struct SurveyResponse {
  std::string respondent_id;
  std::string language;
  std::set<std::string> familiar_groups;
  std::map<std::string, std::map<std::string, double>> ratings;  // group -> pair -> [-50, 50]
  std::vector<std::pair<std::string, bool>> attention_checks;
  std::optional<std::map<std::string, std::string>> demographics;

  std::size_t rating_count() const;
};

/// Raw contents of one survey export: the mandatory ratings table plus its
/// side tables. Every table starts with the line "survey_schema: 1".
struct SurveyFiles {
  std::string ratings;
  std::string familiarity;
  std::optional<std::string> checks;
  std::optional<std::string> demographics;
};

SurveyFiles ReadSurveyFiles(const std::filesystem::path &ratings,
                            const std::filesystem::path &familiarity,
                            const std::optional<std::filesystem::path> &checks,
                            const std::optional<std::filesystem::path> &demographics);

/// Parses an export into one response per respondent, ordered by id.
/// Out-of-range ratings are errors (never clamped); rating a group outside
/// the respondent's familiar set, marking fewer than 4 familiar groups, or
/// rating only part of a group's 16 pairs are consistency errors.
std::vector<SurveyResponse> ParseSurvey(const SurveyFiles &files, const Registry &registry);

struct LanguagePassCount {
  std::size_t total = 0;
  std::size_t passed = 0;
  double pass_rate() const { return total == 0 ? 0.0 : double(passed) / double(total); }
};

struct QualityReport {
  std::size_t total = 0;
  std::size_t passed = 0;
  std::map<std::string, LanguagePassCount> per_language;
  std::vector<std::string> missing_checks;  // respondents failed for lack of records
  double pass_rate() const { return total == 0 ? 0.0 : double(passed) / double(total); }
};

struct GateResult {
  std::vector<SurveyResponse> passed;
  std::vector<SurveyResponse> failed;
  QualityReport report;
};

/// A response passes iff it carries at least `required_checks` attention
/// check records and every one of them passed.
GateResult QualityGate(const std::vector<SurveyResponse> &responses, int required_checks = 4);

enum class Aggregator { kMean, kMedian };

struct AggregateOptions {
  int min_annotators = 5;
  Aggregator statistic = Aggregator::kMean;
};

struct CoverageFlag {
  std::string language;
  std::string group;
  int annotators = 0;
};

struct HumanProfileSet {
  std::map<std::string, StereotypeProfile> profiles;  // language -> Human profile
  std::map<std::pair<std::string, std::string>, int> coverage;  // (language, group) -> annotators
  std::vector<CoverageFlag> flags;

  const StereotypeProfile *Find(const std::string &language) const;
};

/// Averages quality-gated ratings per (language, group, pair). Cells with no
/// annotators are absent; shortfalls below `min_annotators` are flagged, for
/// non-shared groups only in their origin language.
HumanProfileSet AggregateHumanScores(const std::vector<SurveyResponse> &passed,
                                     const Registry &registry,
                                     const AggregateOptions &options = {});

struct DemographicSummary {
  // language -> key -> answer -> count; absent answers count as "no answer".
  std::map<std::string, std::map<std::string, std::map<std::string, int>>> counts;
  std::map<std::string, int> respondents;

  double Share(const std::string &language, const std::string &key,
               const std::string &answer) const;
  /// Per-language shares of `key`, averaged over the languages present.
  std::map<std::string, double> AveragedShares(const std::string &key) const;
  bool empty() const { return respondents.empty(); }
};

inline constexpr const char *kNoAnswer = "no answer";

DemographicSummary SummarizeDemographics(const std::vector<SurveyResponse> &responses);

}  // namespace stereoleak

#endif  // STEREOLEAK_SURVEY_HPP_
