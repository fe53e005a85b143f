// include/stereoleak/leakage.hpp

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

#ifndef STEREOLEAK_LEAKAGE_HPP_
#define STEREOLEAK_LEAKAGE_HPP_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stereoleak/core.hpp"
#include "stereoleak/mixedfx.hpp"
#include "stereoleak/scoring.hpp"
#include "stereoleak/survey.hpp"

namespace stereoleak {

/// Profiles keyed by (source, language).
class ProfileStore {
 public:
  void Add(StereotypeProfile profile);
  void AddAll(const HumanProfileSet &human);
  const StereotypeProfile *Find(const Source &source, const std::string &language) const;
  const std::map<std::pair<Source, std::string>, StereotypeProfile> &all() const { return all_; }

 private:
  std::map<std::pair<Source, std::string>, StereotypeProfile> all_;
};

/// One regressor: the profile of `source` in `language`.
struct Predictor {
  Source source;
  std::string language;

  /// "Human(EN)" for human predictors, the source text otherwise.
  std::string Label() const;
  bool operator==(const Predictor &) const = default;
};

enum class Grouping { kSocialGroup, kTraitPair };

const char *GroupingName(Grouping g);
Grouping ParseGrouping(std::string_view s);

struct LeakageSpec {
  std::string model_id;
  std::string target_language;
  std::vector<Predictor> predictors;  // empty means Human(l) for every registered l
  bool include_monolingual = false;
  std::string monolingual_id;  // MonolingualModel(monolingual_id) in the target language
  Grouping grouping = Grouping::kSocialGroup;
  double alpha = 0.05;
  bool bonferroni = false;
  mixedfx::Method method = mixedfx::Method::kReml;
  bool require_standardized = true;

  /// Predictors actually used: the explicit list (or the human default) plus
  /// the monolingual model when requested. Validates distinctness and alpha.
  std::vector<Predictor> ResolvedPredictors(const Registry &registry) const;
};

struct AssembledDesign {
  mixedfx::DesignMatrix<double> design;
  int n_dropped = 0;
  std::map<std::string, int> dropped_reasons;
};

/// One row per (group, pair) in registry order whose response cell and
/// every predictor cell exist; other rows are dropped and counted under the
/// first missing cell ("missing response Model(x)", "missing predictor
/// Human(EN)").
AssembledDesign AssembleDesign(const ProfileStore &store, const LeakageSpec &spec,
                               const Registry &registry);

struct PredictorEffect {
  Predictor predictor;
  double coefficient = 0.0;
  double se = 0.0;
  double p_value = 1.0;
  bool significant = false;  // coefficient > 0 && p_value < effective alpha
};

struct LeakageResult {
  LeakageSpec spec;
  mixedfx::MixedFit<double> fit;
  double intercept = 0.0;
  double effective_alpha = 0.05;
  std::vector<PredictorEffect> per_predictor;
  int n_rows = 0;
  int n_dropped = 0;
  std::map<std::string, int> dropped_reasons;

  const PredictorEffect *Find(const Predictor &p) const;
};

/// Fits the random-intercept model and classifies every predictor.
LeakageResult FitLeakage(const LeakageSpec &spec, const AssembledDesign &assembled,
                         const Registry &registry);

/// Monolingual-model coefficient per target language, in registry language
/// order whatever the input order.
std::vector<std::pair<std::string, double>> MonolingualReport(
    const std::vector<LeakageResult> &results, const Registry &registry);

struct CategoryCorrelation {
  double mean_r = 0.0;
  int n_correlations = 0;
  int skipped = 0;  // (group, language pair) combinations lacking two complete profiles
};

/// Mean Pearson r between the 16-pair profiles of every unordered language
/// pair, over every group of `category`. Raw slider values by default.
CategoryCorrelation ComputeCategoryCorrelation(
    const HumanProfileSet &human, GroupCategory category, const Registry &registry,
    std::optional<StandardizeMode> standardize = std::nullopt);

struct LeakedTrait {
  std::string source_language;
  std::string target_language;
  std::string model_id;
  std::string group;
  std::string pair;
  Pole pole = Pole::kRight;
  std::string pole_name;
  int model_rank = 0;
  double model_value = 0.0;
  std::optional<double> human_target_value;  // absent when nobody rated the group
  double human_source_value = 0.0;
};

struct ExtractionOptions {
  int k = 5;
  double theta = 0.5;
};

/// Per group, the k poles the target-language model leans to most; keeps
/// those the target-language humans rate below theta (or did not rate) and
/// the source-language humans rate at theta or above. Values are
/// standardized differentials read toward the pole (negated for Left).
std::vector<LeakedTrait> ExtractLeakedTraits(const StereotypeProfile &model_target,
                                             const StereotypeProfile &human_target,
                                             const StereotypeProfile &human_source,
                                             const Registry &registry,
                                             const ExtractionOptions &options = {});

}  // namespace stereoleak

#endif  // STEREOLEAK_LEAKAGE_HPP_
