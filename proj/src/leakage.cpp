// src/leakage.cpp

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

#include "stereoleak/leakage.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace stereoleak {

void ProfileStore::Add(StereotypeProfile profile) {
  auto key = std::make_pair(profile.source(), profile.language());
  all_.insert_or_assign(std::move(key), std::move(profile));
}

void ProfileStore::AddAll(const HumanProfileSet &human) {
  for (const auto &[lang, profile] : human.profiles) Add(profile);
}

const StereotypeProfile *ProfileStore::Find(const Source &source,
                                            const std::string &language) const {
  auto it = all_.find({source, language});
  return it == all_.end() ? nullptr : &it->second;
}

std::string Predictor::Label() const {
  if (source.kind == Source::Kind::kHuman) return "Human(" + language + ")";
  return source.ToString();
}

const char *GroupingName(Grouping g) {
  return g == Grouping::kSocialGroup ? "SocialGroup" : "TraitPair";
}

Grouping ParseGrouping(std::string_view s) {
  if (s == "SocialGroup" || s == "group") return Grouping::kSocialGroup;
  if (s == "TraitPair" || s == "pair") return Grouping::kTraitPair;
  throw Error(ErrorKind::kUsage, "unknown grouping '" + std::string(s) + "'");
}

std::vector<Predictor> LeakageSpec::ResolvedPredictors(const Registry &registry) const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::kUsage, "alpha must lie in (0, 1)");
  if (registry.FindLanguage(target_language) == nullptr) {
    throw Error(ErrorKind::kValidation, "unknown target language '" + target_language + "'");
  }
  std::vector<Predictor> out = predictors;
  if (out.empty()) {
    for (const Language &l : registry.languages()) out.push_back({Source::Human(), l.code});
  }
  if (include_monolingual) {
    if (monolingual_id.empty()) {
      throw Error(ErrorKind::kUsage, "include_monolingual needs a monolingual model id");
    }
    out.push_back({Source::Monolingual(monolingual_id), target_language});
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = i + 1; j < out.size(); ++j) {
      if (out[i] == out[j]) {
        throw Error(ErrorKind::kUsage, "predictor " + out[i].Label() + " listed twice");
      }
    }
  }
  return out;
}

AssembledDesign AssembleDesign(const ProfileStore &store, const LeakageSpec &spec,
                               const Registry &registry) {
  const std::vector<Predictor> predictors = spec.ResolvedPredictors(registry);
  const Source response_source = Source::Model(spec.model_id);

  auto lookup = [&](const Source &src, const std::string &lang) -> const StereotypeProfile * {
    const StereotypeProfile *p = store.Find(src, lang);
    if (p != nullptr && spec.require_standardized && p->scale() != ScaleKind::kStandardized) {
      throw Error(ErrorKind::kConsistency, "profile " + src.ToString() + "/" + lang +
                                               " is not standardized (" + ScaleName(p->scale()) +
                                               ")");
    }
    return p;
  };
  const StereotypeProfile *response = lookup(response_source, spec.target_language);
  std::vector<const StereotypeProfile *> columns;
  for (const Predictor &pr : predictors) columns.push_back(lookup(pr.source, pr.language));

  const std::string response_reason =
      "missing response " + response_source.ToString() + "(" + spec.target_language + ")";
  std::vector<std::vector<double>> rows;
  std::vector<double> ys;
  AssembledDesign out;
  auto &d = out.design;
  for (const SocialGroup &g : registry.groups()) {
    for (const TraitPair &tp : registry.trait_pairs()) {
      std::optional<double> y = response ? response->Value(g.id, tp.id) : std::nullopt;
      if (!y) {
        ++out.n_dropped;
        ++out.dropped_reasons[response_reason];
        continue;
      }
      std::vector<double> row{1.0};
      bool complete = true;
      for (std::size_t j = 0; j < predictors.size(); ++j) {
        std::optional<double> v = columns[j] ? columns[j]->Value(g.id, tp.id) : std::nullopt;
        if (!v) {
          ++out.n_dropped;
          ++out.dropped_reasons["missing predictor " + predictors[j].Label()];
          complete = false;
          break;
        }
        row.push_back(*v);
      }
      if (!complete) continue;
      rows.push_back(std::move(row));
      ys.push_back(*y);
      d.groups.push_back(spec.grouping == Grouping::kSocialGroup ? g.id : tp.id);
      d.row_meta.push_back({g.id, tp.id});
    }
  }
  if (rows.empty()) {
    throw Error(ErrorKind::kConsistency, "assemble_design: no complete rows for " +
                                             response_source.ToString() + " in " +
                                             spec.target_language);
  }
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index p = static_cast<Eigen::Index>(predictors.size()) + 1;
  d.X.resize(n, p);
  d.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d.y(i) = ys[i];
    for (Eigen::Index j = 0; j < p; ++j) d.X(i, j) = rows[i][j];
  }
  d.column_names.push_back("(intercept)");
  for (const Predictor &pr : predictors) d.column_names.push_back(pr.Label());
  return out;
}

const PredictorEffect *LeakageResult::Find(const Predictor &p) const {
  for (const PredictorEffect &e : per_predictor)
    if (e.predictor == p) return &e;
  return nullptr;
}

LeakageResult FitLeakage(const LeakageSpec &spec, const AssembledDesign &assembled,
                         const Registry &registry) {
  const std::vector<Predictor> predictors = spec.ResolvedPredictors(registry);
  if (assembled.design.cols() != static_cast<Eigen::Index>(predictors.size()) + 1) {
    throw Error(ErrorKind::kConsistency,
                "fit_leakage: design was assembled for a different model or target");
  }
  mixedfx::LmmOptions options;
  options.method = spec.method;
  LeakageResult result;
  result.spec = spec;
  result.fit = mixedfx::FitLmm(assembled.design, options);
  result.intercept = result.fit.beta(0);
  result.effective_alpha = spec.bonferroni ? spec.alpha / double(predictors.size()) : spec.alpha;
  for (std::size_t j = 0; j < predictors.size(); ++j) {
    PredictorEffect e;
    e.predictor = predictors[j];
    e.coefficient = result.fit.beta(j + 1);
    e.se = result.fit.se(j + 1);
    e.p_value = result.fit.p_values(j + 1);
    e.significant = mixedfx::SignificantPositive(e.coefficient, e.p_value, result.effective_alpha);
    result.per_predictor.push_back(e);
  }
  result.n_rows = static_cast<int>(assembled.design.rows());
  result.n_dropped = assembled.n_dropped;
  result.dropped_reasons = assembled.dropped_reasons;
  return result;
}

std::vector<std::pair<std::string, double>> MonolingualReport(
    const std::vector<LeakageResult> &results, const Registry &registry) {
  std::map<std::string, double> by_target;
  for (const LeakageResult &r : results) {
    const PredictorEffect *mono = nullptr;
    for (const PredictorEffect &e : r.per_predictor) {
      if (e.predictor.source.kind == Source::Kind::kMonolingualModel) mono = &e;
    }
    if (mono == nullptr) {
      throw Error(ErrorKind::kConsistency, "monolingual_report: result for " + r.spec.model_id +
                                               "/" + r.spec.target_language +
                                               " has no monolingual predictor");
    }
    if (!by_target.emplace(r.spec.target_language, mono->coefficient).second) {
      throw Error(ErrorKind::kConsistency,
                  "monolingual_report: two results for target " + r.spec.target_language);
    }
  }
  std::vector<std::pair<std::string, double>> out;
  for (const Language &l : registry.languages()) {
    auto it = by_target.find(l.code);
    if (it != by_target.end()) out.emplace_back(l.code, it->second);
  }
  if (out.size() != by_target.size()) {
    throw Error(ErrorKind::kValidation, "monolingual_report: unknown target language");
  }
  return out;
}

CategoryCorrelation ComputeCategoryCorrelation(const HumanProfileSet &human,
                                               GroupCategory category, const Registry &registry,
                                               std::optional<StandardizeMode> standardize) {
  std::map<std::string, StereotypeProfile> profiles;
  for (const auto &[lang, profile] : human.profiles) {
    profiles.emplace(lang, standardize ? Standardize(profile, *standardize) : profile);
  }
  const std::size_t n_pairs = registry.trait_pairs().size();
  // language -> group -> complete vector
  auto vector_of = [&](const std::string &lang,
                       const std::string &group) -> std::optional<Eigen::VectorXd> {
    auto it = profiles.find(lang);
    if (it == profiles.end()) return std::nullopt;
    Eigen::VectorXd v(static_cast<Eigen::Index>(n_pairs));
    for (std::size_t k = 0; k < n_pairs; ++k) {
      auto value = it->second.Value(group, registry.trait_pairs()[k].id);
      if (!value) return std::nullopt;
      v(static_cast<Eigen::Index>(k)) = *value;
    }
    return v;
  };

  CategoryCorrelation out;
  double total = 0.0;
  const auto &langs = registry.languages();
  for (const SocialGroup *g : registry.GroupsIn(category)) {
    for (std::size_t a = 0; a < langs.size(); ++a) {
      for (std::size_t b = a + 1; b < langs.size(); ++b) {
        auto va = vector_of(langs[a].code, g->id);
        auto vb = vector_of(langs[b].code, g->id);
        if (!va || !vb) {
          ++out.skipped;
          continue;
        }
        try {
          total += mixedfx::Pearson(*va, *vb);
          ++out.n_correlations;
        } catch (const Error &e) {
          if (e.kind() != ErrorKind::kNumeric) throw;
          ++out.skipped;
        }
      }
    }
  }
  if (out.n_correlations == 0) {
    throw Error(ErrorKind::kNumeric, std::string("category_correlation: no computable pair for ") +
                                         CategoryName(category));
  }
  out.mean_r = total / double(out.n_correlations);
  return out;
}

std::vector<LeakedTrait> ExtractLeakedTraits(const StereotypeProfile &model_target,
                                             const StereotypeProfile &human_target,
                                             const StereotypeProfile &human_source,
                                             const Registry &registry,
                                             const ExtractionOptions &options) {
  if (options.k < 1) throw Error(ErrorKind::kUsage, "extract_leaked_traits: k must be >= 1");
  if (!(options.theta > 0.0)) {
    throw Error(ErrorKind::kUsage, "extract_leaked_traits: theta must be > 0");
  }
  for (const StereotypeProfile *p : {&model_target, &human_target, &human_source}) {
    if (p->scale() != ScaleKind::kStandardized) {
      throw Error(ErrorKind::kConsistency, "extract_leaked_traits: profile " +
                                               p->source().ToString() + "/" + p->language() +
                                               " is not standardized");
    }
  }

  struct Candidate {
    std::size_t pair_index;
    Pole pole;
    double toward;
  };
  auto toward = [](double differential, Pole pole) {
    return pole == Pole::kRight ? differential : -differential;
  };

  std::vector<LeakedTrait> out;
  for (const SocialGroup &g : registry.groups()) {
    std::vector<Candidate> candidates;
    for (std::size_t k = 0; k < registry.trait_pairs().size(); ++k) {
      auto v = model_target.Value(g.id, registry.trait_pairs()[k].id);
      if (!v) continue;
      candidates.push_back({k, Pole::kRight, toward(*v, Pole::kRight)});
      candidates.push_back({k, Pole::kLeft, toward(*v, Pole::kLeft)});
    }
    if (candidates.empty()) continue;
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate &a, const Candidate &b) { return a.toward > b.toward; });
    const std::size_t top = std::min<std::size_t>(candidates.size(), options.k);
    for (std::size_t rank = 0; rank < top; ++rank) {
      const Candidate &c = candidates[rank];
      const TraitPair &tp = registry.trait_pairs()[c.pair_index];
      auto src = human_source.Value(g.id, tp.id);
      if (!src) continue;
      const double src_toward = toward(*src, c.pole);
      auto tgt = human_target.Value(g.id, tp.id);
      std::optional<double> tgt_toward;
      if (tgt) tgt_toward = toward(*tgt, c.pole);
      const bool target_not_associated = !tgt_toward || *tgt_toward < options.theta;
      if (!target_not_associated || src_toward < options.theta) continue;
      LeakedTrait t;
      t.source_language = human_source.language();
      t.target_language = model_target.language();
      t.model_id = model_target.source().model_id;
      t.group = g.id;
      t.pair = tp.id;
      t.pole = c.pole;
      t.pole_name = tp.pole_name(c.pole);
      t.model_rank = static_cast<int>(rank) + 1;
      t.model_value = c.toward;
      t.human_target_value = tgt_toward;
      t.human_source_value = src_toward;
      out.push_back(std::move(t));
    }
  }
  return out;
}

}  // namespace stereoleak
