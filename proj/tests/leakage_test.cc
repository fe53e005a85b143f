// tests/leakage_test.cc

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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "stereoleak/leakage.hpp"
#include "test_util.hpp"

namespace stereoleak {
namespace {

using testutil::Bundled;

const std::vector<std::string> kLangs{"EN", "RU", "ZH", "HI"};

// Standardized-scale profile with arbitrary values (only the scale tag is
// checked downstream).
template <typename F>
StereotypeProfile Std(const std::string &lang, const Source &source, F draw) {
  return testutil::FullProfile(Bundled(), lang, source, ScaleKind::kStandardized, draw);
}

StereotypeProfile Without(const StereotypeProfile &p, const std::string &group) {
  StereotypeProfile out(p.language(), p.source(), p.scale());
  for (const auto &[key, s] : p.cells()) {
    if (key.group != group) out.Set(s);
  }
  return out;
}

// Human profiles in every language plus Model(m) in `target` built as
// sum_l planted[l] * Human(l) + noise.
struct World {
  ProfileStore store;
  std::map<std::string, std::vector<double>> human;  // lang -> cell values
};

World MakeWorld(std::uint64_t seed, const std::string &target,
                const std::map<std::string, double> &planted, double noise = 0.3) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  World w;
  const std::size_t cells = Bundled().groups().size() * Bundled().trait_pairs().size();
  for (const std::string &l : kLangs) {
    auto &v = w.human[l];
    v.resize(cells);
    for (double &x : v) x = z(rng);
    w.store.Add(Std(l, Source::Human(), [&](std::size_t g, std::size_t k) { return v[g * 16 + k]; }));
  }
  std::vector<double> response(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    response[i] = noise * z(rng);
    for (const auto &[l, c] : planted) response[i] += c * w.human[l][i];
  }
  w.store.Add(Std(target, Source::Model("m"),
                  [&](std::size_t g, std::size_t k) { return response[g * 16 + k]; }));
  return w;
}

LeakageSpec SpecFor(const std::string &target) {
  LeakageSpec s;
  s.model_id = "m";
  s.target_language = target;
  return s;
}

TEST(Assemble, CompleteDataArity) {
  World w = MakeWorld(1, "RU", {});
  const AssembledDesign a = AssembleDesign(w.store, SpecFor("RU"), Bundled());
  EXPECT_EQ(a.design.rows(), 480);
  EXPECT_EQ(a.design.cols(), 5);
  EXPECT_EQ(a.n_dropped, 0);
  EXPECT_EQ(a.design.column_names,
            (std::vector<std::string>{"(intercept)", "Human(EN)", "Human(RU)", "Human(ZH)",
                                      "Human(HI)"}));
  EXPECT_EQ(a.design.groups.front(), "man");
  EXPECT_EQ(a.design.row_meta[1].pair, Bundled().trait_pairs()[1].id);

  LeakageSpec by_pair = SpecFor("RU");
  by_pair.grouping = Grouping::kTraitPair;
  EXPECT_EQ(AssembleDesign(w.store, by_pair, Bundled()).design.groups.front(),
            Bundled().trait_pairs()[0].id);
}

TEST(Assemble, MissingHumanGroupIsDroppedWithReason) {
  World w = MakeWorld(2, "EN", {});
  const StereotypeProfile en = *w.store.Find(Source::Human(), "EN");
  w.store.Add(Without(en, "vdv_soldier"));
  const AssembledDesign a = AssembleDesign(w.store, SpecFor("EN"), Bundled());
  EXPECT_EQ(a.design.rows(), 464);
  EXPECT_EQ(a.n_dropped, 16);
  EXPECT_EQ(a.dropped_reasons.at("missing predictor Human(EN)"), 16);
}

TEST(Assemble, MonolingualColumn) {
  World w = MakeWorld(3, "ZH", {});
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  w.store.Add(Std("ZH", Source::Monolingual("bert-zh"), [&](std::size_t, std::size_t) { return z(rng); }));
  LeakageSpec s = SpecFor("ZH");
  s.include_monolingual = true;
  s.monolingual_id = "bert-zh";
  const AssembledDesign a = AssembleDesign(w.store, s, Bundled());
  EXPECT_EQ(a.design.cols(), 6);
  EXPECT_EQ(a.design.column_names.back(), "MonolingualModel(bert-zh)");
}

TEST(Assemble, ColumnSetDoesNotDependOnRows) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    World w = MakeWorld(100 + trial, "HI", {});
    StereotypeProfile model = *w.store.Find(Source::Model("m"), "HI");
    const auto reference = AssembleDesign(w.store, SpecFor("HI"), Bundled()).design.column_names;
    for (int drop = 0; drop < 5; ++drop) {
      model = Without(model, Bundled().groups()[rng() % 30].id);
    }
    w.store.Add(model);
    const AssembledDesign a = AssembleDesign(w.store, SpecFor("HI"), Bundled());
    EXPECT_EQ(a.design.column_names, reference);
    EXPECT_EQ(a.design.rows() + a.n_dropped, 480);
    EXPECT_GT(a.dropped_reasons.at("missing response Model(m)(HI)"), 0);
  }
}

TEST(Assemble, Errors) {
  World w = MakeWorld(5, "EN", {});
  LeakageSpec s = SpecFor("EN");
  s.alpha = 1.0;
  EXPECT_THROW(AssembleDesign(w.store, s, Bundled()), Error);
  s = SpecFor("EN");
  s.predictors = {{Source::Human(), "EN"}, {Source::Human(), "EN"}};
  EXPECT_THROW(AssembleDesign(w.store, s, Bundled()), Error);
  EXPECT_THROW(AssembleDesign(w.store, SpecFor("XX"), Bundled()), Error);
  EXPECT_THROW(AssembleDesign(w.store, SpecFor("RU"), Bundled()), Error);  // no Model(m)(RU)

  // Unstandardized input.
  ProfileStore raw = w.store;
  raw.Add(testutil::FullProfile(Bundled(), "EN", Source::Human(), ScaleKind::kBipolarSlider,
                                [](std::size_t, std::size_t) { return 1.0; }));
  try {
    AssembleDesign(raw, SpecFor("EN"), Bundled());
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConsistency);
  }
}

TEST(FitLeakage, RecoversPlantedFlow) {
  World w = MakeWorld(6, "RU", {{"RU", 0.4}, {"ZH", 0.36}});
  const LeakageSpec s = SpecFor("RU");
  const LeakageResult r = FitLeakage(s, AssembleDesign(w.store, s, Bundled()), Bundled());
  const PredictorEffect *zh = r.Find({Source::Human(), "ZH"});
  ASSERT_NE(zh, nullptr);
  EXPECT_NEAR(zh->coefficient, 0.36, 0.05);
  EXPECT_TRUE(zh->significant);
  EXPECT_TRUE(r.Find({Source::Human(), "RU"})->significant);
  EXPECT_EQ(r.n_rows, 480);
  EXPECT_EQ(r.per_predictor.size(), 4u);
}

TEST(FitLeakage, NegativeEffectIsNeverSignificant) {
  World w = MakeWorld(7, "EN", {{"EN", -0.4}});
  const LeakageSpec s = SpecFor("EN");
  const LeakageResult r = FitLeakage(s, AssembleDesign(w.store, s, Bundled()), Bundled());
  const PredictorEffect *en = r.Find({Source::Human(), "EN"});
  EXPECT_LT(en->coefficient, 0.0);
  EXPECT_LT(en->p_value, 0.001);
  EXPECT_FALSE(en->significant);
}

TEST(FitLeakage, SignificanceRuleHoldsExactly) {
  for (std::uint64_t seed = 10; seed < 40; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.15, 0.15);
    const std::string target = kLangs[seed % 4];
    World w = MakeWorld(seed, target, {{"EN", u(rng)}, {"RU", u(rng)}, {"ZH", u(rng)}, {"HI", u(rng)}},
                        1.0);
    LeakageSpec s = SpecFor(target);
    s.bonferroni = seed % 2 == 0;
    const LeakageResult r = FitLeakage(s, AssembleDesign(w.store, s, Bundled()), Bundled());
    EXPECT_EQ(r.effective_alpha, s.bonferroni ? 0.05 / 4 : 0.05);
    for (const PredictorEffect &e : r.per_predictor) {
      EXPECT_EQ(e.significant, e.coefficient > 0.0 && e.p_value < r.effective_alpha);
    }
  }
}

TEST(FitLeakage, Deterministic) {
  World w = MakeWorld(8, "ZH", {{"EN", 0.2}});
  const LeakageSpec s = SpecFor("ZH");
  const LeakageResult a = FitLeakage(s, AssembleDesign(w.store, s, Bundled()), Bundled());
  const LeakageResult b = FitLeakage(s, AssembleDesign(w.store, s, Bundled()), Bundled());
  EXPECT_EQ(a.fit.beta, b.fit.beta);
  EXPECT_EQ(a.fit.se, b.fit.se);
  EXPECT_EQ(a.fit.log_likelihood, b.fit.log_likelihood);
}

LeakageResult MonoResult(const std::string &target, double coefficient) {
  LeakageResult r;
  r.spec = SpecFor(target);
  r.spec.model_id = "mbert";
  r.spec.include_monolingual = true;
  r.spec.monolingual_id = "bert-" + target;
  r.per_predictor.push_back({{Source::Human(), "EN"}, 0.1, 0.05, 0.04, true});
  r.per_predictor.push_back({{Source::Monolingual("bert-" + target), target}, coefficient, 0.01, 0.0, true});
  return r;
}

TEST(Monolingual, TableFollowsLanguageOrder) {
  std::vector<LeakageResult> results{MonoResult("ZH", 0.17), MonoResult("HI", 0.08),
                                     MonoResult("EN", 0.33), MonoResult("RU", 0.29)};
  const auto row = MonolingualReport(results, Bundled());
  ASSERT_EQ(row.size(), 4u);
  const std::vector<std::pair<std::string, double>> want{
      {"EN", 0.33}, {"RU", 0.29}, {"ZH", 0.17}, {"HI", 0.08}};
  EXPECT_EQ(row, want);
  std::reverse(results.begin(), results.end());
  EXPECT_EQ(MonolingualReport(results, Bundled()), want);
}

TEST(Monolingual, MissingPredictorIsError) {
  std::vector<LeakageResult> results{MonoResult("EN", 0.33)};
  results[0].per_predictor.pop_back();
  EXPECT_THROW(MonolingualReport(results, Bundled()), Error);
  std::vector<LeakageResult> dup{MonoResult("EN", 0.33), MonoResult("EN", 0.3)};
  EXPECT_THROW(MonolingualReport(dup, Bundled()), Error);
}

HumanProfileSet HumanSet(const std::map<std::string, std::vector<double>> &values) {
  HumanProfileSet set;
  for (const auto &[lang, v] : values) {
    set.profiles.emplace(lang, testutil::FullProfile(Bundled(), lang, Source::Human(),
                                                     ScaleKind::kBipolarSlider,
                                                     [&](std::size_t g, std::size_t k) {
                                                       return v[g * 16 + k];
                                                     }));
  }
  return set;
}

TEST(CategoryCorrelation, IdenticalAndNegated) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-40, 40);
  std::vector<double> base(480);
  for (double &x : base) x = u(rng);
  std::vector<double> neg(480);
  std::transform(base.begin(), base.end(), neg.begin(), [](double x) { return -x; });

  const HumanProfileSet same = HumanSet({{"EN", base}, {"RU", base}, {"ZH", base}, {"HI", base}});
  for (GroupCategory c : {GroupCategory::kSharedShared, GroupCategory::kSharedNonShared,
                          GroupCategory::kNonSharedNonShared}) {
    const CategoryCorrelation r = ComputeCategoryCorrelation(same, c, Bundled());
    EXPECT_NEAR(r.mean_r, 1.0, 1e-12);
    EXPECT_EQ(r.skipped, 0);
  }
  const HumanProfileSet two = HumanSet({{"EN", base}, {"RU", neg}});
  const CategoryCorrelation r = ComputeCategoryCorrelation(two, GroupCategory::kSharedShared, Bundled());
  EXPECT_NEAR(r.mean_r, -1.0, 1e-12);
  EXPECT_EQ(r.n_correlations, 10);
}

TEST(CategoryCorrelation, SymmetricInLanguageOrder) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-40, 40);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> v(4, std::vector<double>(480));
    for (auto &p : v)
      for (double &x : p) x = u(rng);
    std::vector<int> perm{0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    const HumanProfileSet a = HumanSet({{"EN", v[0]}, {"RU", v[1]}, {"ZH", v[2]}, {"HI", v[3]}});
    const HumanProfileSet b =
        HumanSet({{"EN", v[perm[0]]}, {"RU", v[perm[1]]}, {"ZH", v[perm[2]]}, {"HI", v[perm[3]]}});
    for (GroupCategory c : {GroupCategory::kSharedShared, GroupCategory::kNonSharedNonShared}) {
      EXPECT_NEAR(ComputeCategoryCorrelation(a, c, Bundled()).mean_r,
                  ComputeCategoryCorrelation(b, c, Bundled()).mean_r, 1e-12);
    }
  }
}

TEST(CategoryCorrelation, SkipsIncompleteAndFailsWhenNothingLeft) {
  std::vector<double> v(480, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = double(i % 7);
  HumanProfileSet set = HumanSet({{"EN", v}, {"RU", v}});
  set.profiles.at("RU") = Without(set.profiles.at("RU"), "man");
  const CategoryCorrelation r =
      ComputeCategoryCorrelation(set, GroupCategory::kSharedShared, Bundled());
  EXPECT_EQ(r.n_correlations, 9);
  EXPECT_GE(r.skipped, 1);
  const HumanProfileSet one = HumanSet({{"EN", v}});
  EXPECT_THROW(ComputeCategoryCorrelation(one, GroupCategory::kSharedShared, Bundled()), Error);
}

// Single-group standardized profile; unspecified cells are 0.
StereotypeProfile OneGroup(const std::string &lang, const Source &src,
                           const std::map<std::string, double> &values) {
  StereotypeProfile p(lang, src, ScaleKind::kStandardized);
  for (const TraitPair &tp : Bundled().trait_pairs()) {
    auto it = values.find(tp.id);
    p.Set({"vdv_soldier", tp.id, lang, src, it == values.end() ? 0.0 : it->second,
           ScaleKind::kStandardized, 1});
  }
  return p;
}

TEST(ExtractTraits, IdenticalHumansGiveNothing) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 50; ++trial) {
    const auto human = Std("EN", Source::Human(), [&](std::size_t, std::size_t) { return z(rng); });
    const auto model = Std("EN", Source::Model("m"), [&](std::size_t, std::size_t) { return z(rng); });
    StereotypeProfile source("RU", Source::Human(), ScaleKind::kStandardized);
    for (const auto &[key, s] : human.cells()) {
      AssociationScore c = s;
      c.language = "RU";
      source.Set(c);
    }
    EXPECT_TRUE(ExtractLeakedTraits(model, human, source, Bundled()).empty());
  }
}

TEST(ExtractTraits, EngineeredSinglePole) {
  const auto model = OneGroup("EN", Source::Model("m"),
                              {{"untrustworthy_trustworthy", 2.0}, {"cold_warm", -1.5},
                               {"poor_wealthy", 1.0}});
  const auto target = OneGroup("EN", Source::Human(), {{"untrustworthy_trustworthy", 0.1},
                                                       {"cold_warm", -1.0}});
  const auto source = OneGroup("RU", Source::Human(), {{"untrustworthy_trustworthy", 1.2}});
  const auto traits = ExtractLeakedTraits(model, target, source, Bundled());
  ASSERT_EQ(traits.size(), 1u);
  EXPECT_EQ(traits[0].pole_name, "trustworthy");
  EXPECT_EQ(traits[0].pole, Pole::kRight);
  EXPECT_EQ(traits[0].model_rank, 1);
  EXPECT_EQ(traits[0].source_language, "RU");
  EXPECT_EQ(traits[0].target_language, "EN");
  EXPECT_DOUBLE_EQ(*traits[0].human_target_value, 0.1);
  EXPECT_DOUBLE_EQ(traits[0].human_source_value, 1.2);
}

TEST(ExtractTraits, LeftPoleAndAbsentTarget) {
  const auto model = OneGroup("EN", Source::Model("m"), {{"religious_science_oriented", -2.0}});
  const StereotypeProfile target("EN", Source::Human(), ScaleKind::kStandardized);
  const auto source = OneGroup("RU", Source::Human(), {{"religious_science_oriented", -0.9}});
  const auto traits = ExtractLeakedTraits(model, target, source, Bundled());
  ASSERT_EQ(traits.size(), 1u);
  EXPECT_EQ(traits[0].pole_name, "religious");
  EXPECT_FALSE(traits[0].human_target_value.has_value());
  EXPECT_DOUBLE_EQ(traits[0].human_source_value, 0.9);
}

TEST(ExtractTraits, Errors) {
  const auto p = OneGroup("EN", Source::Human(), {});
  EXPECT_THROW(ExtractLeakedTraits(p, p, p, Bundled(), {0, 0.5}), Error);
  EXPECT_THROW(ExtractLeakedTraits(p, p, p, Bundled(), {5, 0.0}), Error);
  const StereotypeProfile raw("EN", Source::Human(), ScaleKind::kBipolarSlider);
  EXPECT_THROW(ExtractLeakedTraits(p, raw, p, Bundled()), Error);
}

using TraitKey = std::tuple<std::string, std::string, Pole>;

std::set<TraitKey> Keys(const std::vector<LeakedTrait> &traits) {
  std::set<TraitKey> out;
  for (const auto &t : traits) out.insert({t.group, t.pair, t.pole});
  return out;
}

struct RandomTriple {
  StereotypeProfile model, target, source;
};

RandomTriple Triple(std::mt19937_64 &rng) {
  std::normal_distribution<double> z;
  return {Std("EN", Source::Model("m"), [&](std::size_t, std::size_t) { return z(rng); }),
          Std("EN", Source::Human(), [&](std::size_t, std::size_t) { return z(rng); }),
          Std("RU", Source::Human(), [&](std::size_t, std::size_t) { return z(rng); })};
}

TEST(ExtractTraits, OutputMatchesTheSelectionRule) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> theta_draw(0.1, 1.5);
  for (int trial = 0; trial < 200; ++trial) {
    const RandomTriple t = Triple(rng);
    const ExtractionOptions opt{1 + static_cast<int>(rng() % 8), theta_draw(rng)};
    const auto traits = ExtractLeakedTraits(t.model, t.target, t.source, Bundled(), opt);
    for (const LeakedTrait &lt : traits) {
      EXPECT_GE(lt.model_rank, 1);
      EXPECT_LE(lt.model_rank, opt.k);
      EXPECT_LT(*lt.human_target_value, opt.theta);
      EXPECT_GE(lt.human_source_value, opt.theta);
    }
    // Brute force over each group's top-k poles.
    std::set<TraitKey> expected;
    for (const SocialGroup &g : Bundled().groups()) {
      std::vector<std::pair<double, std::pair<std::string, Pole>>> poles;
      for (const TraitPair &tp : Bundled().trait_pairs()) {
        const double v = *t.model.Value(g.id, tp.id);
        poles.push_back({v, {tp.id, Pole::kRight}});
        poles.push_back({-v, {tp.id, Pole::kLeft}});
      }
      std::stable_sort(poles.begin(), poles.end(),
                       [](const auto &a, const auto &b) { return a.first > b.first; });
      for (int r = 0; r < opt.k; ++r) {
        const auto &[pair, pole] = poles[r].second;
        const double sign = pole == Pole::kRight ? 1.0 : -1.0;
        if (sign * *t.target.Value(g.id, pair) < opt.theta &&
            sign * *t.source.Value(g.id, pair) >= opt.theta) {
          expected.insert({g.id, pair, pole});
        }
      }
    }
    EXPECT_EQ(Keys(traits), expected);
  }
}

TEST(ExtractTraits, RaisingThetaOnlyAddsTraitsWithTargetBetweenThresholds) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const RandomTriple t = Triple(rng);
    const double lo = 0.2 + 0.5 * double(rng() % 100) / 100.0, hi = lo + 0.4;
    const auto low = ExtractLeakedTraits(t.model, t.target, t.source, Bundled(), {5, lo});
    const auto high = ExtractLeakedTraits(t.model, t.target, t.source, Bundled(), {5, hi});
    const auto low_keys = Keys(low);
    for (const LeakedTrait &lt : high) {
      if (low_keys.count({lt.group, lt.pair, lt.pole})) continue;
      EXPECT_GE(*lt.human_target_value, lo);
      EXPECT_LT(*lt.human_target_value, hi);
    }
  }
}

TEST(ExtractTraits, MonotoneInTheta) {
  // Raising theta never adds a leaked trait.
  std::mt19937_64 rng(15);
  int added = 0, trials_with_additions = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const RandomTriple t = Triple(rng);
    const auto low = Keys(ExtractLeakedTraits(t.model, t.target, t.source, Bundled(), {5, 0.5}));
    const auto high = Keys(ExtractLeakedTraits(t.model, t.target, t.source, Bundled(), {5, 0.9}));
    const int before = added;
    for (const TraitKey &k : high) added += low.count(k) ? 0 : 1;
    trials_with_additions += added > before;
  }
  EXPECT_EQ(added, 0) << "traits added by raising theta 0.5 -> 0.9, over "
                      << trials_with_additions << " of 200 random cases";
}

}  // namespace
}  // namespace stereoleak
