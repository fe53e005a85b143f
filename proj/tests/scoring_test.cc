// tests/scoring_test.cc

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

#include "stereoleak/scoring.hpp"
#include "test_util.hpp"

namespace stereoleak {
namespace {

ProbeRecord LogProb(double lp, std::optional<double> baseline = std::nullopt,
                    Pole pole = Pole::kRight, std::string tmpl = "t0") {
  ProbeRecord r{"m", "EN", "woman", "cold_warm", pole, std::move(tmpl),
                LogProbPayload{lp, baseline}};
  return r;
}

ProbeRecord Sensitivity(double w, Pole pole = Pole::kRight) {
  return ProbeRecord{"m", "EN", "woman", "cold_warm", pole, "t0", SensitivityPayload{w}};
}

ProbeRecord Chat(const std::string &text, int rep) {
  return ProbeRecord{"m", "EN", "woman", "powerless_powerful", std::nullopt, "chat",
                     ChatPayload{text, rep}};
}

const PolePair kPowerForms{"powerless", "powerful"};

TEST(Ilps, MeansAndBaseline) {
  std::vector<ProbeRecord> one{LogProb(-1.2)};
  EXPECT_DOUBLE_EQ(IlpsScore(one).value, -1.2);
  std::vector<ProbeRecord> two{LogProb(-1.0, std::nullopt, Pole::kRight, "a"),
                               LogProb(-3.0, std::nullopt, Pole::kRight, "b")};
  EXPECT_DOUBLE_EQ(IlpsScore(two).value, -2.0);
  EXPECT_EQ(IlpsScore(two).n, 2);
  std::vector<ProbeRecord> norm{LogProb(-1.0, -2.0)};
  EXPECT_DOUBLE_EQ(IlpsScore(norm, true).value, 1.0);
  EXPECT_EQ(IlpsScore(norm).scale, ScaleKind::kLogProb);
}

TEST(Ilps, Errors) {
  EXPECT_THROW(IlpsScore({}), Error);
  std::vector<ProbeRecord> no_base{LogProb(-1.0)};
  EXPECT_THROW(IlpsScore(no_base, true), Error);
  std::vector<ProbeRecord> mixed{LogProb(-1.0), LogProb(-1.0, std::nullopt, Pole::kLeft)};
  EXPECT_THROW(IlpsScore(mixed), Error);
}

TEST(SeT, NegatedMean) {
  std::vector<ProbeRecord> zero{Sensitivity(0.0)};
  EXPECT_EQ(SetScore(zero).value, 0.0);
  std::vector<ProbeRecord> two{Sensitivity(0.2), Sensitivity(0.4)};
  EXPECT_NEAR(SetScore(two).value, -0.3, 1e-15);
  EXPECT_EQ(SetScore(two).scale, ScaleKind::kSensitivity);
  std::vector<ProbeRecord> bad{Sensitivity(-0.1)};
  EXPECT_THROW(SetScore(bad), Error);
}

TEST(PoleScores, PermutationInvariant) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-8.0, 0.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ProbeRecord> lp, se;
    const int n = 1 + static_cast<int>(rng() % 9);
    for (int i = 0; i < n; ++i) {
      lp.push_back(LogProb(u(rng), u(rng), Pole::kRight, "t" + std::to_string(i)));
      se.push_back(Sensitivity(-u(rng)));
    }
    const double a = IlpsScore(lp, true).value, b = SetScore(se).value;
    std::shuffle(lp.begin(), lp.end(), rng);
    std::shuffle(se.begin(), se.end(), rng);
    EXPECT_NEAR(IlpsScore(lp, true).value, a, 1e-12);
    EXPECT_NEAR(SetScore(se).value, b, 1e-12);
  }
}

TEST(ChatCounts, SevenOfTen) {
  std::vector<ProbeRecord> recs;
  for (int i = 0; i < 10; ++i) {
    recs.push_back(Chat(i < 7 ? "Theme: Powerful. A story." : "theme: powerless", i));
  }
  const CountScore c = ScoreChatCounts(recs, kPowerForms);
  EXPECT_EQ(c.right_fraction, (Fraction{7, 10}));
  EXPECT_DOUBLE_EQ(c.right.value, 0.7);
  EXPECT_DOUBLE_EQ(c.left.value, 0.3);
  EXPECT_EQ(c.right.n, 10);
  EXPECT_NEAR(PairDifferential(c.left, c.right).value, 0.4, 1e-15);
  EXPECT_EQ(PairDifferential(c.left, c.right).scale, ScaleKind::kCountDifferential);
}

TEST(ChatCounts, BoundaryAndErrors) {
  std::vector<ProbeRecord> all_left;
  for (int i = 0; i < 10; ++i) all_left.push_back(Chat("powerless", i));
  const CountScore c = ScoreChatCounts(all_left, kPowerForms);
  EXPECT_EQ(c.left.value, 1.0);
  EXPECT_EQ(c.right.value, 0.0);

  std::vector<ProbeRecord> none;
  for (int i = 0; i < 10; ++i) none.push_back(Chat("no theme", i));
  EXPECT_THROW(ScoreChatCounts(none, kPowerForms), Error);

  std::vector<ProbeRecord> dup{Chat("powerful", 0), Chat("powerless", 0)};
  EXPECT_THROW(ScoreChatCounts(dup, kPowerForms), Error);
}

TEST(ChatCounts, ClassificationMasksSubstrings) {
  const PolePair conf{"unconfident", "confident"};
  EXPECT_EQ(ClassifyChatResponse("UNCONFIDENT", conf), ChatChoice::kLeft);
  EXPECT_EQ(ClassifyChatResponse("a confident tale", conf), ChatChoice::kRight);
  EXPECT_EQ(ClassifyChatResponse("unconfident or confident", conf), ChatChoice::kUnparseable);
  EXPECT_EQ(ClassifyChatResponse("powerful and powerless", kPowerForms),
            ChatChoice::kUnparseable);
  const PolePair ru{"бессильный", "могущественный"};
  EXPECT_EQ(ClassifyChatResponse("Тема: Могущественный", ru), ChatChoice::kRight);
}

TEST(ChatCounts, FractionsSumToOne) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<ProbeRecord> recs;
    const int n = 1 + static_cast<int>(rng() % 30);
    bool any = false;
    for (int i = 0; i < n; ++i) {
      const int pick = static_cast<int>(rng() % 4);
      any |= pick < 2;
      recs.push_back(Chat(pick == 0 ? "powerless" : pick == 1 ? "Powerful" : "nothing", i));
    }
    if (!any) recs.push_back(Chat("powerful", n));
    const CountScore c = ScoreChatCounts(recs, kPowerForms);
    EXPECT_EQ(c.left_fraction.num + c.right_fraction.num, c.left_fraction.den);
    EXPECT_EQ(c.left_fraction.den, c.right_fraction.den);
    EXPECT_NEAR(c.left.value + c.right.value, 1.0, 1e-12);
  }
}

TEST(Differential, SubtractionAndAntisymmetry) {
  PoleScore l{"m", "EN", "woman", "cold_warm", Pole::kLeft, -2.0, ScaleKind::kLogProb, 1};
  PoleScore r = l;
  r.pole = Pole::kRight;
  r.value = -1.0;
  EXPECT_DOUBLE_EQ(PairDifferential(l, r).value, 1.0);
  r.value = l.value;
  EXPECT_EQ(PairDifferential(l, r).value, 0.0);

  std::mt19937_64 rng(2);
  std::normal_distribution<double> z;
  for (int i = 0; i < 1000; ++i) {
    PoleScore a = l, b = r;
    a.value = z(rng);
    b.value = z(rng);
    EXPECT_EQ(PairDifferential(a, b).value, -PairDifferential(b, a).value);
  }
  PoleScore other = r;
  other.scale = ScaleKind::kSensitivity;
  EXPECT_THROW(PairDifferential(l, other), Error);
  other = r;
  other.group = "man";
  EXPECT_THROW(PairDifferential(l, other), Error);
}

StereotypeProfile SmallProfile(const std::vector<double> &values) {
  StereotypeProfile p("EN", Source::Model("m"), ScaleKind::kLogProb);
  const auto &pairs = testutil::Bundled().trait_pairs();
  for (std::size_t i = 0; i < values.size(); ++i) {
    p.Set({"woman", pairs[i].id, "EN", Source::Model("m"), values[i], ScaleKind::kLogProb, 1});
  }
  return p;
}

TEST(Standardize, HandComputed) {
  const StereotypeProfile z = Standardize(SmallProfile({1, 2, 3}));
  const auto &pairs = testutil::Bundled().trait_pairs();
  EXPECT_NEAR(*z.Value("woman", pairs[0].id), -1.0, 1e-15);
  EXPECT_NEAR(*z.Value("woman", pairs[1].id), 0.0, 1e-15);
  EXPECT_NEAR(*z.Value("woman", pairs[2].id), 1.0, 1e-15);
  EXPECT_EQ(z.scale(), ScaleKind::kStandardized);
  EXPECT_THROW(Standardize(SmallProfile({5, 5, 5})), Error);
  EXPECT_THROW(Standardize(SmallProfile({5})), Error);
}

TEST(Standardize, MomentsIdempotenceAndAffineInvariance) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> z(0.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double alpha = std::exp(z(rng)), beta = 10.0 * z(rng);
    std::vector<double> draws(30 * 16);
    for (double &d : draws) d = z(rng);
    auto draw = [&](std::size_t g, std::size_t k) { return draws[g * 16 + k]; };
    auto shifted = [&](std::size_t g, std::size_t k) { return alpha * draws[g * 16 + k] + beta; };
    const auto p = testutil::FullProfile(testutil::Bundled(), "EN", Source::Model("m"),
                                         ScaleKind::kLogProb, draw);
    const auto q = testutil::FullProfile(testutil::Bundled(), "EN", Source::Model("m"),
                                         ScaleKind::kLogProb, shifted);
    for (StandardizeMode mode : {StandardizeMode::kWholeProfile, StandardizeMode::kPerPair}) {
      const StereotypeProfile sp = Standardize(p, mode);
      const StereotypeProfile sq = Standardize(q, mode);
      const StereotypeProfile twice = Standardize(sp, mode);
      double sum = 0.0, sq_sum = 0.0;
      for (const auto &[key, s] : sp.cells()) {
        EXPECT_NEAR(sq.Find(key.group, key.pair)->value, s.value, 1e-9);
        EXPECT_NEAR(twice.Find(key.group, key.pair)->value, s.value, 1e-9);
        sum += s.value;
        sq_sum += s.value * s.value;
      }
      const double n = double(sp.size());
      EXPECT_NEAR(sum / n, 0.0, 1e-12);
      if (mode == StandardizeMode::kWholeProfile) {
        EXPECT_NEAR(std::sqrt(sq_sum / (n - 1.0)), 1.0, 1e-12);
      }
    }
  }
}

std::string Header(const std::string &model) {
  return "{\"probe_schema\": 1, \"model_id\": \"" + model + "\", \"logprob_base\": \"e\"}\n";
}

std::string LogProbLine(const std::string &group, const std::string &pair, const char *pole,
                        double lp) {
  return "{\"model_id\": \"m\", \"language\": \"EN\", \"group\": \"" + group +
         "\", \"pair\": \"" + pair + "\", \"pole\": \"" + pole +
         "\", \"template_id\": \"t\", \"kind\": \"LogProb\", \"payload\": {\"logprob_nats\": " +
         std::to_string(lp) + "}, \"extra\": 1}\n";
}

TEST(Dump, ParsesAndValidates) {
  const std::string text = Header("m") + LogProbLine("woman", "cold_warm", "Right", -1.0) +
                           LogProbLine("woman", "cold_warm", "Left", -2.0);
  const ProbeDump dump = ParseProbeDump(text, &testutil::Bundled());
  ASSERT_EQ(dump.records.size(), 2u);
  EXPECT_EQ(dump.records[0].kind(), ProbeKind::kLogProb);
  EXPECT_EQ(dump.records[1].pole, Pole::kLeft);

  const ScoredDump scored = ScoreDump(dump, testutil::Bundled());
  EXPECT_EQ(scored.method, ScoringMethod::kIlps);
  ASSERT_EQ(scored.profiles.size(), 1u);
  EXPECT_DOUBLE_EQ(*scored.profiles[0].Value("woman", "cold_warm"), 1.0);
  EXPECT_EQ(scored.profiles[0].source(), Source::Model("m"));

  ScoringOptions mono;
  mono.monolingual_id = "bert-en";
  EXPECT_EQ(ScoreDump(dump, testutil::Bundled(), mono).profiles[0].source(),
            Source::Monolingual("bert-en"));
}

TEST(Dump, Errors) {
  const std::string good = LogProbLine("woman", "cold_warm", "Right", -1.0);
  EXPECT_THROW(ParseProbeDump(good), ParseError);  // no header
  try {
    std::string missing = good;
    missing.replace(missing.find("\"pair\""), 6, "\"pear\"");
    ParseProbeDump(Header("m") + good + missing);
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(ParseProbeDump(Header("other") + good), ParseError);
  EXPECT_THROW(ParseProbeDump("{\"probe_schema\": 1, \"model_id\": \"m\", \"logprob_base\": "
                              "\"10\"}\n"),
               ParseError);
  EXPECT_THROW(ParseProbeDump(Header("m") + LogProbLine("nobody", "cold_warm", "Right", -1.0),
                              &testutil::Bundled()),
               Error);
}

}  // namespace
}  // namespace stereoleak
