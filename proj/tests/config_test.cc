// tests/config_test.cc

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

#include "stereoleak/config.hpp"
#include "stereoleak/text.hpp"
#include "test_util.hpp"

namespace stereoleak {
namespace {

TEST(Config, ParsesKeysAndResolvesPaths) {
  const RunConfig c = ParseConfig(
      "# comment\n"
      "registry = reg.json\n"
      "dump = a.jsonl\n"
      "dump = /abs/b.jsonl   # trailing comment\n"
      "alpha = 0.01\n"
      "bonferroni = true\n"
      "method = ML\n"
      "standardize = per_pair\n"
      "grouping = TraitPair\n"
      "k = 3\n"
      "theta = 0.75\n"
      "seed = 123\n"
      "output_dir = results\n",
      "/base");
  EXPECT_EQ(c.registry, std::filesystem::path("/base/reg.json"));
  ASSERT_EQ(c.dumps.size(), 2u);
  EXPECT_EQ(c.dumps[0], std::filesystem::path("/base/a.jsonl"));
  EXPECT_EQ(c.dumps[1], std::filesystem::path("/abs/b.jsonl"));
  EXPECT_EQ(c.alpha, 0.01);
  EXPECT_TRUE(c.bonferroni);
  EXPECT_EQ(c.method, mixedfx::Method::kMl);
  EXPECT_EQ(c.standardize, StandardizeMode::kPerPair);
  EXPECT_EQ(c.grouping, Grouping::kTraitPair);
  EXPECT_EQ(c.k, 3);
  EXPECT_EQ(c.theta, 0.75);
  EXPECT_EQ(c.seed, 123u);
  EXPECT_EQ(c.output_dir, std::filesystem::path("/base/results"));
}

TEST(Config, Defaults) {
  const RunConfig c = ParseConfig("", "/x");
  EXPECT_EQ(c.alpha, 0.05);
  EXPECT_EQ(c.k, 5);
  EXPECT_EQ(c.theta, 0.5);
  EXPECT_EQ(c.method, mixedfx::Method::kReml);
  EXPECT_EQ(c.RegistryPath(), BundledRegistryPath());
}

TEST(Config, RejectsBadInput) {
  for (const char *bad : {"nonsense = 1\n", "alpha = 1.5\n", "alpha = x\n", "k = 0\n",
                          "theta = -1\n", "method = Bayes\n", "bonferroni = maybe\n"}) {
    try {
      ParseConfig(bad, "/x");
      FAIL() << bad;
    } catch (const Error &e) {
      EXPECT_EQ(e.kind(), ErrorKind::kUsage) << bad;
    }
  }
  try {
    ParseConfig("alpha = 0.1\nno equals sign\n", "/x");
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Config, EveryKeyIsAccepted) {
  for (const std::string &key : ConfigKeys()) {
    RunConfig c;
    std::string value = "1";
    if (key == "scoring") value = "auto";
    if (key == "grouping") value = "SocialGroup";
    if (key == "method") value = "REML";
    if (key == "standardize") value = "whole";
    if (key == "alpha" || key == "theta") value = "0.2";
    if (key == "bonferroni" || key == "raw" || key == "cross_only" ||
        key == "normalize_by_baseline") {
      value = "false";
    }
    if (key == "monolingual_for") value = "mbert";
    EXPECT_NO_THROW(ApplySetting(c, key, value, "/x")) << key;
  }
}

TEST(Config, LoadAndCheckPaths) {
  const auto dir = testutil::ScratchDir("config");
  WriteTextFile(dir / "run.conf", "survey_ratings = missing.csv\n");
  const RunConfig c = LoadConfig(dir / "run.conf");
  EXPECT_EQ(c.survey_ratings, dir / "missing.csv");
  try {
    CheckPaths(c);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kLoad);
    EXPECT_NE(std::string(e.what()).find("missing.csv"), std::string::npos);
  }
  EXPECT_THROW(LoadConfig(dir / "absent.conf"), Error);
}

}  // namespace
}  // namespace stereoleak
