// tests/pipeline_test.cc

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

#include <cstdio>
#include <cstdlib>
#include <set>

#include "json.hpp"
#include "stereoleak/fixture.hpp"
#include "stereoleak/io.hpp"
#include "stereoleak/pipeline.hpp"
#include "stereoleak/text.hpp"
#include "test_util.hpp"

namespace stereoleak {
namespace {

namespace fs = std::filesystem;

class Pipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = testutil::ScratchDir("pipeline");
    manifest_ = GenerateFixture(root_ / "fixture", testutil::Bundled());
    config_ = LoadConfig(manifest_.config);
    config_.output_dir = root_ / "out";
    summaries_ = RunAll(config_);
  }

  static fs::path Out(const std::string &name) { return config_.output_dir / name; }

  static inline fs::path root_;
  static inline FixtureManifest manifest_;
  static inline RunConfig config_;
  static inline std::vector<StepSummary> summaries_;
};

TEST_F(Pipeline, SummaryLines) {
  ASSERT_EQ(summaries_.size(), 5u);
  EXPECT_EQ(summaries_[0].Line().rfind("stereoleak ingest-survey status=ok respondents=286 passed=151", 0),
            0u)
      << summaries_[0].Line();
  EXPECT_EQ(summaries_[4].command, "report");
}

TEST_F(Pipeline, QualityGateCounts) {
  const auto q = nlohmann::json::parse(ReadTextFile(Out(outputs::kQualityReport)));
  EXPECT_EQ(q["quality_schema"], 1);
  EXPECT_EQ(q["total"], 286);
  EXPECT_EQ(q["passed"], 151);
  EXPECT_EQ(q["per_language"]["EN"]["passed"], 34);
  EXPECT_EQ(q["per_language"]["RU"]["passed"], 36);
  EXPECT_EQ(q["per_language"]["ZH"]["passed"], 41);
  EXPECT_EQ(q["per_language"]["HI"]["passed"], 40);
}

TEST_F(Pipeline, EveryFlagFollowsTheRule) {
  for (const char *file : {outputs::kLeakage, outputs::kLeakageMonolingual}) {
    const auto results = ParseLeakage(ReadTextFile(Out(file)));
    ASSERT_FALSE(results.empty());
    for (const LeakageResult &r : results) {
      for (const PredictorEffect &e : r.per_predictor) {
        EXPECT_EQ(e.significant, e.coefficient > 0.0 && e.p_value < 0.05);
      }
    }
  }
}

TEST_F(Pipeline, PlantedCrossFlowsAreFound) {
  const auto results = ParseLeakage(ReadTextFile(Out(outputs::kLeakage)));
  for (const PlantedFlow &p : manifest_.planted) {
    if (p.coefficient < 0.1) continue;
    bool found = false;
    for (const LeakageResult &r : results) {
      if (r.spec.model_id != p.model_id || r.spec.target_language != p.target_language) continue;
      const PredictorEffect *e = r.Find({Source::Human(), p.source_language});
      ASSERT_NE(e, nullptr);
      EXPECT_TRUE(e->significant) << p.model_id << " " << p.source_language << "->"
                                  << p.target_language;
      found = true;
    }
    EXPECT_TRUE(found);
  }
}

TEST_F(Pipeline, VdvSoldierTraitsLeakFromRussian) {
  const auto traits = ParseLeakedTraits(ReadTextFile(Out(outputs::kLeakedTraits)));
  std::set<std::string> poles;
  for (const LeakedTrait &t : traits) {
    if (t.model_id == "chatgpt" && t.group == "vdv_soldier" && t.source_language == "RU" &&
        t.target_language == "EN") {
      poles.insert(t.pole_name);
      EXPECT_FALSE(t.human_target_value.has_value());  // no EN respondent chose the group
    }
  }
  for (const char *want : {"trustworthy", "sincere", "threatening", "confident"}) {
    EXPECT_TRUE(poles.count(want)) << want;
  }
}

TEST_F(Pipeline, VdvRowsDroppedForEnglishHumans) {
  const auto results = ParseLeakage(ReadTextFile(Out(outputs::kLeakage)));
  for (const LeakageResult &r : results) {
    EXPECT_EQ(r.dropped_reasons.at("missing predictor Human(EN)"), 16);
  }
}

std::map<std::string, std::string> Snapshot(const fs::path &dir) {
  std::map<std::string, std::string> out;
  for (const auto &entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) {
      out[fs::relative(entry.path(), dir).generic_string()] = ReadTextFile(entry.path());
    }
  }
  return out;
}

TEST_F(Pipeline, RerunIsByteIdentical) {
  RunConfig again = config_;
  again.output_dir = root_ / "out2";
  RunAll(again);
  const auto a = Snapshot(config_.output_dir), b = Snapshot(again.output_dir);
  EXPECT_GT(a.size(), 30u);
  EXPECT_EQ(a, b);
}

TEST_F(Pipeline, FixtureIsReproducible) {
  const FixtureManifest m = GenerateFixture(root_ / "fixture2", testutil::Bundled());
  EXPECT_EQ(Snapshot(manifest_.root).size(), Snapshot(m.root).size());
  EXPECT_EQ(ReadTextFile(manifest_.ratings), ReadTextFile(m.ratings));
  EXPECT_EQ(ReadTextFile(manifest_.dumps.front()), ReadTextFile(m.dumps.front()));
}

TEST(PipelineErrors, ReportBeforeFit) {
  RunConfig c;
  c.output_dir = testutil::ScratchDir("report_before_fit");
  try {
    RunReport(c);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kLoad);
    EXPECT_NE(std::string(e.what()).find("missing results"), std::string::npos);
  }
}

TEST(PipelineErrors, SimulateSmall) {
  RunConfig c;
  c.output_dir = testutil::ScratchDir("simulate");
  c.reps = 20;
  c.seed = 3;
  const StepSummary s = RunSimulate(c);
  EXPECT_EQ(s.command, "simulate");
  const auto j = nlohmann::json::parse(ReadTextFile(c.output_dir / outputs::kSimulation));
  EXPECT_EQ(j["simulation_schema"], 1);
  const std::string first = ReadTextFile(c.output_dir / outputs::kSimulation);
  RunSimulate(c);
  EXPECT_EQ(ReadTextFile(c.output_dir / outputs::kSimulation), first);
}

// CLI behaviour through the real binary.
struct CliResult {
  int exit_code;
  std::string err;
  std::string out;
};

CliResult RunCli(const std::string &args, const std::string &env = "") {
  const fs::path dir = testutil::ScratchDir("cli_capture");
  const std::string cmd = env + " '" STEREOLEAK_CLI_PATH "' " + args + " >'" +
                          (dir / "out").string() + "' 2>'" + (dir / "err").string() + "'";
  const int status = std::system(cmd.c_str());
  CliResult r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, ReadTextFile(dir / "err"),
              ReadTextFile(dir / "out")};
  return r;
}

TEST(Cli, ReportBeforeFitExitsOne) {
  const fs::path dir = testutil::ScratchDir("cli_report");
  const CliResult r = RunCli("report --output-dir '" + dir.string() + "'");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("missing results"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("status=error kind=load"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(RunCli("frobnicate").exit_code, 2);
  EXPECT_EQ(RunCli("fit --no-such-flag").exit_code, 2);
  EXPECT_EQ(RunCli("").exit_code, 2);
  EXPECT_EQ(RunCli("fit --alpha 3").exit_code, 2);
}

TEST(Cli, ConfigFromEnvironmentAndFlagsWin) {
  const fs::path dir = testutil::ScratchDir("cli_env");
  WriteTextFile(dir / "a.conf", "output_dir = from_config\nreps = 5\nseed = 1\n");
  const CliResult r =
      RunCli("simulate --output-dir '" + (dir / "flag").string() + "'",
             "STEREOLEAK_CONFIG='" + (dir / "a.conf").string() + "'");
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("stereoleak simulate status=ok", 0), 0u) << r.out;
  EXPECT_TRUE(fs::exists(dir / "flag" / outputs::kSimulation));
  EXPECT_FALSE(fs::exists(dir / "from_config"));
}

}  // namespace
}  // namespace stereoleak
