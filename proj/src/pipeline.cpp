// src/pipeline.cpp

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

#include "stereoleak/pipeline.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "stereoleak/io.hpp"
#include "stereoleak/mixedfx/simulate.hpp"
#include "stereoleak/report.hpp"
#include "stereoleak/text.hpp"

namespace stereoleak {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::string StepSummary::Line() const {
  std::string out = "stereoleak " + command + " status=ok";
  for (const auto &[k, v] : fields) out += " " + k + "=" + v;
  return out;
}

namespace {

Registry LoadRegistry(const RunConfig &c) { return Registry::LoadFile(c.RegistryPath()); }

void Write(const RunConfig &c, const fs::path &name, std::string_view contents) {
  WriteTextFile(c.output_dir / name, contents);
}

std::string ReadOutput(const RunConfig &c, const char *name, const char *missing_what,
                       const char *producer) {
  const fs::path p = c.output_dir / name;
  if (!fs::exists(p)) {
    throw Error(ErrorKind::kLoad, std::string(missing_what) + ": " + p.string() + " (run `" +
                                      producer + "` first)");
  }
  return ReadTextFile(p);
}

/// Human and model profiles, standardized unless `raw`.
ProfileStore BuildStore(const ProfileBundle &human, const ProfileBundle &models, bool raw,
                        StandardizeMode mode) {
  ProfileStore store;
  for (const auto *bundle : {&human, &models}) {
    for (const StereotypeProfile &p : bundle->profiles) {
      if (p.empty()) continue;
      store.Add(raw ? p : Standardize(p, mode));
    }
  }
  return store;
}

std::vector<std::string> ModelIds(const ProfileStore &store) {
  std::set<std::string> ids;
  for (const auto &[key, p] : store.all()) {
    if (key.first.kind == Source::Kind::kModel) ids.insert(key.first.model_id);
  }
  return {ids.begin(), ids.end()};
}

std::vector<SurveyResponse> IngestResponses(const RunConfig &c, const Registry &registry) {
  if (!c.survey_ratings || !c.survey_familiarity) {
    throw Error(ErrorKind::kUsage, "survey_ratings and survey_familiarity must be configured");
  }
  return ParseSurvey(ReadSurveyFiles(*c.survey_ratings, *c.survey_familiarity, c.survey_checks,
                                     c.survey_demographics),
                     registry);
}

}  // namespace

StepSummary RunValidate(const RunConfig &c) {
  StepSummary s{"validate", {}};
  CheckPaths(c);
  const Registry registry = LoadRegistry(c);
  bool canonical = true;
  try {
    registry.CheckCanonical();
  } catch (const Error &) {
    canonical = false;
  }
  s.Add("languages", std::to_string(registry.languages().size()));
  s.Add("pairs", std::to_string(registry.trait_pairs().size()));
  s.Add("groups", std::to_string(registry.groups().size()));
  s.Add("canonical", canonical ? "yes" : "no");
  if (c.survey_ratings && c.survey_familiarity) {
    s.Add("respondents", std::to_string(IngestResponses(c, registry).size()));
  }
  std::size_t records = 0, warnings = 0;
  std::vector<fs::path> all = c.dumps;
  all.insert(all.end(), c.monolingual_dumps.begin(), c.monolingual_dumps.end());
  for (const fs::path &p : all) {
    const ProbeDump dump = ParseProbeDump(ReadTextFile(p), &registry);
    records += dump.records.size();
    warnings += dump.warnings.size();
  }
  s.Add("dumps", std::to_string(all.size()));
  s.Add("records", std::to_string(records));
  s.Add("warnings", std::to_string(warnings));
  return s;
}

StepSummary RunIngest(const RunConfig &c) {
  StepSummary s{"ingest-survey", {}};
  CheckPaths(c);
  const Registry registry = LoadRegistry(c);
  const std::vector<SurveyResponse> responses = IngestResponses(c, registry);
  const GateResult gate = QualityGate(responses, c.required_checks);
  AggregateOptions agg;
  agg.min_annotators = c.min_annotators;
  const HumanProfileSet human = AggregateHumanScores(gate.passed, registry, agg);
  Write(c, outputs::kHumanProfiles, SerializeProfiles(BundleOf(human)));

  ojson q;
  q["quality_schema"] = 1;
  q["required_checks"] = c.required_checks;
  q["total"] = gate.report.total;
  q["passed"] = gate.report.passed;
  ojson per = ojson::object();
  for (const Language &l : registry.languages()) {
    auto it = gate.report.per_language.find(l.code);
    if (it == gate.report.per_language.end()) continue;
    per[l.code] = {{"total", it->second.total}, {"passed", it->second.passed}};
  }
  q["per_language"] = std::move(per);
  q["missing_checks"] = gate.report.missing_checks;
  Write(c, outputs::kQualityReport, q.dump(1) + "\n");

  if (c.survey_demographics) {
    const DemographicSummary demo = SummarizeDemographics(gate.passed);
    ojson d;
    d["demographics_schema"] = 1;
    ojson langs = ojson::object();
    for (const auto &[lang, keys] : demo.counts) {
      ojson jl;
      jl["respondents"] = demo.respondents.at(lang);
      ojson jk = ojson::object();
      for (const auto &[key, answers] : keys) {
        ojson ja = ojson::object();
        for (const auto &[answer, n] : answers) ja[answer] = n;
        jk[key] = std::move(ja);
      }
      jl["counts"] = std::move(jk);
      langs[lang] = std::move(jl);
    }
    d["languages"] = std::move(langs);
    Write(c, outputs::kDemographics, d.dump(1) + "\n");
  }

  s.Add("respondents", std::to_string(gate.report.total));
  s.Add("passed", std::to_string(gate.report.passed));
  for (const Language &l : registry.languages()) {
    auto it = gate.report.per_language.find(l.code);
    s.Add("passed_" + l.code,
          std::to_string(it == gate.report.per_language.end() ? 0 : it->second.passed));
  }
  s.Add("coverage_flags", std::to_string(human.flags.size()));
  s.Add("out", (c.output_dir / outputs::kHumanProfiles).string());
  return s;
}

StepSummary RunScore(const RunConfig &c) {
  StepSummary s{"score", {}};
  CheckPaths(c);
  if (c.dumps.empty() && c.monolingual_dumps.empty()) {
    throw Error(ErrorKind::kUsage, "score: no probe dumps configured");
  }
  const Registry registry = LoadRegistry(c);
  ProfileBundle bundle;
  std::set<std::pair<Source, std::string>> seen;
  std::size_t records = 0;
  auto score = [&](const fs::path &path, bool monolingual) {
    const ProbeDump dump = ParseProbeDump(ReadTextFile(path), &registry);
    records += dump.records.size();
    ScoringOptions options;
    options.method = c.scoring;
    options.normalize_by_baseline = c.normalize_by_baseline;
    if (monolingual) options.monolingual_id = dump.header.model_id;
    ScoredDump scored = ScoreDump(dump, registry, options);
    for (const std::string &w : dump.warnings) {
      bundle.notes.push_back(path.filename().string() + ": " + w);
    }
    for (const std::string &n : scored.notes) {
      bundle.notes.push_back(dump.header.model_id + ": " + n);
    }
    for (StereotypeProfile &p : scored.profiles) {
      if (!seen.emplace(p.source(), p.language()).second) {
        throw Error(ErrorKind::kConsistency, "score: two dumps give " + p.source().ToString() +
                                                 " in " + p.language());
      }
      bundle.profiles.push_back(std::move(p));
    }
  };
  for (const fs::path &p : c.dumps) score(p, false);
  for (const fs::path &p : c.monolingual_dumps) score(p, true);
  std::stable_sort(bundle.profiles.begin(), bundle.profiles.end(),
                   [](const StereotypeProfile &a, const StereotypeProfile &b) {
                     return std::tie(a.source(), a.language()) < std::tie(b.source(), b.language());
                   });
  Write(c, outputs::kModelProfiles, SerializeProfiles(bundle));
  s.Add("dumps", std::to_string(c.dumps.size() + c.monolingual_dumps.size()));
  s.Add("records", std::to_string(records));
  s.Add("profiles", std::to_string(bundle.profiles.size()));
  s.Add("notes", std::to_string(bundle.notes.size()));
  s.Add("out", (c.output_dir / outputs::kModelProfiles).string());
  return s;
}

StepSummary RunFit(const RunConfig &c) {
  StepSummary s{"fit", {}};
  const Registry registry = LoadRegistry(c);
  const ProfileBundle human =
      ParseProfiles(ReadOutput(c, outputs::kHumanProfiles, "missing inputs", "ingest-survey"));
  const ProfileBundle models =
      ParseProfiles(ReadOutput(c, outputs::kModelProfiles, "missing inputs", "score"));
  const ProfileStore store = BuildStore(human, models, c.raw, c.standardize);

  auto base_spec = [&](const std::string &model, const std::string &target) {
    LeakageSpec spec;
    spec.model_id = model;
    spec.target_language = target;
    spec.grouping = c.grouping;
    spec.alpha = c.alpha;
    spec.bonferroni = c.bonferroni;
    spec.method = c.method;
    spec.require_standardized = !c.raw;
    return spec;
  };

  std::vector<LeakageResult> results;
  std::vector<LeakageResult> monolingual;
  for (const std::string &model : ModelIds(store)) {
    for (const Language &l : registry.languages()) {
      if (store.Find(Source::Model(model), l.code) == nullptr) continue;
      LeakageSpec spec = base_spec(model, l.code);
      results.push_back(FitLeakage(spec, AssembleDesign(store, spec, registry), registry));

      if (model != c.monolingual_for) continue;
      std::vector<std::string> mono_ids;
      for (const auto &[key, p] : store.all()) {
        if (key.first.kind == Source::Kind::kMonolingualModel && key.second == l.code) {
          mono_ids.push_back(key.first.model_id);
        }
      }
      if (mono_ids.size() != 1) {
        throw Error(ErrorKind::kConsistency,
                    "fit: expected one monolingual model profile in " + l.code + ", found " +
                        std::to_string(mono_ids.size()));
      }
      spec.include_monolingual = true;
      spec.monolingual_id = mono_ids.front();
      monolingual.push_back(FitLeakage(spec, AssembleDesign(store, spec, registry), registry));
    }
  }
  if (results.empty()) throw Error(ErrorKind::kConsistency, "fit: no model profiles to fit");
  if (!c.monolingual_for.empty() && monolingual.empty()) {
    throw Error(ErrorKind::kConsistency, "fit: no profiles for monolingual_for model '" +
                                             c.monolingual_for + "'");
  }
  Write(c, outputs::kLeakage, SerializeLeakage(results));
  std::error_code ec;
  fs::remove(c.output_dir / outputs::kLeakageMonolingual, ec);
  if (!monolingual.empty()) Write(c, outputs::kLeakageMonolingual, SerializeLeakage(monolingual));

  int significant = 0, boundary = 0;
  for (const LeakageResult &r : results) {
    for (const PredictorEffect &e : r.per_predictor) significant += e.significant;
    boundary += r.fit.boundary != mixedfx::Boundary::kNone;
  }
  s.Add("fits", std::to_string(results.size()));
  s.Add("monolingual_fits", std::to_string(monolingual.size()));
  s.Add("significant", std::to_string(significant));
  s.Add("boundary_fits", std::to_string(boundary));
  s.Add("method", mixedfx::MethodName(c.method));
  s.Add("out", (c.output_dir / outputs::kLeakage).string());
  return s;
}

StepSummary RunLeaks(const RunConfig &c) {
  StepSummary s{"leaks", {}};
  const Registry registry = LoadRegistry(c);
  const ProfileBundle human =
      ParseProfiles(ReadOutput(c, outputs::kHumanProfiles, "missing inputs", "ingest-survey"));
  const ProfileBundle models =
      ParseProfiles(ReadOutput(c, outputs::kModelProfiles, "missing inputs", "score"));
  const ProfileStore store = BuildStore(human, models, false, c.standardize);

  ExtractionOptions options;
  options.k = c.k;
  options.theta = c.theta;
  std::vector<LeakedTrait> traits;
  for (const std::string &model : ModelIds(store)) {
    for (const Language &target : registry.languages()) {
      const StereotypeProfile *m = store.Find(Source::Model(model), target.code);
      if (m == nullptr) continue;
      const StereotypeProfile empty(target.code, Source::Human(), ScaleKind::kStandardized);
      const StereotypeProfile *ht = store.Find(Source::Human(), target.code);
      for (const Language &source : registry.languages()) {
        if (source.code == target.code) continue;
        const StereotypeProfile *hs = store.Find(Source::Human(), source.code);
        if (hs == nullptr) continue;
        auto found = ExtractLeakedTraits(*m, ht ? *ht : empty, *hs, registry, options);
        traits.insert(traits.end(), found.begin(), found.end());
      }
    }
  }
  Write(c, outputs::kLeakedTraits, SerializeLeakedTraits(traits, options));

  HumanProfileSet raw;
  for (const StereotypeProfile &p : human.profiles) raw.profiles.emplace(p.language(), p);
  ojson doc;
  doc["category_correlation_schema"] = 1;
  doc["scale"] = "BipolarSlider";
  ojson cats = ojson::array();
  for (GroupCategory cat : {GroupCategory::kSharedShared, GroupCategory::kSharedNonShared,
                            GroupCategory::kNonSharedNonShared}) {
    ojson jc;
    jc["category"] = CategoryName(cat);
    try {
      const CategoryCorrelation cc = ComputeCategoryCorrelation(raw, cat, registry);
      jc["mean_r"] = cc.mean_r;
      jc["n_correlations"] = cc.n_correlations;
      jc["skipped"] = cc.skipped;
      s.Add(std::string("r_") + CategoryName(cat), FormatFixed(cc.mean_r, 4));
    } catch (const Error &e) {
      if (e.kind() != ErrorKind::kNumeric) throw;
      jc["mean_r"] = nullptr;
      jc["error"] = e.what();
    }
    cats.push_back(std::move(jc));
  }
  doc["categories"] = std::move(cats);
  Write(c, outputs::kCategoryCorrelation, doc.dump(1) + "\n");
  s.Add("traits", std::to_string(traits.size()));
  s.Add("out", (c.output_dir / outputs::kLeakedTraits).string());
  return s;
}

StepSummary RunReport(const RunConfig &c) {
  StepSummary s{"report", {}};
  const Registry registry = LoadRegistry(c);
  const std::vector<LeakageResult> results =
      ParseLeakage(ReadOutput(c, outputs::kLeakage, "missing results", "fit"));
  if (results.empty()) throw Error(ErrorKind::kLoad, "missing results: leakage file is empty");
  const fs::path dir = outputs::kReportDir;

  FlowOptions flow_options;
  flow_options.cross_only = c.cross_only;
  std::set<std::string> models;
  for (const LeakageResult &r : results) models.insert(r.spec.model_id);
  std::size_t edges = 0, files = 0;
  for (const std::string &model : models) {
    std::vector<LeakageResult> mine;
    for (const LeakageResult &r : results)
      if (r.spec.model_id == model) mine.push_back(r);
    const FlowGraph g = BuildFlow(mine, registry, flow_options);
    edges += g.edges.size();
    Write(c, dir / ("flow_" + model + ".dot"), FlowToDot(g, flow_options));
    Write(c, dir / ("flow_" + model + ".json"), FlowToJson(g));
    files += 2;
  }
  Write(c, dir / "tables.txt", TablesToText(BuildTables(results, registry)));
  Write(c, dir / "tables.csv", TablesToCsv(results));
  files += 2;

  if (fs::exists(c.output_dir / outputs::kLeakageMonolingual)) {
    const std::vector<LeakageResult> mono =
        ParseLeakage(ReadTextFile(c.output_dir / outputs::kLeakageMonolingual));
    Write(c, dir / "tables_monolingual.txt", TablesToText(BuildTables(mono, registry)));
    Write(c, dir / "tables_monolingual.csv", TablesToCsv(mono));
    std::string text = "# monolingual coefficients (columns: target)\nmodel";
    const auto row = MonolingualReport(mono, registry);
    for (const auto &[lang, coef] : row) text += " " + lang;
    text += "\n" + mono.front().spec.model_id;
    for (const auto &[lang, coef] : row) text += " " + FormatFixed(coef, 2);
    text += "\n";
    Write(c, dir / "monolingual.txt", text);
    files += 3;
  }

  if (fs::exists(c.output_dir / outputs::kHumanProfiles)) {
    const ProfileBundle human = ParseProfiles(ReadTextFile(c.output_dir / outputs::kHumanProfiles));
    for (const SocialGroup &g : registry.groups()) {
      std::vector<const StereotypeProfile *> complete;
      for (const Language &l : registry.languages()) {
        for (const StereotypeProfile &p : human.profiles) {
          if (p.language() != l.code) continue;
          bool full = true;
          for (const TraitPair &tp : registry.trait_pairs()) full &= p.Value(g.id, tp.id).has_value();
          if (full) complete.push_back(&p);
        }
      }
      if (complete.empty()) continue;
      Write(c, dir / "radar" / (g.id + ".json"), RadarToJson(BuildRadar(complete, g.id, registry)));
      ++files;
    }
  }
  s.Add("models", std::to_string(models.size()));
  s.Add("edges", std::to_string(edges));
  s.Add("files", std::to_string(files));
  s.Add("out", (c.output_dir / dir).string());
  return s;
}

StepSummary RunSimulate(const RunConfig &c) {
  StepSummary s{"simulate", {}};
  mixedfx::LmmOptions options;
  options.method = c.method;
  mixedfx::SimulationSpec planted;
  planted.beta.resize(5);
  planted.beta << 0.0, 0.5, 0.0, 0.3, 0.0;
  mixedfx::SimulationSpec null_spec = planted;
  null_spec.beta.setZero();
  const auto recovery = mixedfx::RunMonteCarlo(planted, c.seed, c.reps, options, c.alpha);
  const auto null_run = mixedfx::RunMonteCarlo(null_spec, c.seed + 1, c.reps, options, c.alpha);

  auto vec = [](const mixedfx::Vector<double> &v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  auto report = [&](const mixedfx::MonteCarloReport &r, std::uint64_t seed) {
    ojson j;
    j["seed"] = seed;
    j["reps"] = r.reps;
    j["planted"] = vec(r.planted);
    j["mean_beta"] = vec(r.mean_beta);
    j["coverage"] = vec(r.coverage);
    j["reject_rate"] = vec(r.reject_rate);
    j["flag_rate"] = vec(r.flag_rate);
    j["lower_boundary_fits"] = r.lower_boundary_fits;
    j["nonconverged"] = r.nonconverged;
    return j;
  };
  ojson doc;
  doc["simulation_schema"] = 1;
  doc["method"] = mixedfx::MethodName(c.method);
  doc["alpha"] = c.alpha;
  doc["design"] = {{"n_groups", planted.n_groups},
                   {"rows_per_group", planted.rows_per_group},
                   {"sigma_u2", planted.sigma_u2},
                   {"sigma_e2", planted.sigma_e2}};
  doc["recovery"] = report(recovery, c.seed);
  doc["null"] = report(null_run, c.seed + 1);
  Write(c, outputs::kSimulation, doc.dump(1) + "\n");

  double max_bias = 0.0, min_cov = 1.0, max_reject = 0.0;
  for (Eigen::Index j = 0; j < planted.beta.size(); ++j) {
    max_bias = std::max(max_bias, std::abs(recovery.mean_beta(j) - planted.beta(j)));
    min_cov = std::min(min_cov, recovery.coverage(j));
  }
  for (Eigen::Index j = 1; j < null_spec.beta.size(); ++j) {
    max_reject = std::max(max_reject, null_run.reject_rate(j));
  }
  s.Add("seed", std::to_string(c.seed));
  s.Add("reps", std::to_string(c.reps));
  s.Add("max_abs_bias", FormatFixed(max_bias, 4));
  s.Add("min_coverage", FormatFixed(min_cov, 3));
  s.Add("null_max_reject", FormatFixed(max_reject, 3));
  s.Add("out", (c.output_dir / outputs::kSimulation).string());
  return s;
}

std::vector<StepSummary> RunAll(const RunConfig &c) {
  return {RunIngest(c), RunScore(c), RunFit(c), RunLeaks(c), RunReport(c)};
}

}  // namespace stereoleak
