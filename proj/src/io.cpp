// src/io.cpp

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

#include "stereoleak/io.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"

namespace stereoleak {

using ojson = nlohmann::ordered_json;

namespace {

ojson ParseDocument(std::string_view text, const char *schema_key, int schema) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const ojson::parse_error &e) {
    throw Error(ErrorKind::kParse, std::string(schema_key) + " file: " + e.what());
  }
  if (!doc.is_object() || !doc.contains(schema_key)) {
    throw Error(ErrorKind::kParse, std::string("missing '") + schema_key + "' field");
  }
  if (doc[schema_key] != schema) {
    throw Error(ErrorKind::kValidation, std::string("unsupported ") + schema_key + " " +
                                            doc[schema_key].dump());
  }
  return doc;
}

// Wraps nlohmann type/key errors so callers see one error family.
template <typename F>
auto Guarded(const char *what, F &&f) {
  try {
    return f();
  } catch (const ojson::exception &e) {
    throw Error(ErrorKind::kParse, std::string(what) + ": " + e.what());
  }
}

ojson NullableDouble(double v) {
  return std::isfinite(v) ? ojson(v) : ojson(nullptr);
}

double FromNullable(const ojson &j, double fallback) {
  return j.is_null() ? fallback : j.get<double>();
}

}  // namespace

ProfileBundle BundleOf(const HumanProfileSet &human) {
  ProfileBundle b;
  for (const auto &[lang, profile] : human.profiles) b.profiles.push_back(profile);
  b.coverage = human.coverage;
  b.flags = human.flags;
  return b;
}

std::string SerializeProfiles(const ProfileBundle &bundle) {
  ojson doc;
  doc["profiles_schema"] = kProfilesSchema;
  ojson profiles = ojson::array();
  for (const StereotypeProfile &p : bundle.profiles) {
    ojson jp;
    jp["source"] = p.source().ToString();
    jp["language"] = p.language();
    jp["scale"] = ScaleName(p.scale());
    ojson cells = ojson::array();
    for (const auto &[key, s] : p.cells()) {
      cells.push_back({{"group", s.group}, {"pair", s.pair}, {"value", s.value},
                       {"n", s.n_observations}});
    }
    jp["cells"] = std::move(cells);
    profiles.push_back(std::move(jp));
  }
  doc["profiles"] = std::move(profiles);
  ojson coverage = ojson::array();
  for (const auto &[key, n] : bundle.coverage) {
    coverage.push_back({{"language", key.first}, {"group", key.second}, {"annotators", n}});
  }
  doc["coverage"] = std::move(coverage);
  ojson flags = ojson::array();
  for (const CoverageFlag &f : bundle.flags) {
    flags.push_back({{"language", f.language}, {"group", f.group}, {"annotators", f.annotators}});
  }
  doc["flags"] = std::move(flags);
  doc["notes"] = bundle.notes;
  return doc.dump(1) + "\n";
}

ProfileBundle ParseProfiles(std::string_view text) {
  const ojson doc = ParseDocument(text, "profiles_schema", kProfilesSchema);
  return Guarded("profiles file", [&] {
    ProfileBundle b;
    for (const ojson &jp : doc.at("profiles")) {
      StereotypeProfile p(jp.at("language").get<std::string>(),
                          Source::Parse(jp.at("source").get<std::string>()),
                          ParseScale(jp.at("scale").get<std::string>()));
      for (const ojson &c : jp.at("cells")) {
        AssociationScore s;
        s.group = c.at("group").get<std::string>();
        s.pair = c.at("pair").get<std::string>();
        s.language = p.language();
        s.source = p.source();
        s.scale = p.scale();
        s.value = c.at("value").get<double>();
        s.n_observations = c.at("n").get<int>();
        p.Set(s);
      }
      b.profiles.push_back(std::move(p));
    }
    if (doc.contains("coverage")) {
      for (const ojson &c : doc["coverage"]) {
        b.coverage[{c.at("language").get<std::string>(), c.at("group").get<std::string>()}] =
            c.at("annotators").get<int>();
      }
    }
    if (doc.contains("flags")) {
      for (const ojson &f : doc["flags"]) {
        b.flags.push_back({f.at("language").get<std::string>(), f.at("group").get<std::string>(),
                           f.at("annotators").get<int>()});
      }
    }
    if (doc.contains("notes")) b.notes = doc["notes"].get<std::vector<std::string>>();
    return b;
  });
}

std::string SerializeLeakage(const std::vector<LeakageResult> &results) {
  ojson doc;
  doc["leakage_schema"] = kLeakageSchema;
  ojson arr = ojson::array();
  for (const LeakageResult &r : results) {
    ojson j;
    j["model_id"] = r.spec.model_id;
    j["target_language"] = r.spec.target_language;
    j["grouping"] = GroupingName(r.spec.grouping);
    j["method"] = mixedfx::MethodName(r.fit.method);
    j["alpha"] = r.spec.alpha;
    j["bonferroni"] = r.spec.bonferroni;
    j["effective_alpha"] = r.effective_alpha;
    j["standardized_inputs"] = r.spec.require_standardized;
    j["include_monolingual"] = r.spec.include_monolingual;
    j["monolingual_id"] = r.spec.monolingual_id;
    j["intercept"] = {{"coefficient", r.fit.beta(0)},
                      {"se", r.fit.se(0)},
                      {"p_value", r.fit.p_values(0)}};
    ojson preds = ojson::array();
    for (const PredictorEffect &e : r.per_predictor) {
      preds.push_back({{"label", e.predictor.Label()},
                       {"source", e.predictor.source.ToString()},
                       {"language", e.predictor.language},
                       {"coefficient", e.coefficient},
                       {"se", e.se},
                       {"p_value", e.p_value},
                       {"significant", e.significant}});
    }
    j["predictors"] = std::move(preds);
    j["n_rows"] = r.n_rows;
    j["n_dropped"] = r.n_dropped;
    ojson reasons = ojson::object();
    for (const auto &[reason, count] : r.dropped_reasons) reasons[reason] = count;
    j["dropped_reasons"] = std::move(reasons);
    j["fit"] = {{"sigma_u2", r.fit.sigma_u2},
                {"sigma_e2", r.fit.sigma_e2},
                {"log_likelihood", r.fit.log_likelihood},
                {"lambda", r.fit.lambda},
                {"log_lambda", NullableDouble(r.fit.log_lambda)},
                {"boundary", mixedfx::BoundaryName(r.fit.boundary)},
                {"converged", r.fit.converged},
                {"iterations", r.fit.iterations},
                {"n_groups", r.fit.n_groups}};
    arr.push_back(std::move(j));
  }
  doc["results"] = std::move(arr);
  return doc.dump(1) + "\n";
}

std::vector<LeakageResult> ParseLeakage(std::string_view text) {
  const ojson doc = ParseDocument(text, "leakage_schema", kLeakageSchema);
  return Guarded("leakage file", [&] {
    std::vector<LeakageResult> out;
    for (const ojson &j : doc.at("results")) {
      LeakageResult r;
      r.spec.model_id = j.at("model_id").get<std::string>();
      r.spec.target_language = j.at("target_language").get<std::string>();
      r.spec.grouping = ParseGrouping(j.at("grouping").get<std::string>());
      r.spec.method = mixedfx::ParseMethod(j.at("method").get<std::string>());
      r.spec.alpha = j.at("alpha").get<double>();
      r.spec.bonferroni = j.at("bonferroni").get<bool>();
      r.spec.require_standardized = j.at("standardized_inputs").get<bool>();
      r.spec.include_monolingual = j.at("include_monolingual").get<bool>();
      r.spec.monolingual_id = j.at("monolingual_id").get<std::string>();
      r.effective_alpha = j.at("effective_alpha").get<double>();

      const ojson &preds = j.at("predictors");
      const Eigen::Index p = static_cast<Eigen::Index>(preds.size()) + 1;
      auto &fit = r.fit;
      fit.method = r.spec.method;
      fit.beta.resize(p);
      fit.se.resize(p);
      fit.p_values.resize(p);
      fit.p = p;
      fit.column_names.push_back("(intercept)");
      const ojson &icpt = j.at("intercept");
      fit.beta(0) = icpt.at("coefficient").get<double>();
      fit.se(0) = icpt.at("se").get<double>();
      fit.p_values(0) = icpt.at("p_value").get<double>();
      r.intercept = fit.beta(0);
      Eigen::Index k = 1;
      for (const ojson &e : preds) {
        PredictorEffect pe;
        pe.predictor.source = Source::Parse(e.at("source").get<std::string>());
        pe.predictor.language = e.at("language").get<std::string>();
        pe.coefficient = e.at("coefficient").get<double>();
        pe.se = e.at("se").get<double>();
        pe.p_value = e.at("p_value").get<double>();
        pe.significant = e.at("significant").get<bool>();
        fit.beta(k) = pe.coefficient;
        fit.se(k) = pe.se;
        fit.p_values(k) = pe.p_value;
        fit.column_names.push_back(pe.predictor.Label());
        ++k;
        r.spec.predictors.push_back(pe.predictor);
        r.per_predictor.push_back(std::move(pe));
      }
      // The stored predictor list already includes the monolingual column.
      if (r.spec.include_monolingual && !r.spec.predictors.empty()) r.spec.predictors.pop_back();
      r.n_rows = j.at("n_rows").get<int>();
      r.n_dropped = j.at("n_dropped").get<int>();
      for (const auto &[reason, count] : j.at("dropped_reasons").items()) {
        r.dropped_reasons[reason] = count.get<int>();
      }
      const ojson &jf = j.at("fit");
      fit.sigma_u2 = jf.at("sigma_u2").get<double>();
      fit.sigma_e2 = jf.at("sigma_e2").get<double>();
      fit.log_likelihood = jf.at("log_likelihood").get<double>();
      fit.lambda = jf.at("lambda").get<double>();
      fit.log_lambda =
          FromNullable(jf.at("log_lambda"), -std::numeric_limits<double>::infinity());
      const std::string boundary = jf.at("boundary").get<std::string>();
      fit.boundary = boundary == "lower"   ? mixedfx::Boundary::kLower
                     : boundary == "upper" ? mixedfx::Boundary::kUpper
                                           : mixedfx::Boundary::kNone;
      fit.converged = jf.at("converged").get<bool>();
      fit.iterations = jf.at("iterations").get<int>();
      fit.n_groups = jf.at("n_groups").get<int>();
      fit.n = r.n_rows;
      out.push_back(std::move(r));
    }
    return out;
  });
}

std::string SerializeLeakedTraits(const std::vector<LeakedTrait> &traits,
                                  const ExtractionOptions &options) {
  ojson doc;
  doc["leaked_traits_schema"] = kLeakedTraitsSchema;
  doc["k"] = options.k;
  doc["theta"] = options.theta;
  ojson arr = ojson::array();
  for (const LeakedTrait &t : traits) {
    arr.push_back({{"model_id", t.model_id},
                   {"source_language", t.source_language},
                   {"target_language", t.target_language},
                   {"group", t.group},
                   {"pair", t.pair},
                   {"pole", PoleName(t.pole)},
                   {"pole_name", t.pole_name},
                   {"model_rank", t.model_rank},
                   {"model_value", t.model_value},
                   {"human_target_value", t.human_target_value ? ojson(*t.human_target_value)
                                                               : ojson(nullptr)},
                   {"human_source_value", t.human_source_value}});
  }
  doc["traits"] = std::move(arr);
  return doc.dump(1) + "\n";
}

std::vector<LeakedTrait> ParseLeakedTraits(std::string_view text) {
  const ojson doc = ParseDocument(text, "leaked_traits_schema", kLeakedTraitsSchema);
  return Guarded("leaked traits file", [&] {
    std::vector<LeakedTrait> out;
    for (const ojson &j : doc.at("traits")) {
      LeakedTrait t;
      t.model_id = j.at("model_id").get<std::string>();
      t.source_language = j.at("source_language").get<std::string>();
      t.target_language = j.at("target_language").get<std::string>();
      t.group = j.at("group").get<std::string>();
      t.pair = j.at("pair").get<std::string>();
      t.pole = ParsePole(j.at("pole").get<std::string>());
      t.pole_name = j.at("pole_name").get<std::string>();
      t.model_rank = j.at("model_rank").get<int>();
      t.model_value = j.at("model_value").get<double>();
      if (!j.at("human_target_value").is_null()) {
        t.human_target_value = j["human_target_value"].get<double>();
      }
      t.human_source_value = j.at("human_source_value").get<double>();
      out.push_back(std::move(t));
    }
    return out;
  });
}

}  // namespace stereoleak
