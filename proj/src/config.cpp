// src/config.cpp

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

#include "stereoleak/config.hpp"

#include <charconv>

#include "stereoleak/text.hpp"

namespace stereoleak {

namespace fs = std::filesystem;

fs::path RunConfig::RegistryPath() const {
  return registry.empty() ? BundledRegistryPath() : registry;
}

const std::vector<std::string> &ConfigKeys() {
  static const std::vector<std::string> keys = {
      "registry",        "survey_ratings", "survey_familiarity", "survey_checks",
      "survey_demographics", "dump",       "monolingual_dump",   "output_dir",
      "scoring",         "normalize_by_baseline", "required_checks", "min_annotators",
      "alpha",           "bonferroni",     "grouping",           "method",
      "standardize",     "raw",            "monolingual_for",    "k",
      "theta",           "cross_only",     "seed",               "reps",
  };
  return keys;
}

namespace {

[[noreturn]] void Bad(std::string_view key, std::string_view value, const char *expected) {
  throw Error(ErrorKind::kUsage, "config: " + std::string(key) + " = '" + std::string(value) +
                                     "' (expected " + expected + ")");
}

bool ToBool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  Bad(key, v, "true or false");
}

template <typename Int>
Int ToInt(std::string_view key, std::string_view v) {
  Int out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) Bad(key, v, "an integer");
  return out;
}

double ToDouble(std::string_view key, std::string_view v) {
  try {
    return ParseDouble(v);
  } catch (const std::invalid_argument &) {
    Bad(key, v, "a number");
  }
}

fs::path Resolve(std::string_view v, const fs::path &base) {
  fs::path p{std::string(v)};
  return p.is_relative() && !base.empty() ? base / p : p;
}

}  // namespace

void ApplySetting(RunConfig &c, std::string_view key, std::string_view raw_value,
                  const fs::path &base) {
  const std::string_view v = Trim(raw_value);
  if (key == "registry") c.registry = Resolve(v, base);
  else if (key == "survey_ratings") c.survey_ratings = Resolve(v, base);
  else if (key == "survey_familiarity") c.survey_familiarity = Resolve(v, base);
  else if (key == "survey_checks") c.survey_checks = Resolve(v, base);
  else if (key == "survey_demographics") c.survey_demographics = Resolve(v, base);
  else if (key == "dump") c.dumps.push_back(Resolve(v, base));
  else if (key == "monolingual_dump") c.monolingual_dumps.push_back(Resolve(v, base));
  else if (key == "output_dir") c.output_dir = Resolve(v, base);
  else if (key == "scoring") c.scoring = ParseScoringMethod(v);
  else if (key == "normalize_by_baseline") c.normalize_by_baseline = ToBool(key, v);
  else if (key == "required_checks") c.required_checks = ToInt<int>(key, v);
  else if (key == "min_annotators") c.min_annotators = ToInt<int>(key, v);
  else if (key == "alpha") {
    c.alpha = ToDouble(key, v);
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) Bad(key, v, "a value in (0, 1)");
  } else if (key == "bonferroni") c.bonferroni = ToBool(key, v);
  else if (key == "grouping") c.grouping = ParseGrouping(v);
  else if (key == "method") c.method = mixedfx::ParseMethod(std::string(v));
  else if (key == "standardize") {
    if (v == "whole" || v == "whole_profile") c.standardize = StandardizeMode::kWholeProfile;
    else if (v == "per_pair") c.standardize = StandardizeMode::kPerPair;
    else Bad(key, v, "whole or per_pair");
  } else if (key == "raw") c.raw = ToBool(key, v);
  else if (key == "monolingual_for") c.monolingual_for = std::string(v);
  else if (key == "k") {
    c.k = ToInt<int>(key, v);
    if (c.k < 1) Bad(key, v, "k >= 1");
  } else if (key == "theta") {
    c.theta = ToDouble(key, v);
    if (!(c.theta > 0.0)) Bad(key, v, "theta > 0");
  } else if (key == "cross_only") c.cross_only = ToBool(key, v);
  else if (key == "seed") c.seed = ToInt<std::uint64_t>(key, v);
  else if (key == "reps") {
    c.reps = ToInt<int>(key, v);
    if (c.reps < 1) Bad(key, v, "reps >= 1");
  } else {
    throw Error(ErrorKind::kUsage, "config: unknown key '" + std::string(key) + "'");
  }
}

RunConfig ParseConfig(std::string_view text, const fs::path &base) {
  RunConfig c;
  std::size_t line_no = 0;
  for (std::string_view line : SplitLines(text)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
    const std::string_view key = Trim(line.substr(0, eq));
    try {
      ApplySetting(c, key, line.substr(eq + 1), base);
    } catch (const Error &e) {
      throw Error(e.kind(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return c;
}

RunConfig LoadConfig(const fs::path &path) {
  return ParseConfig(ReadTextFile(path), path.parent_path());
}

void CheckPaths(const RunConfig &c) {
  auto check = [](const fs::path &p, const char *what) {
    if (!fs::exists(p)) {
      throw Error(ErrorKind::kLoad, std::string(what) + " not found: " + p.string());
    }
  };
  check(c.RegistryPath(), "registry");
  if (c.survey_ratings) check(*c.survey_ratings, "survey_ratings");
  if (c.survey_familiarity) check(*c.survey_familiarity, "survey_familiarity");
  if (c.survey_checks) check(*c.survey_checks, "survey_checks");
  if (c.survey_demographics) check(*c.survey_demographics, "survey_demographics");
  for (const fs::path &p : c.dumps) check(p, "dump");
  for (const fs::path &p : c.monolingual_dumps) check(p, "monolingual_dump");
}

}  // namespace stereoleak
