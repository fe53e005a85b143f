// src/survey.cpp

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

#include "stereoleak/survey.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stereoleak/text.hpp"

namespace stereoleak {

namespace {

constexpr int kMinFamiliarGroups = 4;

struct Row {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

// Validates the schema line and the column header, then splits the body.
std::vector<Row> ReadTable(const std::string &text, const std::string &table,
                           const std::vector<std::string> &columns) {
  auto lines = SplitLines(text);
  std::size_t i = 0;
  while (i < lines.size() && Trim(lines[i]).empty()) ++i;
  if (i == lines.size() || Trim(lines[i]) != "survey_schema: 1") {
    throw ParseError(i + 1, table + ": first line must be 'survey_schema: 1'");
  }
  ++i;
  if (i == lines.size()) throw ParseError(i + 1, table + ": missing column header");
  std::vector<std::string> header;
  try {
    header = SplitCsvRecord(lines[i]);
  } catch (const std::invalid_argument &e) {
    throw ParseError(i + 1, table + ": " + e.what());
  }
  for (auto &h : header) h = std::string(Trim(h));
  if (header != columns) {
    std::string want;
    for (const auto &c : columns) want += (want.empty() ? "" : ",") + c;
    throw ParseError(i + 1, table + ": column header must be '" + want + "'");
  }
  std::vector<Row> rows;
  for (++i; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    Row row{i + 1, {}};
    try {
      row.fields = SplitCsvRecord(lines[i]);
    } catch (const std::invalid_argument &e) {
      throw ParseError(row.line, table + ": " + e.what());
    }
    if (row.fields.size() != columns.size()) {
      throw ParseError(row.line, table + ": expected " + std::to_string(columns.size()) +
                                     " fields, found " + std::to_string(row.fields.size()));
    }
    for (auto &f : row.fields) f = std::string(Trim(f));
    for (std::size_t c = 0; c < row.fields.size(); ++c) {
      if (row.fields[c].empty() && !(table == "demographics" && c == 2)) {
        throw ParseError(row.line, table + ": empty field '" + columns[c] + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string Where(const std::string &table, std::size_t line) {
  return table + " line " + std::to_string(line) + ": ";
}

SurveyResponse &Respondent(std::map<std::string, SurveyResponse> &all, const std::string &id,
                           const std::string &language, const std::string &table,
                           std::size_t line) {
  auto [it, inserted] = all.try_emplace(id);
  if (inserted) {
    it->second.respondent_id = id;
    it->second.language = language;
  } else if (!language.empty() && it->second.language.empty()) {
    it->second.language = language;
  } else if (!language.empty() && it->second.language != language) {
    throw Error(ErrorKind::kConsistency, Where(table, line) + "respondent '" + id +
                                             "' answers in " + language + " but earlier in " +
                                             it->second.language);
  }
  return it->second;
}

bool ParseBool(const std::string &s, bool &out) {
  std::string l = Utf8Lower(s);
  if (l == "1" || l == "true" || l == "pass" || l == "passed") {
    out = true;
    return true;
  }
  if (l == "0" || l == "false" || l == "fail" || l == "failed") {
    out = false;
    return true;
  }
  return false;
}

}  // namespace

std::size_t SurveyResponse::rating_count() const {
  std::size_t n = 0;
  for (const auto &[group, pairs] : ratings) n += pairs.size();
  return n;
}

SurveyFiles ReadSurveyFiles(const std::filesystem::path &ratings,
                            const std::filesystem::path &familiarity,
                            const std::optional<std::filesystem::path> &checks,
                            const std::optional<std::filesystem::path> &demographics) {
  SurveyFiles files;
  files.ratings = ReadTextFile(ratings);
  files.familiarity = ReadTextFile(familiarity);
  if (checks) files.checks = ReadTextFile(*checks);
  if (demographics) files.demographics = ReadTextFile(*demographics);
  return files;
}

std::vector<SurveyResponse> ParseSurvey(const SurveyFiles &files, const Registry &registry) {
  std::map<std::string, SurveyResponse> all;

  for (const Row &row : ReadTable(files.familiarity, "familiarity",
                                  {"respondent_id", "language", "group_id"})) {
    const auto &f = row.fields;
    if (registry.FindLanguage(f[1]) == nullptr) {
      throw Error(ErrorKind::kValidation,
                  Where("familiarity", row.line) + "unknown language '" + f[1] + "'");
    }
    if (registry.FindGroup(f[2]) == nullptr) {
      throw Error(ErrorKind::kValidation,
                  Where("familiarity", row.line) + "unknown group '" + f[2] + "'");
    }
    Respondent(all, f[0], f[1], "familiarity", row.line).familiar_groups.insert(f[2]);
  }

  for (const Row &row : ReadTable(files.ratings, "ratings",
                                  {"respondent_id", "language", "group_id", "pair_id", "rating"})) {
    const auto &f = row.fields;
    try {
      registry.ValidateReference(f[1], f[2], f[3]);
    } catch (const Error &e) {
      throw Error(e.kind(), Where("ratings", row.line) + e.what());
    }
    double value = 0.0;
    try {
      value = ParseDouble(f[4]);
    } catch (const std::invalid_argument &) {
      throw ParseError(row.line, "ratings: rating '" + f[4] + "' is not a number");
    }
    if (!std::isfinite(value) || value < -50.0 || value > 50.0) {
      throw Error(ErrorKind::kRange,
                  Where("ratings", row.line) + "rating " + f[4] + " outside [-50, 50]");
    }
    SurveyResponse &r = Respondent(all, f[0], f[1], "ratings", row.line);
    if (!r.familiar_groups.count(f[2])) {
      throw Error(ErrorKind::kConsistency, Where("ratings", row.line) + "respondent '" + f[0] +
                                               "' rated unfamiliar group '" + f[2] + "'");
    }
    if (!r.ratings[f[2]].emplace(f[3], value).second) {
      throw ParseError(row.line, "ratings: duplicate rating for " + f[0] + "/" + f[2] + "/" + f[3]);
    }
  }

  if (files.checks) {
    for (const Row &row :
         ReadTable(*files.checks, "checks", {"respondent_id", "check_id", "passed"})) {
      bool passed = false;
      if (!ParseBool(row.fields[2], passed)) {
        throw ParseError(row.line, "checks: '" + row.fields[2] + "' is not a pass/fail value");
      }
      SurveyResponse &r = Respondent(all, row.fields[0], "", "checks", row.line);
      for (const auto &[id, ok] : r.attention_checks) {
        if (id == row.fields[1]) {
          throw ParseError(row.line, "checks: duplicate check '" + id + "' for " + row.fields[0]);
        }
      }
      r.attention_checks.emplace_back(row.fields[1], passed);
    }
  }

  if (files.demographics) {
    for (const Row &row :
         ReadTable(*files.demographics, "demographics", {"respondent_id", "key", "value"})) {
      SurveyResponse &r = Respondent(all, row.fields[0], "", "demographics", row.line);
      if (!r.demographics) r.demographics.emplace();
      // An empty value records a declined question.
      (*r.demographics)[row.fields[1]] = row.fields[2];
    }
  }

  std::vector<SurveyResponse> out;
  out.reserve(all.size());
  const std::size_t n_pairs = registry.trait_pairs().size();
  for (auto &[id, r] : all) {
    if (r.language.empty()) {
      throw Error(ErrorKind::kConsistency,
                  "respondent '" + id + "' appears only in side tables (no language)");
    }
    if (static_cast<int>(r.familiar_groups.size()) < kMinFamiliarGroups) {
      throw Error(ErrorKind::kConsistency,
                  "respondent '" + id + "' marked " + std::to_string(r.familiar_groups.size()) +
                      " familiar groups; at least " + std::to_string(kMinFamiliarGroups) +
                      " are required");
    }
    for (const auto &[group, pairs] : r.ratings) {
      if (pairs.size() != n_pairs) {
        throw Error(ErrorKind::kConsistency,
                    "respondent '" + id + "' rated " + std::to_string(pairs.size()) + " of " +
                        std::to_string(n_pairs) + " trait pairs for group '" + group + "'");
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

GateResult QualityGate(const std::vector<SurveyResponse> &responses, int required_checks) {
  if (required_checks < 0) throw Error(ErrorKind::kUsage, "required_checks must be >= 0");
  GateResult result;
  for (const SurveyResponse &r : responses) {
    LanguagePassCount &lang = result.report.per_language[r.language];
    ++lang.total;
    ++result.report.total;
    bool ok = static_cast<int>(r.attention_checks.size()) >= required_checks;
    if (!ok) result.report.missing_checks.push_back(r.respondent_id);
    for (const auto &[id, passed] : r.attention_checks) ok = ok && passed;
    if (ok) {
      ++lang.passed;
      ++result.report.passed;
      result.passed.push_back(r);
    } else {
      result.failed.push_back(r);
    }
  }
  return result;
}

const StereotypeProfile *HumanProfileSet::Find(const std::string &language) const {
  auto it = profiles.find(language);
  return it == profiles.end() ? nullptr : &it->second;
}

HumanProfileSet AggregateHumanScores(const std::vector<SurveyResponse> &passed,
                                     const Registry &registry, const AggregateOptions &options) {
  if (options.min_annotators < 1) throw Error(ErrorKind::kUsage, "min_annotators must be >= 1");

  // Fold in respondent-id order so the result does not depend on input order.
  std::vector<const SurveyResponse *> ordered;
  for (const SurveyResponse &r : passed) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(), [](auto *a, auto *b) {
    return a->respondent_id < b->respondent_id;
  });
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    if (ordered[i]->respondent_id == ordered[i - 1]->respondent_id) {
      throw Error(ErrorKind::kConsistency,
                  "duplicate respondent '" + ordered[i]->respondent_id + "'");
    }
  }

  // (language, group, pair) -> ratings
  std::map<std::string, std::map<CellKey, std::vector<double>>> cells;
  std::map<std::pair<std::string, std::string>, int> annotators;
  for (const SurveyResponse *r : ordered) {
    for (const auto &[group, pairs] : r->ratings) {
      ++annotators[{r->language, group}];
      for (const auto &[pair, value] : pairs) cells[r->language][CellKey{group, pair}].push_back(value);
    }
  }

  HumanProfileSet set;
  for (const Language &lang : registry.languages()) {
    StereotypeProfile profile(lang.code, Source::Human(), ScaleKind::kBipolarSlider);
    for (const SocialGroup &g : registry.groups()) {
      auto it = annotators.find({lang.code, g.id});
      int n = it == annotators.end() ? 0 : it->second;
      set.coverage[{lang.code, g.id}] = n;
      bool needs_minimum = g.shared() || g.origin_language == lang.code;
      if (needs_minimum && n < options.min_annotators) {
        set.flags.push_back({lang.code, g.id, n});
      }
      if (n == 0) continue;
      for (const TraitPair &p : registry.trait_pairs()) {
        std::vector<double> &values = cells[lang.code][CellKey{g.id, p.id}];
        double stat = 0.0;
        if (options.statistic == Aggregator::kMean) {
          stat = std::accumulate(values.begin(), values.end(), 0.0) / double(values.size());
        } else {
          std::sort(values.begin(), values.end());
          std::size_t m = values.size() / 2;
          stat = values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
        }
        AssociationScore s;
        s.group = g.id;
        s.pair = p.id;
        s.language = lang.code;
        s.source = Source::Human();
        s.value = stat;
        s.scale = ScaleKind::kBipolarSlider;
        s.n_observations = n;
        profile.Set(s);
      }
    }
    if (!profile.empty()) set.profiles.emplace(lang.code, std::move(profile));
  }
  return set;
}

double DemographicSummary::Share(const std::string &language, const std::string &key,
                                 const std::string &answer) const {
  auto n = respondents.find(language);
  if (n == respondents.end() || n->second == 0) return 0.0;
  auto lang = counts.find(language);
  if (lang == counts.end()) return 0.0;
  auto k = lang->second.find(key);
  if (k == lang->second.end()) return 0.0;
  auto a = k->second.find(answer);
  return a == k->second.end() ? 0.0 : double(a->second) / double(n->second);
}

std::map<std::string, double> DemographicSummary::AveragedShares(const std::string &key) const {
  std::set<std::string> answers;
  for (const auto &[lang, keys] : counts) {
    auto k = keys.find(key);
    if (k == keys.end()) continue;
    for (const auto &[answer, n] : k->second) answers.insert(answer);
  }
  std::map<std::string, double> out;
  if (respondents.empty()) return out;
  for (const auto &answer : answers) {
    double total = 0.0;
    for (const auto &[lang, n] : respondents) total += Share(lang, key, answer);
    out[answer] = total / double(respondents.size());
  }
  return out;
}

DemographicSummary SummarizeDemographics(const std::vector<SurveyResponse> &responses) {
  DemographicSummary summary;
  std::set<std::string> keys;
  for (const SurveyResponse &r : responses) {
    if (!r.demographics) continue;
    for (const auto &[k, v] : *r.demographics) keys.insert(k);
  }
  for (const SurveyResponse &r : responses) {
    ++summary.respondents[r.language];
    for (const std::string &k : keys) {
      std::string answer = kNoAnswer;
      if (r.demographics) {
        auto it = r.demographics->find(k);
        if (it != r.demographics->end() && !it->second.empty()) answer = it->second;
      }
      ++summary.counts[r.language][k][answer];
    }
  }
  return summary;
}

}  // namespace stereoleak
