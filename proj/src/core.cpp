// src/core.cpp

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

#include "stereoleak/core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#ifndef STEREOLEAK_DATA_DIR
#define STEREOLEAK_DATA_DIR "data"
#endif

namespace stereoleak {

using nlohmann::json;

const char *DimensionName(Dimension d) {
  switch (d) {
    case Dimension::kAgency: return "Agency";
    case Dimension::kBeliefs: return "Beliefs";
    case Dimension::kCommunion: return "Communion";
  }
  return "?";
}

const char *CategoryName(GroupCategory c) {
  switch (c) {
    case GroupCategory::kSharedShared: return "SharedShared";
    case GroupCategory::kSharedNonShared: return "SharedNonShared";
    case GroupCategory::kNonSharedNonShared: return "NonSharedNonShared";
  }
  return "?";
}

const char *PoleName(Pole p) { return p == Pole::kLeft ? "Left" : "Right"; }

GroupCategory ParseCategory(std::string_view s) {
  if (s == "SharedShared") return GroupCategory::kSharedShared;
  if (s == "SharedNonShared") return GroupCategory::kSharedNonShared;
  if (s == "NonSharedNonShared") return GroupCategory::kNonSharedNonShared;
  throw Error(ErrorKind::kValidation, "unknown group category '" + std::string(s) + "'");
}

Pole ParsePole(std::string_view s) {
  if (s == "Left") return Pole::kLeft;
  if (s == "Right") return Pole::kRight;
  throw Error(ErrorKind::kValidation, "unknown pole '" + std::string(s) + "'");
}

static Dimension ParseDimension(std::string_view s) {
  if (s == "Agency") return Dimension::kAgency;
  if (s == "Beliefs") return Dimension::kBeliefs;
  if (s == "Communion") return Dimension::kCommunion;
  throw Error(ErrorKind::kLoad, "unknown trait dimension '" + std::string(s) + "'");
}

const char *ScaleName(ScaleKind s) {
  switch (s) {
    case ScaleKind::kBipolarSlider: return "BipolarSlider";
    case ScaleKind::kLogProb: return "LogProb";
    case ScaleKind::kSensitivity: return "Sensitivity";
    case ScaleKind::kCountFraction: return "CountFraction";
    case ScaleKind::kCountDifferential: return "CountDifferential";
    case ScaleKind::kStandardized: return "Standardized";
  }
  return "?";
}

ScaleKind ParseScale(std::string_view s) {
  for (ScaleKind k : {ScaleKind::kBipolarSlider, ScaleKind::kLogProb, ScaleKind::kSensitivity,
                      ScaleKind::kCountFraction, ScaleKind::kCountDifferential,
                      ScaleKind::kStandardized}) {
    if (s == ScaleName(k)) return k;
  }
  throw Error(ErrorKind::kValidation, "unknown score scale '" + std::string(s) + "'");
}

bool WithinScale(ScaleKind s, double value) {
  if (!std::isfinite(value)) return false;
  switch (s) {
    case ScaleKind::kBipolarSlider: return value >= -50.0 && value <= 50.0;
    case ScaleKind::kCountFraction: return value >= 0.0 && value <= 1.0;
    case ScaleKind::kCountDifferential: return value >= -1.0 && value <= 1.0;
    default: return true;
  }
}

std::string Source::ToString() const {
  switch (kind) {
    case Kind::kHuman: return "Human";
    case Kind::kModel: return "Model(" + model_id + ")";
    case Kind::kMonolingualModel: return "MonolingualModel(" + model_id + ")";
  }
  return "?";
}

Source Source::Parse(std::string_view text) {
  if (text == "Human") return Human();
  auto inner = [&](std::string_view prefix) -> std::optional<std::string> {
    if (text.size() > prefix.size() + 2 && text.substr(0, prefix.size()) == prefix &&
        text[prefix.size()] == '(' && text.back() == ')') {
      return std::string(text.substr(prefix.size() + 1, text.size() - prefix.size() - 2));
    }
    return std::nullopt;
  };
  if (auto id = inner("MonolingualModel")) return Monolingual(*id);
  if (auto id = inner("Model")) return Model(*id);
  throw Error(ErrorKind::kValidation, "unknown score source '" + std::string(text) + "'");
}

void StereotypeProfile::Set(const AssociationScore &score) {
  if (score.language != language_ || score.source != source_ || score.scale != scale_) {
    throw Error(ErrorKind::kConsistency,
                "score for " + score.group + "/" + score.pair + " (" + score.language + ", " +
                    score.source.ToString() + ", " + ScaleName(score.scale) +
                    ") does not belong to profile (" + language_ + ", " + source_.ToString() +
                    ", " + ScaleName(scale_) + ")");
  }
  if (!WithinScale(scale_, score.value)) {
    std::ostringstream os;
    os << "value " << score.value << " outside " << ScaleName(scale_) << " bounds for "
       << score.group << "/" << score.pair;
    throw Error(ErrorKind::kRange, os.str());
  }
  if (source_.kind == Source::Kind::kHuman && score.n_observations < 1) {
    throw Error(ErrorKind::kConsistency,
                "human score " + score.group + "/" + score.pair + " has no observations");
  }
  cells_[CellKey{score.group, score.pair}] = score;
}

const AssociationScore *StereotypeProfile::Find(const std::string &group,
                                                const std::string &pair) const {
  auto it = cells_.find(CellKey{group, pair});
  return it == cells_.end() ? nullptr : &it->second;
}

std::optional<double> StereotypeProfile::Value(const std::string &group,
                                               const std::string &pair) const {
  const AssociationScore *s = Find(group, pair);
  if (s == nullptr) return std::nullopt;
  return s->value;
}

bool StereotypeProfile::HasGroup(const std::string &group) const {
  auto it = cells_.lower_bound(CellKey{group, ""});
  return it != cells_.end() && it->first.group == group;
}

namespace {

std::string RecordLabel(const char *kind, std::size_t index, const json &rec) {
  std::string label = std::string(kind) + " #" + std::to_string(index);
  if (rec.is_object() && rec.contains("id") && rec["id"].is_string()) {
    label += " ('" + rec["id"].get<std::string>() + "')";
  }
  return label;
}

std::string RequireString(const json &rec, const char *field, const std::string &label) {
  if (!rec.is_object() || !rec.contains(field) || !rec[field].is_string() ||
      rec[field].get<std::string>().empty()) {
    throw Error(ErrorKind::kLoad, label + ": missing or empty field '" + field + "'");
  }
  return rec[field].get<std::string>();
}

}  // namespace

Registry Registry::Parse(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error &e) {
    throw Error(ErrorKind::kLoad, std::string("registry is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("registry_version") ||
      doc["registry_version"] != 1) {
    throw Error(ErrorKind::kLoad, "registry must declare registry_version: 1");
  }
  for (const char *key : {"languages", "trait_pairs", "groups"}) {
    if (!doc.contains(key) || !doc[key].is_array()) {
      throw Error(ErrorKind::kLoad, std::string("registry lacks array '") + key + "'");
    }
  }

  Registry reg;
  std::set<std::string> seen;
  std::size_t i = 0;
  for (const json &rec : doc["languages"]) {
    std::string label = RecordLabel("language", i++, rec);
    Language lang;
    lang.code = RequireString(rec, "code", label);
    lang.display_name = RequireString(rec, "display_name", label);
    lang.neutral_pronoun = rec.value("neutral_pronoun", std::string());
    if (!seen.insert(lang.code).second) {
      throw Error(ErrorKind::kLoad, label + ": duplicated language code '" + lang.code + "'");
    }
    reg.languages_.push_back(std::move(lang));
  }

  seen.clear();
  i = 0;
  for (const json &rec : doc["trait_pairs"]) {
    std::string label = RecordLabel("trait pair", i++, rec);
    TraitPair tp;
    tp.id = RequireString(rec, "id", label);
    tp.left_pole = RequireString(rec, "left_pole", label);
    tp.right_pole = RequireString(rec, "right_pole", label);
    tp.dimension = ParseDimension(RequireString(rec, "dimension", label));
    if (tp.left_pole == tp.right_pole) {
      throw Error(ErrorKind::kLoad, label + ": left and right pole are identical");
    }
    if (!seen.insert(tp.id).second) {
      throw Error(ErrorKind::kLoad, label + ": duplicated trait pair id '" + tp.id + "'");
    }
    if (!rec.contains("surface_forms") || !rec["surface_forms"].is_object()) {
      throw Error(ErrorKind::kLoad, label + ": missing surface_forms");
    }
    for (const auto &[code, poles] : rec["surface_forms"].items()) {
      if (!poles.is_array() || poles.size() != 2 || !poles[0].is_string() ||
          !poles[1].is_string()) {
        throw Error(ErrorKind::kLoad, label + ": surface form for " + code +
                                          " must be [left, right]");
      }
      tp.surface_forms[code] = PolePair{poles[0].get<std::string>(), poles[1].get<std::string>()};
    }
    for (const Language &lang : reg.languages_) {
      auto it = tp.surface_forms.find(lang.code);
      if (it == tp.surface_forms.end() || it->second.left.empty() || it->second.right.empty()) {
        throw Error(ErrorKind::kLoad, label + ": missing surface form for " + lang.code);
      }
    }
    reg.pairs_.push_back(std::move(tp));
  }

  seen.clear();
  i = 0;
  for (const json &rec : doc["groups"]) {
    std::string label = RecordLabel("group", i++, rec);
    SocialGroup g;
    g.id = RequireString(rec, "id", label);
    g.name = rec.value("name", g.id);
    g.category = ParseCategory(RequireString(rec, "category", label));
    if (rec.contains("origin_language")) {
      g.origin_language = RequireString(rec, "origin_language", label);
      if (reg.FindLanguage(*g.origin_language) == nullptr) {
        throw Error(ErrorKind::kLoad,
                    label + ": unknown origin_language '" + *g.origin_language + "'");
      }
    }
    if (g.category == GroupCategory::kNonSharedNonShared && !g.origin_language) {
      throw Error(ErrorKind::kLoad, label + ": non-shared group requires origin_language");
    }
    if (g.category != GroupCategory::kNonSharedNonShared && g.origin_language) {
      throw Error(ErrorKind::kLoad, label + ": only non-shared groups carry origin_language");
    }
    if (!seen.insert(g.id).second) {
      throw Error(ErrorKind::kLoad, label + ": duplicated group id '" + g.id + "'");
    }
    if (rec.contains("surface_forms")) {
      for (const auto &[code, text] : rec["surface_forms"].items()) {
        if (!text.is_string()) {
          throw Error(ErrorKind::kLoad, label + ": surface form for " + code + " is not text");
        }
        if (!text.get<std::string>().empty()) g.surface_forms[code] = text.get<std::string>();
      }
    }
    reg.groups_.push_back(std::move(g));
  }
  return reg;
}

Registry Registry::LoadFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kLoad, "cannot open registry file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

const Language *Registry::FindLanguage(std::string_view code) const {
  for (const Language &l : languages_)
    if (l.code == code) return &l;
  return nullptr;
}

const TraitPair *Registry::FindPair(std::string_view id) const {
  for (const TraitPair &p : pairs_)
    if (p.id == id) return &p;
  return nullptr;
}

const SocialGroup *Registry::FindGroup(std::string_view id) const {
  for (const SocialGroup &g : groups_)
    if (g.id == id) return &g;
  return nullptr;
}

std::size_t Registry::PairIndex(std::string_view id) const {
  for (std::size_t i = 0; i < pairs_.size(); ++i)
    if (pairs_[i].id == id) return i;
  throw Error(ErrorKind::kValidation, "unknown trait pair '" + std::string(id) + "'");
}

std::size_t Registry::GroupIndex(std::string_view id) const {
  for (std::size_t i = 0; i < groups_.size(); ++i)
    if (groups_[i].id == id) return i;
  throw Error(ErrorKind::kValidation, "unknown group '" + std::string(id) + "'");
}

void Registry::ValidateReference(std::string_view language, std::string_view group,
                                 std::string_view pair) const {
  if (FindLanguage(language) == nullptr)
    throw Error(ErrorKind::kValidation, "unknown language '" + std::string(language) + "'");
  const SocialGroup *g = FindGroup(group);
  if (g == nullptr)
    throw Error(ErrorKind::kValidation, "unknown group '" + std::string(group) + "'");
  const TraitPair *p = FindPair(pair);
  if (p == nullptr)
    throw Error(ErrorKind::kValidation, "unknown trait pair '" + std::string(pair) + "'");
  std::string lang(language);
  if (!g->surface_forms.count(lang)) {
    throw Error(ErrorKind::kValidation,
                "missing surface form for group '" + g->id + "' in " + lang);
  }
  if (!p->surface_forms.count(lang)) {
    throw Error(ErrorKind::kValidation,
                "missing surface form for trait pair '" + p->id + "' in " + lang);
  }
}

void Registry::CheckCanonical() const {
  auto expect = [](std::size_t got, std::size_t want, const std::string &what) {
    if (got != want) {
      throw Error(ErrorKind::kLoad, what + ": expected " + std::to_string(want) + ", found " +
                                        std::to_string(got));
    }
  };
  expect(pairs_.size(), 16, "trait pairs");
  expect(PairsIn(Dimension::kAgency).size(), 6, "Agency pairs");
  expect(PairsIn(Dimension::kBeliefs).size(), 4, "Beliefs pairs");
  expect(PairsIn(Dimension::kCommunion).size(), 6, "Communion pairs");
  expect(groups_.size(), 30, "groups");
  expect(GroupsIn(GroupCategory::kSharedShared).size(), 10, "SharedShared groups");
  expect(GroupsIn(GroupCategory::kSharedNonShared).size(), 8, "SharedNonShared groups");
  auto nonshared = GroupsIn(GroupCategory::kNonSharedNonShared);
  expect(nonshared.size(), 12, "NonSharedNonShared groups");
  for (const Language &l : languages_) {
    auto n = std::count_if(nonshared.begin(), nonshared.end(),
                           [&](const SocialGroup *g) { return *g->origin_language == l.code; });
    expect(static_cast<std::size_t>(n), 3, "non-shared groups originating in " + l.code);
  }
}

std::vector<const TraitPair *> Registry::PairsIn(Dimension d) const {
  std::vector<const TraitPair *> out;
  for (const TraitPair &p : pairs_)
    if (p.dimension == d) out.push_back(&p);
  return out;
}

std::vector<const SocialGroup *> Registry::GroupsIn(GroupCategory c) const {
  std::vector<const SocialGroup *> out;
  for (const SocialGroup &g : groups_)
    if (g.category == c) out.push_back(&g);
  return out;
}

std::filesystem::path BundledRegistryPath() {
  return std::filesystem::path(STEREOLEAK_DATA_DIR) / "registry.json";
}

}  // namespace stereoleak
