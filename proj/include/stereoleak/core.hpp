// include/stereoleak/core.hpp

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

#ifndef STEREOLEAK_CORE_HPP_
#define STEREOLEAK_CORE_HPP_

#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stereoleak/error.hpp"

namespace stereoleak {

enum class Dimension { kAgency, kBeliefs, kCommunion };
enum class GroupCategory { kSharedShared, kSharedNonShared, kNonSharedNonShared };
enum class Pole { kLeft, kRight };

const char *DimensionName(Dimension d);
const char *CategoryName(GroupCategory c);
const char *PoleName(Pole p);
GroupCategory ParseCategory(std::string_view s);
Pole ParsePole(std::string_view s);

struct Language {
  std::string code;
  std::string display_name;
  /// Third-person plural pronoun, used as the neutral subject for ILPS baselines.
  std::string neutral_pronoun;
};

struct PolePair {
  std::string left;
  std::string right;
};

/// One bipolar ABC trait pair. The right pole is the positive direction of
/// every bipolar score in this project.
struct TraitPair {
  std::string id;
  std::string left_pole;
  std::string right_pole;
  Dimension dimension = Dimension::kAgency;
  std::map<std::string, PolePair> surface_forms;  // language code -> poles

  const std::string &pole_name(Pole p) const {
    return p == Pole::kLeft ? left_pole : right_pole;
  }
};

struct SocialGroup {
  std::string id;
  std::string name;  // English canonical form
  GroupCategory category = GroupCategory::kSharedShared;
  std::optional<std::string> origin_language;  // set iff NonSharedNonShared
  std::map<std::string, std::string> surface_forms;

  bool shared() const { return category != GroupCategory::kNonSharedNonShared; }
};

// Scale bookkeeping. CountDifferential is the right-minus-left difference of
// two CountFraction pole scores and therefore lives in [-1, 1].
enum class ScaleKind {
  kBipolarSlider,
  kLogProb,
  kSensitivity,
  kCountFraction,
  kCountDifferential,
  kStandardized,
};

const char *ScaleName(ScaleKind s);
ScaleKind ParseScale(std::string_view s);
bool WithinScale(ScaleKind s, double value);

/// Where an association score came from.
struct Source {
  enum class Kind { kHuman, kModel, kMonolingualModel };
  Kind kind = Kind::kHuman;
  std::string model_id;

  static Source Human() { return {}; }
  static Source Model(std::string id) { return {Kind::kModel, std::move(id)}; }
  static Source Monolingual(std::string id) {
    return {Kind::kMonolingualModel, std::move(id)};
  }

  /// "Human", "Model(<id>)" or "MonolingualModel(<id>)".
  std::string ToString() const;
  static Source Parse(std::string_view text);

  auto operator<=>(const Source &) const = default;
};

struct CellKey {
  std::string group;
  std::string pair;
  auto operator<=>(const CellKey &) const = default;
};

struct AssociationScore {
  std::string group;
  std::string pair;
  std::string language;
  Source source;
  double value = 0.0;
  ScaleKind scale = ScaleKind::kBipolarSlider;
  int n_observations = 0;
};

/// All scores of one (source, language), on one scale.
class StereotypeProfile {
 public:
  StereotypeProfile() = default;
  StereotypeProfile(std::string language, Source source, ScaleKind scale)
      : language_(std::move(language)), source_(std::move(source)), scale_(scale) {}

  /// Inserts or replaces a cell. Throws if the score disagrees with the
  /// profile's language, source or scale, or lies outside the scale bounds.
  void Set(const AssociationScore &score);

  const AssociationScore *Find(const std::string &group, const std::string &pair) const;
  std::optional<double> Value(const std::string &group, const std::string &pair) const;
  bool HasGroup(const std::string &group) const;

  const std::string &language() const { return language_; }
  const Source &source() const { return source_; }
  ScaleKind scale() const { return scale_; }
  const std::map<CellKey, AssociationScore> &cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

 private:
  std::string language_;
  Source source_;
  ScaleKind scale_ = ScaleKind::kBipolarSlider;
  std::map<CellKey, AssociationScore> cells_;
};

/// Immutable registry of languages, trait pairs and social groups, loaded
/// from a versioned JSON file. Ordering follows the file.
class Registry {
 public:
  static Registry LoadFile(const std::filesystem::path &path);
  static Registry Parse(std::string_view json_text);

  const std::vector<Language> &languages() const { return languages_; }
  const std::vector<TraitPair> &trait_pairs() const { return pairs_; }
  const std::vector<SocialGroup> &groups() const { return groups_; }

  const Language *FindLanguage(std::string_view code) const;
  const TraitPair *FindPair(std::string_view id) const;
  const SocialGroup *FindGroup(std::string_view id) const;
  std::size_t PairIndex(std::string_view id) const;   // throws if unknown
  std::size_t GroupIndex(std::string_view id) const;  // throws if unknown

  /// Succeeds iff language, group and pair are registered and both the group
  /// and the pair have a surface form in that language.
  void ValidateReference(std::string_view language, std::string_view group,
                         std::string_view pair) const;

  /// Throws unless the registry holds the canonical 16 pairs (6/4/6 by
  /// dimension) and 30 groups (10/8/12 by category).
  void CheckCanonical() const;

  std::vector<const TraitPair *> PairsIn(Dimension d) const;
  std::vector<const SocialGroup *> GroupsIn(GroupCategory c) const;

 private:
  std::vector<Language> languages_;
  std::vector<TraitPair> pairs_;
  std::vector<SocialGroup> groups_;
};

/// Canonical trait pairs of a loaded registry, in table order.
inline const std::vector<TraitPair> &CanonicalTraitPairs(const Registry &r) {
  return r.trait_pairs();
}
inline const std::vector<SocialGroup> &CanonicalGroups(const Registry &r) {
  return r.groups();
}

/// Location of the registry shipped with the sources.
std::filesystem::path BundledRegistryPath();

}  // namespace stereoleak

#endif  // STEREOLEAK_CORE_HPP_
