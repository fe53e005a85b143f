// include/stereoleak/scoring.hpp

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

#ifndef STEREOLEAK_SCORING_HPP_
#define STEREOLEAK_SCORING_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stereoleak/core.hpp"

namespace stereoleak {

enum class ProbeKind { kLogProb, kSensitivity, kChatResponse };

const char *ProbeKindName(ProbeKind k);

struct LogProbPayload {
  double logprob_nats = 0.0;
  std::optional<double> baseline_logprob_nats;
};

struct SensitivityPayload {
  double weight_change = 0.0;
};

struct ChatPayload {
  std::string raw_text;
  int repetition_index = 0;
};

/// One raw model measurement, as written by the probe component.
struct ProbeRecord {
  std::string model_id;
  std::string language;
  std::string group;
  std::string pair;
  std::optional<Pole> pole;  // absent for chat responses
  std::string template_id;
  std::variant<LogProbPayload, SensitivityPayload, ChatPayload> payload;

  ProbeKind kind() const { return static_cast<ProbeKind>(payload.index()); }
};

struct ProbeDumpHeader {
  std::string model_id;
  std::string logprob_base;
};

struct ProbeDump {
  ProbeDumpHeader header;
  std::vector<ProbeRecord> records;
  std::vector<std::string> warnings;
};

/// Parses a newline-delimited JSON probe dump. The first line is the header
/// {"probe_schema": 1, "model_id": ..., "logprob_base": "e"}. Unknown fields
/// are ignored; missing mandatory fields are errors naming the line.
/// When `registry` is given every record is validated against it.
ProbeDump ParseProbeDump(std::string_view text, const Registry *registry = nullptr);

struct PoleScore {
  std::string model_id;
  std::string language;
  std::string group;
  std::string pair;
  Pole pole = Pole::kLeft;
  double value = 0.0;
  ScaleKind scale = ScaleKind::kLogProb;
  int n = 0;  // templates or parseable repetitions
};

/// Mean template log-probability of one pole (optionally minus the neutral
/// baseline). All records must share model, language, group, pair and pole.
PoleScore IlpsScore(std::span<const ProbeRecord> records, bool normalize_by_baseline = false);

/// Negated mean weight change of one pole: larger means more associated.
PoleScore SetScore(std::span<const ProbeRecord> records);

enum class ChatChoice { kLeft, kRight, kUnparseable };

/// Case-insensitive containment of exactly one pole form. When one form is
/// a substring of the other (unconfident / confident) occurrences of the
/// longer form are masked before looking for the shorter one.
ChatChoice ClassifyChatResponse(std::string_view raw_text, const PolePair &forms);

struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const { return double(num) / double(den); }
  bool operator==(const Fraction &) const = default;
};

struct CountScore {
  PoleScore left;
  PoleScore right;
  Fraction left_fraction;
  Fraction right_fraction;
  int unparseable = 0;
};

/// Forced-choice pick fractions of one (group, pair). `forms` are the pole
/// surface forms in the records' language.
CountScore ScoreChatCounts(std::span<const ProbeRecord> records, const PolePair &forms);

/// right - left, so positive values point at the right pole like the survey
/// slider. Count fractions become a CountDifferential in [-1, 1].
AssociationScore PairDifferential(const PoleScore &left, const PoleScore &right);

enum class StandardizeMode { kWholeProfile, kPerPair };

const char *StandardizeModeName(StandardizeMode m);

/// z-scores with the sample (n - 1) standard deviation, pooled over every
/// cell of the profile, or per trait pair in kPerPair mode.
StereotypeProfile Standardize(const StereotypeProfile &profile,
                              StandardizeMode mode = StandardizeMode::kWholeProfile);

enum class ScoringMethod { kAuto, kIlps, kSet, kCount };

const char *ScoringMethodName(ScoringMethod m);
ScoringMethod ParseScoringMethod(std::string_view s);

struct ScoringOptions {
  ScoringMethod method = ScoringMethod::kAuto;
  bool normalize_by_baseline = false;
  /// Tag the resulting profiles as MonolingualModel(monolingual_id) instead
  /// of Model(<dump model id>).
  std::optional<std::string> monolingual_id;
};

struct ScoredDump {
  ScoringMethod method = ScoringMethod::kAuto;  // the method actually used
  std::vector<StereotypeProfile> profiles;      // one per language, unstandardized
  std::vector<std::string> notes;               // skipped keys and unparseable responses
};

/// Scores every complete (language, group, pair) key of a dump into
/// per-language bipolar profiles. Auto picks SeT when sensitivity records
/// exist, then ILPS, then chat counts.
ScoredDump ScoreDump(const ProbeDump &dump, const Registry &registry,
                     const ScoringOptions &options = {});

}  // namespace stereoleak

#endif  // STEREOLEAK_SCORING_HPP_
