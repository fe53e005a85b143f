// src/fixture.cpp

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

#include "stereoleak/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <tuple>

#include "json.hpp"
#include "stereoleak/mixedfx/simulate.hpp"
#include "stereoleak/text.hpp"

namespace stereoleak {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr std::array<const char *, 4> kLangs{"EN", "RU", "ZH", "HI"};

// Stream ids keep every component's draws independent of the others.
enum Stream : std::uint64_t {
  kLatent = 1,
  kSurvey = 2,
  kModelBase = 16,  // + model index
};

using Profile = std::vector<std::vector<double>>;  // [group][pair]

struct Latent {
  std::array<Profile, 4> human;  // per language
};

Latent DrawLatent(const Registry &registry, std::mt19937_64 &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t G = registry.groups().size(), P = registry.trait_pairs().size();
  Latent lat;
  for (Profile &p : lat.human) p.assign(G, std::vector<double>(P, 0.0));
  for (std::size_t g = 0; g < G; ++g) {
    const SocialGroup &group = registry.groups()[g];
    // Language-specific spread: shared groups agree most across languages.
    const double spread = group.category == GroupCategory::kSharedShared      ? 0.8
                          : group.category == GroupCategory::kSharedNonShared ? 1.0
                                                                              : 1.7;
    for (std::size_t k = 0; k < P; ++k) {
      const double base = normal(rng);
      for (std::size_t l = 0; l < kLangs.size(); ++l) {
        lat.human[l][g][k] = (base + spread * normal(rng)) / std::sqrt(1.0 + spread * spread);
      }
    }
  }
  // A group known almost only in Russia, with a marked Russian profile.
  if (registry.FindGroup("vdv_soldier") != nullptr) {
    const std::size_t g = registry.GroupIndex("vdv_soldier");
    for (std::size_t l = 0; l < kLangs.size(); ++l)
      for (std::size_t k = 0; k < P; ++k) lat.human[l][g][k] = 0.3 * normal(rng);
    for (const char *pair : {"untrustworthy_trustworthy", "dishonest_sincere",
                             "benevolent_threatening", "unconfident_confident",
                             "religious_science_oriented"}) {
      if (registry.FindPair(pair) != nullptr) lat.human[1][g][registry.PairIndex(pair)] = 3.0;
    }
  }
  return lat;
}

struct SurveyTables {
  std::string ratings = "survey_schema: 1\nrespondent_id,language,group_id,pair_id,rating\n";
  std::string familiarity = "survey_schema: 1\nrespondent_id,language,group_id\n";
  std::string checks = "survey_schema: 1\nrespondent_id,check_id,passed\n";
  std::string demographics = "survey_schema: 1\nrespondent_id,key,value\n";
};

bool Forbidden(const std::string &lang, const std::string &group) {
  return (lang == "EN" && group == "vdv_soldier") ||
         ((lang == "RU" || lang == "HI") && group == "hui_person");
}

SurveyTables DrawSurvey(const Registry &registry, const Latent &lat, const FixtureOptions &o,
                        std::mt19937_64 &rng) {
  SurveyTables t;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto &groups = registry.groups();
  const auto &pairs = registry.trait_pairs();
  const std::array<const char *, 5> education{"bachelor", "master", "phd", "high_school", ""};
  const std::array<const char *, 4> media{"regularly", "sometimes", "never", ""};

  for (std::size_t l = 0; l < kLangs.size(); ++l) {
    const std::string lang = kLangs[l];
    const int n = o.respondents[l];
    if (o.passing[l] > n) throw Error(ErrorKind::kUsage, "fixture: passing > respondents");
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<bool> passes(n, false);
    for (int i = 0; i < o.passing[l]; ++i) passes[order[i]] = true;

    int passing_seen = 0;
    for (int r = 0; r < n; ++r) {
      char id[32];
      std::snprintf(id, sizeof id, "%s-%03d", lang.c_str(), r + 1);
      const bool pass = passes[r];
      std::vector<bool> familiar(groups.size(), false);
      for (std::size_t g = 0; g < groups.size(); ++g) {
        const SocialGroup &sg = groups[g];
        if (Forbidden(lang, sg.id)) continue;
        double prob = sg.shared() ? 0.5 : (sg.origin_language == lang ? 0.7 : 0.12);
        if (lang == "HI" && sg.id == "immigrant") {
          // Rare in India: exactly four passing respondents know the group.
          familiar[g] = pass ? passing_seen < 4 : unit(rng) < 0.1;
          continue;
        }
        familiar[g] = unit(rng) < prob;
      }
      for (std::size_t g = 0, count = std::count(familiar.begin(), familiar.end(), true);
           count < 4 && g < groups.size(); ++g) {
        if (groups[g].category == GroupCategory::kSharedShared && !familiar[g]) {
          familiar[g] = true;
          ++count;
        }
      }
      if (pass) ++passing_seen;

      const double noise = pass ? 10.0 : 25.0;
      for (std::size_t g = 0; g < groups.size(); ++g) {
        if (!familiar[g]) continue;
        t.familiarity += std::string(id) + "," + lang + "," + groups[g].id + "\n";
        for (std::size_t k = 0; k < pairs.size(); ++k) {
          const double raw = std::round(15.0 * lat.human[l][g][k] + noise * normal(rng));
          const double rating = std::clamp(raw, -50.0, 50.0);
          t.ratings += std::string(id) + "," + lang + "," + groups[g].id + "," + pairs[k].id +
                       "," + FormatShortest(rating == 0.0 ? 0.0 : rating) + "\n";
        }
      }

      // Failing respondents either miss a check or lack one record.
      int records = 4;
      int failed_check = -1;
      if (!pass) {
        if (unit(rng) < 0.2) records = 3;
        else failed_check = static_cast<int>(unit(rng) * 4.0) % 4;
      }
      for (int c = 0; c < records; ++c) {
        t.checks += std::string(id) + ",check_" + std::to_string(c + 1) + "," +
                    (c == failed_check ? "fail" : "pass") + "\n";
      }
      const auto pick = [&](const auto &options) {
        return options[static_cast<std::size_t>(unit(rng) * options.size()) % options.size()];
      };
      t.demographics += std::string(id) + ",education," + pick(education) + "\n";
      t.demographics += std::string(id) + ",us_media," + pick(media) + "\n";
    }
  }
  return t;
}

// Model association (right minus left, latent units) for one model.
struct ModelPlan {
  std::string id;
  enum class Kind { kMasked, kSeq2Seq, kChat } kind;
  double own = 0.0;                                  // same-language coefficient
  std::vector<std::tuple<int, int, double>> cross;   // (source, target, coefficient)
  std::array<double, 4> monolingual{0, 0, 0, 0};     // per target
  double noise = 0.3;
};

Profile ModelProfile(const ModelPlan &plan, std::size_t target, const Latent &lat,
                     const std::array<Profile, 4> *mono, std::mt19937_64 &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t G = lat.human[0].size(), P = lat.human[0][0].size();
  Profile out(G, std::vector<double>(P, 0.0));
  for (std::size_t g = 0; g < G; ++g) {
    const double u = 0.2 * normal(rng);
    for (std::size_t k = 0; k < P; ++k) {
      double v = plan.own * lat.human[target][g][k] + u + plan.noise * normal(rng);
      for (const auto &[s, t, c] : plan.cross)
        if (static_cast<std::size_t>(t) == target) v += c * lat.human[s][g][k];
      if (mono != nullptr) v += plan.monolingual[target] * (*mono)[target][g][k];
      out[g][k] = v;
    }
  }
  return out;
}

std::string Header(const std::string &model_id) {
  ojson h;
  h["probe_schema"] = 1;
  h["model_id"] = model_id;
  h["logprob_base"] = "e";
  h["scoring_note"] = "synthetic fixture";
  return h.dump() + "\n";
}

ojson Record(const std::string &model, const std::string &lang, const std::string &group,
             const std::string &pair, const char *kind) {
  ojson r;
  r["model_id"] = model;
  r["language"] = lang;
  r["group"] = group;
  r["pair"] = pair;
  r["kind"] = kind;
  return r;
}

double Round6(double v) { return std::round(v * 1e6) / 1e6; }

void AppendScalarRecords(std::string &out, const std::string &model, const std::string &lang,
                         const Registry &registry, const Profile &values, bool masked,
                         bool with_logprob, int templates, std::mt19937_64 &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t g = 0; g < registry.groups().size(); ++g) {
    const std::string &group = registry.groups()[g].id;
    for (std::size_t k = 0; k < registry.trait_pairs().size(); ++k) {
      const std::string &pair = registry.trait_pairs()[k].id;
      const double d = values[g][k];
      for (int t = 0; t < templates; ++t) {
        const std::string tid = "t" + std::to_string(t);
        for (Pole pole : {Pole::kLeft, Pole::kRight}) {
          const double sign = pole == Pole::kRight ? 1.0 : -1.0;
          if (masked) {
            ojson r = Record(model, lang, group, pair, "Sensitivity");
            r["pole"] = PoleName(pole);
            r["template_id"] = tid;
            const double wc = std::max(0.0, 4.0 - sign * d / 2.0 + 0.05 * normal(rng));
            r["payload"] = {{"weight_change", Round6(wc)}};
            out += r.dump() + "\n";
          }
          if (with_logprob) {
            ojson r = Record(model, lang, group, pair, "LogProb");
            r["pole"] = PoleName(pole);
            r["template_id"] = tid;
            const double lp = -6.0 + sign * d / 2.0 + 0.05 * normal(rng);
            r["payload"] = {{"logprob_nats", Round6(lp)},
                            {"baseline_logprob_nats", Round6(-6.5 + 0.05 * normal(rng))}};
            out += r.dump() + "\n";
          }
        }
      }
    }
  }
}

void AppendChatRecords(std::string &out, const std::string &model, const std::string &lang,
                       const Registry &registry, const Profile &values, int reps,
                       std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t g = 0; g < registry.groups().size(); ++g) {
    const SocialGroup &group = registry.groups()[g];
    for (std::size_t k = 0; k < registry.trait_pairs().size(); ++k) {
      const TraitPair &tp = registry.trait_pairs()[k];
      const PolePair &forms = tp.surface_forms.at(lang);
      // Expected pick counts rather than binomial draws, so the ordering of
      // poles survives the coarse 1/reps resolution.
      const double p_right = 1.0 / (1.0 + std::exp(-values[g][k]));
      const int n_right = static_cast<int>(std::lround(p_right * reps));
      for (int rep = 0; rep < reps; ++rep) {
        ojson r = Record(model, lang, group.id, tp.id, "ChatResponse");
        std::string text;
        if (unit(rng) < 0.03) {
          text = "[no theme chosen]";
        } else {
          const std::string &form = rep < n_right ? forms.right : forms.left;
          text = "Theme: " + form + ". Once upon a time...";
        }
        r["payload"] = {{"raw_text", text}, {"repetition_index", rep}};
        out += r.dump() + "\n";
      }
    }
  }
}

}  // namespace

FixtureManifest GenerateFixture(const fs::path &root, const Registry &registry,
                                const FixtureOptions &o) {
  for (const char *code : kLangs) {
    if (registry.FindLanguage(code) == nullptr) {
      throw Error(ErrorKind::kValidation, std::string("fixture: registry lacks language ") + code);
    }
  }
  FixtureManifest m;
  m.root = root;
  auto latent_rng = mixedfx::SeededEngine(o.seed, kLatent);
  const Latent lat = DrawLatent(registry, latent_rng);

  auto survey_rng = mixedfx::SeededEngine(o.seed, kSurvey);
  const SurveyTables survey = DrawSurvey(registry, lat, o, survey_rng);
  m.ratings = root / "survey" / "ratings.csv";
  m.familiarity = root / "survey" / "familiarity.csv";
  m.checks = root / "survey" / "checks.csv";
  m.demographics = root / "survey" / "demographics.csv";
  WriteTextFile(m.ratings, survey.ratings);
  WriteTextFile(m.familiarity, survey.familiarity);
  WriteTextFile(m.checks, survey.checks);
  WriteTextFile(m.demographics, survey.demographics);

  // Monolingual models track their own language's latent profile.
  std::array<Profile, 4> mono;
  const std::array<const char *, 4> mono_ids{"bert-en", "rubert", "bert-zh", "bert-hi"};
  {
    ModelPlan plan{"mono", ModelPlan::Kind::kMasked, 0.7, {}, {}, 0.5};
    for (std::size_t l = 0; l < kLangs.size(); ++l) {
      auto rng = mixedfx::SeededEngine(o.seed, kModelBase + 8 + l);
      mono[l] = ModelProfile(plan, l, lat, nullptr, rng);
      std::string out = Header(mono_ids[l]);
      AppendScalarRecords(out, mono_ids[l], kLangs[l], registry, mono[l], true, false,
                          o.templates, rng);
      const fs::path path = root / "dumps" / (std::string(mono_ids[l]) + ".ndjson");
      WriteTextFile(path, out);
      m.monolingual_dumps.push_back(path);
    }
  }

  const std::vector<ModelPlan> plans = {
      {"chatgpt", ModelPlan::Kind::kChat, 0.45,
       {{1, 0, 0.5}, {2, 1, 0.36}, {0, 3, 0.10}}, {}, 0.25},
      {"mbert", ModelPlan::Kind::kMasked, 0.25,
       {{3, 0, 0.02}, {3, 2, 0.06}, {0, 3, 0.02}}, {0.33, 0.29, 0.17, 0.08}, 0.3},
      {"mt5", ModelPlan::Kind::kSeq2Seq, 0.35, {{0, 1, 0.15}}, {}, 0.35},
  };
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const ModelPlan &plan = plans[i];
    auto rng = mixedfx::SeededEngine(o.seed, kModelBase + i);
    const bool uses_mono = plan.monolingual != std::array<double, 4>{0, 0, 0, 0};
    std::string out = Header(plan.id);
    for (std::size_t l = 0; l < kLangs.size(); ++l) {
      const Profile values = ModelProfile(plan, l, lat, uses_mono ? &mono : nullptr, rng);
      switch (plan.kind) {
        case ModelPlan::Kind::kMasked:
          AppendScalarRecords(out, plan.id, kLangs[l], registry, values, true, true, o.templates,
                              rng);
          break;
        case ModelPlan::Kind::kSeq2Seq:
          AppendScalarRecords(out, plan.id, kLangs[l], registry, values, false, true,
                              o.templates, rng);
          break;
        case ModelPlan::Kind::kChat:
          AppendChatRecords(out, plan.id, kLangs[l], registry, values, o.chat_repetitions, rng);
          break;
      }
      m.planted.push_back({plan.id, kLangs[l], kLangs[l], plan.own});
      if (uses_mono) m.planted_monolingual[kLangs[l]] = plan.monolingual[l];
    }
    for (const auto &[s, t, c] : plan.cross) m.planted.push_back({plan.id, kLangs[s], kLangs[t], c});
    const fs::path path = root / "dumps" / (plan.id + ".ndjson");
    WriteTextFile(path, out);
    m.dumps.push_back(path);
  }

  std::string config =
      "# pipeline configuration for the synthetic fixture\n"
      "survey_ratings = survey/ratings.csv\n"
      "survey_familiarity = survey/familiarity.csv\n"
      "survey_checks = survey/checks.csv\n"
      "survey_demographics = survey/demographics.csv\n";
  for (const fs::path &p : m.dumps) config += "dump = dumps/" + p.filename().string() + "\n";
  for (const fs::path &p : m.monolingual_dumps) {
    config += "monolingual_dump = dumps/" + p.filename().string() + "\n";
  }
  config +=
      "monolingual_for = mbert\n"
      "output_dir = out\n"
      "alpha = 0.05\n"
      "method = REML\n"
      "k = 5\n"
      "theta = 0.5\n"
      "seed = 7\n"
      "reps = 500\n";
  m.config = root / "stereoleak.conf";
  WriteTextFile(m.config, config);
  return m;
}

}  // namespace stereoleak
