// include/stereoleak/fixture.hpp

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

#ifndef STEREOLEAK_FIXTURE_HPP_
#define STEREOLEAK_FIXTURE_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "stereoleak/core.hpp"

namespace stereoleak {

// Synthetic end-to-end corpus: a survey export with engineered attention
// check outcomes and probe dumps for three multilingual models plus one
// monolingual model per language, all derived from per-language latent
// stereotype profiles with planted cross-language coefficients.

struct FixtureOptions {
  std::uint64_t seed = 20240917;
  // Per registry language (EN, RU, ZH, HI): respondents and how many of them
  // pass every attention check.
  std::array<int, 4> respondents{70, 72, 72, 72};
  std::array<int, 4> passing{34, 36, 41, 40};
  int templates = 3;
  int chat_repetitions = 10;
};

/// Planted coefficient of Human(source) latent profile on one model/target.
struct PlantedFlow {
  std::string model_id;
  std::string source_language;
  std::string target_language;
  double coefficient = 0.0;
};

struct FixtureManifest {
  std::filesystem::path root;
  std::filesystem::path config;  // ready-to-run pipeline config
  std::filesystem::path ratings, familiarity, checks, demographics;
  std::vector<std::filesystem::path> dumps;
  std::vector<std::filesystem::path> monolingual_dumps;
  std::vector<PlantedFlow> planted;
  std::map<std::string, double> planted_monolingual;  // target language -> coefficient
};

/// Writes the corpus under `root` (created if needed). Identical options
/// give byte-identical files. Needs a registry with the EN/RU/ZH/HI
/// languages and the canonical group ids.
FixtureManifest GenerateFixture(const std::filesystem::path &root, const Registry &registry,
                                const FixtureOptions &options = {});

}  // namespace stereoleak

#endif  // STEREOLEAK_FIXTURE_HPP_
