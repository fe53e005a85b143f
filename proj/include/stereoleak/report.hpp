// include/stereoleak/report.hpp

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

#ifndef STEREOLEAK_REPORT_HPP_
#define STEREOLEAK_REPORT_HPP_

#include <string>
#include <vector>

#include "stereoleak/core.hpp"
#include "stereoleak/leakage.hpp"

namespace stereoleak {

struct FlowEdge {
  std::string source_language;
  std::string target_language;
  double weight = 0.0;  // the coefficient
  double p_value = 1.0;
};

struct FlowGraph {
  std::string model_id;
  std::vector<std::string> languages;  // node columns, registry order
  std::vector<FlowEdge> edges;         // target-major, then source, registry order
  bool cross_only = false;
};

struct FlowOptions {
  bool cross_only = false;
  double penwidth_per_unit = 10.0;  // DOT penwidth = coefficient * this
};

/// Edges are the significant Human(l) predictors of each result; monolingual
/// predictors are not language flows and never become edges. All results must
/// share a model id.
FlowGraph BuildFlow(const std::vector<LeakageResult> &results, const Registry &registry,
                    const FlowOptions &options = {});

std::string FlowToDot(const FlowGraph &graph, const FlowOptions &options = {});
std::string FlowToJson(const FlowGraph &graph);

struct RadarSeries {
  std::string source;
  std::string language;
  std::vector<double> values;  // one per axis
};

struct RadarData {
  std::string group;
  std::vector<std::string> axes;  // right-pole names in registry pair order
  std::vector<RadarSeries> series;
};

/// One series per profile. Every profile must hold all pairs for `group`;
/// otherwise the error lists the missing pair ids.
RadarData BuildRadar(const std::vector<const StereotypeProfile *> &profiles,
                     const std::string &group, const Registry &registry);

std::string RadarToJson(const RadarData &radar);
std::string RadarToCsv(const RadarData &radar);

struct TableCell {
  bool present = false;
  double coefficient = 0.0;
  double se = 0.0;
  double p_value = 1.0;
  bool significant = false;
};

/// Source x target coefficients of one model. Human predictors give rows
/// "Human(EN)" etc.; every monolingual predictor shares the row "Monolingual".
struct CoefficientTable {
  std::string model_id;
  std::vector<std::string> rows;
  std::vector<std::string> columns;       // target languages
  std::vector<std::vector<TableCell>> cells;  // [row][column]
};

std::vector<CoefficientTable> BuildTables(const std::vector<LeakageResult> &results,
                                          const Registry &registry);

/// Space-separated blocks of coefficients and p-values, two decimals.
std::string TablesToText(const std::vector<CoefficientTable> &tables);

/// One CSV line per (model, target, predictor) in shortest round-trip form.
std::string TablesToCsv(const std::vector<LeakageResult> &results);

struct TableCsvRow {
  std::string model_id;
  std::string target_language;
  std::string predictor;
  double coefficient = 0.0;
  double se = 0.0;
  double p_value = 1.0;
  bool significant = false;
};

std::vector<TableCsvRow> ParseTablesCsv(std::string_view text);

}  // namespace stereoleak

#endif  // STEREOLEAK_REPORT_HPP_
