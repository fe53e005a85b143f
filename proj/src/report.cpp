// src/report.cpp

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

#include "stereoleak/report.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "stereoleak/text.hpp"

namespace stereoleak {

using ojson = nlohmann::ordered_json;

namespace {

std::string DotId(const std::string &prefix, const std::string &lang) {
  return prefix + "_" + lang;
}

}  // namespace

FlowGraph BuildFlow(const std::vector<LeakageResult> &results, const Registry &registry,
                    const FlowOptions &options) {
  if (results.empty()) throw Error(ErrorKind::kUsage, "render_flow: no results");
  FlowGraph g;
  g.model_id = results.front().spec.model_id;
  g.cross_only = options.cross_only;
  for (const LeakageResult &r : results) {
    if (r.spec.model_id != g.model_id) {
      throw Error(ErrorKind::kConsistency, "render_flow: results mix models '" + g.model_id +
                                               "' and '" + r.spec.model_id + "'");
    }
  }
  for (const Language &l : registry.languages()) g.languages.push_back(l.code);

  for (const Language &target : registry.languages()) {
    for (const LeakageResult &r : results) {
      if (r.spec.target_language != target.code) continue;
      for (const Language &source : registry.languages()) {
        for (const PredictorEffect &e : r.per_predictor) {
          if (e.predictor.source.kind != Source::Kind::kHuman) continue;
          if (e.predictor.language != source.code || !e.significant) continue;
          if (options.cross_only && source.code == target.code) continue;
          g.edges.push_back({source.code, target.code, e.coefficient, e.p_value});
        }
      }
    }
  }
  return g;
}

std::string FlowToDot(const FlowGraph &graph, const FlowOptions &options) {
  std::ostringstream out;
  out << "digraph \"flow_" << graph.model_id << "\" {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=box];\n";
  out << "  subgraph cluster_source {\n    label=\"Human\";\n    rank=same;\n";
  for (const std::string &l : graph.languages) {
    out << "    " << DotId("src", l) << " [label=\"" << l << "\"];\n";
  }
  out << "  }\n";
  out << "  subgraph cluster_target {\n    label=\"" << graph.model_id << "\";\n    rank=same;\n";
  for (const std::string &l : graph.languages) {
    out << "    " << DotId("tgt", l) << " [label=\"" << l << "\"];\n";
  }
  out << "  }\n";
  for (const FlowEdge &e : graph.edges) {
    out << "  " << DotId("src", e.source_language) << " -> " << DotId("tgt", e.target_language)
        << " [penwidth=" << FormatShortest(e.weight * options.penwidth_per_unit)
        << ", label=\"" << FormatFixed(e.weight, 2) << "\", weight_value="
        << FormatShortest(e.weight) << ", p_value=" << FormatShortest(e.p_value) << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string FlowToJson(const FlowGraph &graph) {
  ojson doc;
  doc["flow_schema"] = 1;
  doc["model_id"] = graph.model_id;
  doc["cross_only"] = graph.cross_only;
  doc["languages"] = graph.languages;
  ojson edges = ojson::array();
  for (const FlowEdge &e : graph.edges) {
    edges.push_back({{"source_language", e.source_language},
                     {"target_language", e.target_language},
                     {"weight", e.weight},
                     {"p_value", e.p_value}});
  }
  doc["edges"] = std::move(edges);
  return doc.dump(1) + "\n";
}

RadarData BuildRadar(const std::vector<const StereotypeProfile *> &profiles,
                     const std::string &group, const Registry &registry) {
  if (profiles.empty()) throw Error(ErrorKind::kUsage, "render_radar: no profiles");
  if (registry.FindGroup(group) == nullptr) {
    throw Error(ErrorKind::kValidation, "render_radar: unknown group '" + group + "'");
  }
  RadarData radar;
  radar.group = group;
  for (const TraitPair &tp : registry.trait_pairs()) radar.axes.push_back(tp.right_pole);
  for (const StereotypeProfile *p : profiles) {
    RadarSeries s;
    s.source = p->source().ToString();
    s.language = p->language();
    std::vector<std::string> missing;
    for (const TraitPair &tp : registry.trait_pairs()) {
      auto v = p->Value(group, tp.id);
      if (!v) {
        missing.push_back(tp.id);
        continue;
      }
      s.values.push_back(*v);
    }
    if (!missing.empty()) {
      std::string list;
      for (const std::string &m : missing) list += (list.empty() ? "" : ", ") + m;
      throw Error(ErrorKind::kConsistency, "render_radar: " + s.source + "/" + s.language +
                                               " lacks pairs for " + group + ": " + list);
    }
    radar.series.push_back(std::move(s));
  }
  return radar;
}

std::string RadarToJson(const RadarData &radar) {
  ojson doc;
  doc["radar_schema"] = 1;
  doc["group"] = radar.group;
  doc["axes"] = radar.axes;
  ojson series = ojson::array();
  for (const RadarSeries &s : radar.series) {
    series.push_back({{"source", s.source}, {"language", s.language}, {"values", s.values}});
  }
  doc["series"] = std::move(series);
  return doc.dump(1) + "\n";
}

std::string RadarToCsv(const RadarData &radar) {
  std::string out = "axis";
  for (const RadarSeries &s : radar.series) {
    out += "," + QuoteCsvField(s.source + "(" + s.language + ")");
  }
  out += "\n";
  for (std::size_t a = 0; a < radar.axes.size(); ++a) {
    out += QuoteCsvField(radar.axes[a]);
    for (const RadarSeries &s : radar.series) out += "," + FormatShortest(s.values[a]);
    out += "\n";
  }
  return out;
}

std::vector<CoefficientTable> BuildTables(const std::vector<LeakageResult> &results,
                                          const Registry &registry) {
  if (results.empty()) throw Error(ErrorKind::kUsage, "render_tables: no results");
  std::vector<std::string> models;
  for (const LeakageResult &r : results) {
    if (std::find(models.begin(), models.end(), r.spec.model_id) == models.end()) {
      models.push_back(r.spec.model_id);
    }
  }
  std::sort(models.begin(), models.end());

  std::vector<CoefficientTable> tables;
  for (const std::string &model : models) {
    CoefficientTable t;
    t.model_id = model;
    for (const Language &l : registry.languages()) t.columns.push_back(l.code);
    for (const Language &l : registry.languages()) t.rows.push_back("Human(" + l.code + ")");
    bool has_mono = false;
    for (const LeakageResult &r : results) {
      if (r.spec.model_id != model) continue;
      for (const PredictorEffect &e : r.per_predictor) {
        has_mono |= e.predictor.source.kind == Source::Kind::kMonolingualModel;
      }
    }
    if (has_mono) t.rows.push_back("Monolingual");
    t.cells.assign(t.rows.size(), std::vector<TableCell>(t.columns.size()));

    for (const LeakageResult &r : results) {
      if (r.spec.model_id != model) continue;
      const auto col = std::find(t.columns.begin(), t.columns.end(), r.spec.target_language);
      if (col == t.columns.end()) {
        throw Error(ErrorKind::kValidation,
                    "render_tables: unknown target language " + r.spec.target_language);
      }
      for (const PredictorEffect &e : r.per_predictor) {
        const std::string label = e.predictor.source.kind == Source::Kind::kMonolingualModel
                                      ? "Monolingual"
                                      : e.predictor.Label();
        const auto row = std::find(t.rows.begin(), t.rows.end(), label);
        if (row == t.rows.end()) continue;  // non-human, non-monolingual predictor
        TableCell &c = t.cells[row - t.rows.begin()][col - t.columns.begin()];
        if (c.present) {
          throw Error(ErrorKind::kConsistency, "render_tables: two results for " + model + "/" +
                                                   r.spec.target_language + "/" + label);
        }
        c = {true, e.coefficient, e.se, e.p_value, e.significant};
      }
    }
    tables.push_back(std::move(t));
  }
  return tables;
}

std::string TablesToText(const std::vector<CoefficientTable> &tables) {
  if (tables.empty()) throw Error(ErrorKind::kUsage, "render_tables: no tables");
  std::string out;
  auto block = [&out](const CoefficientTable &t, const char *title, auto field) {
    out += "# " + t.model_id + " " + title + " (rows: source, columns: target)\n";
    out += "source";
    for (const std::string &c : t.columns) out += " " + c;
    out += "\n";
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      out += t.rows[i];
      for (const TableCell &c : t.cells[i]) out += " " + (c.present ? field(c) : std::string("-"));
      out += "\n";
    }
  };
  for (std::size_t k = 0; k < tables.size(); ++k) {
    if (k > 0) out += "\n";
    block(tables[k], "coefficients", [](const TableCell &c) { return FormatFixed(c.coefficient, 2); });
    block(tables[k], "p-values", [](const TableCell &c) { return FormatFixed(c.p_value, 2); });
    block(tables[k], "significant", [](const TableCell &c) {
      return std::string(c.significant ? "yes" : "no");
    });
  }
  return out;
}

std::string TablesToCsv(const std::vector<LeakageResult> &results) {
  if (results.empty()) throw Error(ErrorKind::kUsage, "render_tables: no results");
  std::vector<const LeakageResult *> order;
  for (const LeakageResult &r : results) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(), [](const LeakageResult *a, const LeakageResult *b) {
    return a->spec.model_id < b->spec.model_id;
  });
  std::string out = "model_id,target_language,predictor,coefficient,se,p_value,significant\n";
  for (const LeakageResult *r : order) {
    for (const PredictorEffect &e : r->per_predictor) {
      out += QuoteCsvField(r->spec.model_id) + "," + r->spec.target_language + "," +
             QuoteCsvField(e.predictor.Label()) + "," + FormatShortest(e.coefficient) + "," +
             FormatShortest(e.se) + "," + FormatShortest(e.p_value) + "," +
             (e.significant ? "true" : "false") + "\n";
    }
  }
  return out;
}

std::vector<TableCsvRow> ParseTablesCsv(std::string_view text) {
  std::vector<TableCsvRow> out;
  const auto lines = SplitLines(text);
  std::size_t line_no = 0;
  for (std::string_view line : lines) {
    ++line_no;
    if (line_no == 1 || Trim(line).empty()) continue;
    const auto f = SplitCsvRecord(line);
    if (f.size() != 7) throw ParseError(line_no, "expected 7 fields");
    TableCsvRow row;
    row.model_id = f[0];
    row.target_language = f[1];
    row.predictor = f[2];
    try {
      row.coefficient = ParseDouble(f[3]);
      row.se = ParseDouble(f[4]);
      row.p_value = ParseDouble(f[5]);
    } catch (const std::invalid_argument &) {
      throw ParseError(line_no, "bad number");
    }
    if (f[6] != "true" && f[6] != "false") throw ParseError(line_no, "bad significance flag");
    row.significant = f[6] == "true";
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace stereoleak
