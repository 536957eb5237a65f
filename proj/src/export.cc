// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "smg/export.h"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <fmt/format.h>
#include <json.hpp>

namespace smg {

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt::format("{}", value);
}

std::string provenance_header(const Provenance& p) {
  std::string out;
  for (const auto& [key, value] : p) out += fmt::format("# {}: {}\n", key, value);
  return out;
}

std::string genome_values_tsv(const Genome& genome, const Provenance& p) {
  std::string out = provenance_header(p);
  out += "user\ttopic\tmetric\thashtag\tvalue\n";
  for (const auto& [user, genotype] : genome.genotypes) {
    for (const auto& [key, cell] : genotype.cells) {
      for (const auto& obs : cell.values) {
        out += fmt::format("{}\t{}\t{}\t{}\t{}\n", user, key.first,
                           metric_name(key.second), obs.hashtag,
                           format_real(obs.value));
      }
    }
  }
  return out;
}

std::string genome_summary_tsv(const Genome& genome, const Provenance& p) {
  std::string out = provenance_header(p);
  out += "user\ttopic\tmetric\tmean\tcount\n";
  for (const auto& [user, genotype] : genome.genotypes) {
    for (const auto& [key, cell] : genotype.cells) {
      if (cell.count == 0) continue;
      out += fmt::format("{}\t{}\t{}\t{}\t{}\n", user, key.first,
                         metric_name(key.second), format_real(cell.mean),
                         cell.count);
    }
  }
  return out;
}

std::string backbone_edges_tsv(std::span<const InfluenceBackbone> backbones,
                               const Provenance& p) {
  std::string out = provenance_header(p);
  out += "topic\tfollowee\tfollower\tweight\n";
  for (const auto& b : backbones) {
    std::vector<std::tuple<std::string_view, std::string_view, double>> rows;
    for (DirectedGraph::NodeId u = 0; u < b.graph.node_count(); ++u) {
      for (const auto& arc : b.graph.out(u)) {
        rows.emplace_back(b.graph.name(u), b.graph.name(arc.target),
                          arc.weight);
      }
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& [from, to, w] : rows) {
      out += fmt::format("{}\t{}\t{}\t{}\n", b.topic, from, to, format_real(w));
    }
  }
  return out;
}

namespace {

nlohmann::ordered_json provenance_json(const Provenance& p) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [key, value] : p) j[key] = value;
  return j;
}

// JSON has no NaN; undefined correlations are written as null.
nlohmann::ordered_json real_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

std::string backbone_report_json(const BackboneReport& r, const Provenance& p) {
  nlohmann::ordered_json j;
  j["topic"] = r.topic;
  j["nodes"] = r.nodes;
  j["influence_edges"] = r.influence_edges;
  j["follower_edges"] = r.follower_edges;
  j["jaccard"] = real_or_null(r.jaccard);
  j["scc_fraction_influence"] = real_or_null(r.scc_fraction_influence);
  j["wcc_fraction_influence"] = real_or_null(r.wcc_fraction_influence);
  j["scc_fraction_follower"] = real_or_null(r.scc_fraction_follower);
  j["wcc_fraction_follower"] = real_or_null(r.wcc_fraction_follower);
  j["kendall_followers"] = real_or_null(r.kendall_followers);
  j["kendall_followees"] = real_or_null(r.kendall_followees);
  j["kendall_pagerank"] = real_or_null(r.kendall_pagerank);
  j["provenance"] = provenance_json(p);
  return j.dump(1) + "\n";
}

std::string overlap_tsv(std::span<const InfluenceBackbone> backbones,
                        const std::vector<std::vector<double>>& overlap,
                        const Provenance& p) {
  std::string out = provenance_header(p);
  out += "topic";
  for (const auto& b : backbones) out += "\t" + b.topic;
  out += "\n";
  for (std::size_t i = 0; i < backbones.size(); ++i) {
    out += backbones[i].topic;
    for (double v : overlap[i]) out += "\t" + format_real(v);
    out += "\n";
  }
  return out;
}

std::string error_table_tsv(std::span<const LeaveOneOutResult> results,
                            const Provenance& p) {
  std::string out = provenance_header(p);
  if (results.empty()) return out;
  out += "metric\tsplit";
  for (const auto& t : results.front().test.topics) out += "\t" + t;
  out += "\tE[x]\n";
  for (const auto& r : results) {
    const std::pair<std::string_view, const ErrorTable*> splits[] = {
        {"train", &r.train}, {"test", &r.test}, {"random", &r.random_baseline}};
    for (const auto& [name, table] : splits) {
      if (table->topics.empty()) continue;
      out += fmt::format("{}\t{}", metric_name(r.metric), name);
      for (double e : table->error) out += "\t" + format_real(e);
      out += "\t" + format_real(table->expected_error) + "\n";
    }
  }
  return out;
}

std::string accuracy_curve_tsv(std::span<const AccuracyCurve> curves,
                               const Provenance& p) {
  std::string out = provenance_header(p);
  out += "metric\ttopic\tsize\trepetition\taccuracy\n";
  for (const auto& c : curves) {
    for (const auto& s : c.samples) {
      out += fmt::format("{}\t*\t{}\t{}\t{}\n", metric_name(c.metric), s.size,
                         s.repetition, format_real(s.accuracy));
      for (std::size_t t = 0; t < c.topics.size(); ++t) {
        out += fmt::format("{}\t{}\t{}\t{}\t{}\n", metric_name(c.metric),
                           c.topics[t], s.size, s.repetition,
                           format_real(s.topic_accuracy[t]));
      }
    }
  }
  return out;
}

std::string evaluation_tsv(std::span<const PredictorRow> rows,
                           const Provenance& p) {
  std::string out = provenance_header(p);
  out += "direction\ttopic\tpredictor\tmean_auc\tinstances\n";
  for (const auto& row : rows) {
    for (const auto& t : row.evaluation.topics) {
      out += fmt::format("{}\t{}\t{}\t{}\t{}\n", direction_name(row.direction),
                         t.topic, predictor_name(row.predictor),
                         format_real(t.mean_auc), t.instances);
    }
    out += fmt::format("{}\t*\t{}\t{}\t{}\n", direction_name(row.direction),
                       predictor_name(row.predictor),
                       format_real(row.evaluation.mean_auc),
                       row.evaluation.instances);
  }
  return out;
}

std::string trace_tsv(std::span<const MinimizationTrace> traces,
                      const Provenance& p) {
  std::string out = provenance_header(p);
  out += "heuristic\tstep\tnode\trelative_latency\n";
  for (const auto& t : traces) {
    out += fmt::format("{}\t0\t-\t1\n", heuristic_name(t.heuristic));
    for (std::size_t i = 0; i < t.selected.size(); ++i) {
      out += fmt::format("{}\t{}\t{}\t{}\n", heuristic_name(t.heuristic), i + 1,
                         t.selected_names[i], format_real(t.relative_latency[i]));
    }
  }
  return out;
}

}  // namespace smg
