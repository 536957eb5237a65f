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

#include "smg/cli.h"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "smg/backbone.h"
#include "smg/classify.h"
#include "smg/digest.h"
#include "smg/errors.h"
#include "smg/export.h"
#include "smg/genotype.h"
#include "smg/ingest.h"
#include "smg/latmin.h"
#include "smg/predict.h"
#include "smg/syngen.h"

namespace smg::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kCurveRepetitions = 10;

struct RunConfig {
  std::string command;
  std::string manifest;
  std::string out;
  std::string topic;
  std::string metric;
  std::optional<std::uint64_t> seed;
  int k = 5;
  std::vector<std::size_t> ensemble_sizes;
  LatencyMode mode = LatencyMode::kStrict;
  std::size_t workers = 1;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path.string());
  out << content;
  if (!out) throw UsageError("failed writing " + path.string());
}

fs::path output_dir(const RunConfig& c) {
  if (c.out.empty()) throw UsageError("--out is required");
  std::error_code ec;
  fs::create_directories(c.out, ec);
  if (ec || !fs::is_directory(c.out)) {
    throw UsageError("cannot create output directory " + c.out);
  }
  return fs::path(c.out);
}

Dataset load(const RunConfig& c) {
  if (c.manifest.empty()) throw UsageError("--manifest is required");
  if (!fs::is_regular_file(c.manifest)) {
    throw UsageError("manifest not found: " + c.manifest);
  }
  return load_dataset(load_manifest(c.manifest));
}

Provenance provenance(const RunConfig& c, const Dataset* data) {
  Provenance p;
  p.emplace_back("command", c.command);
  if (data != nullptr) {
    p.emplace_back("edges_sha256", data->edges_digest());
    p.emplace_back("events_sha256", data->events_digest());
    p.emplace_back("topics_sha256", data->topics_digest());
  }
  p.emplace_back("seed", c.seed ? std::to_string(*c.seed) : "none");
  if (!c.topic.empty()) p.emplace_back("topic", c.topic);
  if (!c.metric.empty()) p.emplace_back("metric", c.metric);
  return p;
}

ordered_json provenance_object(const Provenance& p) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : p) j[k] = v;
  return j;
}

std::vector<std::string> selected_topics(const RunConfig& c,
                                         const TopicMap& topics) {
  if (c.topic.empty()) return topics.topics();
  if (!topics.contains_topic(c.topic)) {
    std::string known;
    for (const auto& t : topics.topics()) known += (known.empty() ? "" : ", ") + t;
    throw UsageError(fmt::format("unknown topic '{}' (topics: {})", c.topic,
                                 known));
  }
  return {c.topic};
}

std::vector<MetricKind> selected_metrics(const RunConfig& c) {
  if (c.metric.empty()) {
    return std::vector<MetricKind>(kAllMetrics.begin(), kAllMetrics.end());
  }
  auto kind = parse_metric(c.metric);
  if (!kind) {
    throw UsageError(fmt::format("unknown metric '{}' (valid: {})", c.metric,
                                 metric_name_list()));
  }
  return {*kind};
}

std::string file_safe(std::string_view name) {
  std::string out;
  for (char ch : name) {
    const bool ok = std::isalnum(static_cast<unsigned char>(ch)) ||
                    ch == '-' || ch == '_' || ch == '.';
    out += ok ? ch : '_';
  }
  return out;
}

void cmd_ingest_check(const RunConfig& c, std::ostream& out) {
  const Dataset data = load(c);
  const fs::path dir = output_dir(c);
  std::size_t untopiced = 0;
  const auto hashtags = data.index.hashtags();
  for (const auto& h : hashtags) untopiced += data.topics.topic_of(h) ? 0 : 1;
  ordered_json j;
  j["nodes"] = data.net.node_count();
  j["edges"] = data.net.edge_count();
  j["events"] = data.events.size();
  j["users"] = data.events.users().size();
  j["hashtags"] = hashtags.size();
  j["hashtags_without_topic"] = untopiced;
  j["topics"] = data.topics.topics();
  j["skipped_lines"] = data.events.skipped_lines();
  j["adoption_pairs"] = data.index.pair_count();
  j["exposures"] = data.index.exposure_count();
  j["provenance"] = provenance_object(provenance(c, &data));
  write_file(dir / "ingest.json", j.dump(1) + "\n");
  out << fmt::format("{} nodes, {} edges, {} events, {} hashtags, {} topics\n",
                     data.net.node_count(), data.net.edge_count(),
                     data.events.size(), hashtags.size(),
                     data.topics.topics().size());
}

void cmd_genome(const RunConfig& c, std::ostream& out) {
  const Dataset data = load(c);
  const auto topics = selected_topics(c, data.topics);
  const auto metrics = selected_metrics(c);
  const fs::path dir = output_dir(c);
  Genome genome = build_genome(data, c.workers);
  for (auto& [user, genotype] : genome.genotypes) {
    std::erase_if(genotype.cells, [&](const auto& entry) {
      const auto& [topic, kind] = entry.first;
      return std::find(topics.begin(), topics.end(), topic) == topics.end() ||
             std::find(metrics.begin(), metrics.end(), kind) == metrics.end();
    });
  }
  const Provenance p = provenance(c, &data);
  write_file(dir / "genome_values.tsv", genome_values_tsv(genome, p));
  write_file(dir / "genome_summary.tsv", genome_summary_tsv(genome, p));
  out << fmt::format("genome: {} users\n", genome.genotypes.size());
}

void cmd_backbone(const RunConfig& c, std::ostream& out) {
  const Dataset data = load(c);
  const auto topics = selected_topics(c, data.topics);
  const fs::path dir = output_dir(c);
  const Provenance p = provenance(c, &data);
  std::vector<InfluenceBackbone> backbones;
  for (const auto& topic : topics) {
    backbones.push_back(extract_backbone(topic, data.index, data.net, data.topics));
  }
  write_file(dir / "backbone_edges.tsv", backbone_edges_tsv(backbones, p));
  for (const auto& b : backbones) {
    std::string json;
    if (b.graph.empty()) {
      ordered_json j;
      j["topic"] = b.topic;
      j["nodes"] = 0;
      j["provenance"] = provenance_object(p);
      json = j.dump(1) + "\n";
    } else {
      json = backbone_report_json(compare_with_follower(b, data.net), p);
    }
    write_file(dir / ("backbone_report_" + file_safe(b.topic) + ".json"), json);
  }
  write_file(dir / "backbone_overlap.tsv",
             overlap_tsv(backbones, cross_topic_overlap(backbones), p));
  out << fmt::format("backbone: {} topics\n", backbones.size());
}

void cmd_classify(const RunConfig& c, std::ostream& out) {
  const auto metrics = selected_metrics(c);
  if (!c.ensemble_sizes.empty() && !c.seed) {
    throw UsageError("--ensemble-sizes samples users and needs --seed");
  }
  for (std::size_t s : c.ensemble_sizes) {
    if (s == 0) throw UsageError("ensemble sizes must be positive");
  }
  const Dataset data = load(c);
  const fs::path dir = output_dir(c);
  const Provenance p = provenance(c, &data);
  const Genome genome = build_genome(data, c.workers);
  std::vector<LeaveOneOutResult> results;
  std::vector<AccuracyCurve> curves;
  ordered_json fits = ordered_json::object();
  for (MetricKind metric : metrics) {
    const MetricData md = collect_metric_data(genome, data.topics, metric);
    LeaveOneOutOptions options;
    options.workers = c.workers;
    results.push_back(leave_one_out(md, options));
    out << fmt::format("{}: E[x] = {}\n", metric_name(metric),
                       format_real(results.back().test.expected_error));
    if (c.ensemble_sizes.empty()) continue;
    curves.push_back(accuracy_curve(md, c.ensemble_sizes, kCurveRepetitions,
                                    *c.seed, c.workers));
    std::vector<std::pair<double, double>> points;
    for (const auto& [size, acc] : curves.back().mean_accuracy) {
      points.emplace_back(static_cast<double>(size), acc);
    }
    const LogisticFit fit = fit_logistic(points);
    fits[std::string(metric_name(metric))] = {
        {"height", fit.height},
        {"slope", fit.slope},
        {"midpoint", fit.midpoint},
        {"rms_residual", fit.rms_residual},
        {"available_users", curves.back().available_users}};
  }
  write_file(dir / "classify_errors.tsv", error_table_tsv(results, p));
  if (!curves.empty()) {
    write_file(dir / "classify_curves.tsv", accuracy_curve_tsv(curves, p));
    ordered_json j;
    j["repetitions"] = kCurveRepetitions;
    j["fits"] = fits;
    j["provenance"] = provenance_object(p);
    write_file(dir / "classify_fit.json", j.dump(1) + "\n");
  }
}

void cmd_predict(const RunConfig& c, std::ostream& out) {
  const Dataset data = load(c);
  const auto topics = selected_topics(c, data.topics);
  const fs::path dir = output_dir(c);
  const Provenance p = provenance(c, &data);
  const PredictionContext context(data);
  std::vector<PredictorRow> rows;
  for (Direction d : {Direction::kInfluencer, Direction::kAdopter}) {
    std::vector<PredictionInstance> instances = build_instances(d, context);
    std::erase_if(instances, [&](const PredictionInstance& inst) {
      return std::find(topics.begin(), topics.end(), inst.topic) == topics.end();
    });
    for (PredictorKind kind : kAllPredictors) {
      rows.push_back(
          PredictorRow{d, kind, evaluate(kind, instances, context, c.workers)});
      out << fmt::format("{} {}: mean AUC {} over {} instances\n",
                         direction_name(d), predictor_name(kind),
                         format_real(rows.back().evaluation.mean_auc),
                         rows.back().evaluation.instances);
    }
  }
  write_file(dir / "predict_auc.tsv", evaluation_tsv(rows, p));
}

void cmd_latmin(const RunConfig& c, std::ostream& out) {
  if (c.topic.empty()) throw UsageError("latmin needs --topic");
  if (c.k <= 0) throw UsageError("--k must be positive");
  const Dataset data = load(c);
  selected_topics(c, data.topics);
  const fs::path dir = output_dir(c);
  Provenance p = provenance(c, &data);
  p.emplace_back("mode", c.mode == LatencyMode::kStrict ? "strict" : "permissive");
  p.emplace_back("k", std::to_string(c.k));
  const Genome genome = build_genome(data, c.workers);
  const LatencyGraph g = topic_latency_graph(data.net, genome, c.topic, c.mode);
  const auto k = static_cast<std::size_t>(c.k);
  if (k > g.node_count()) {
    throw DataError(fmt::format("k = {} exceeds the {} nodes of the latency graph",
                                k, g.node_count()));
  }
  const AverageLatency base = average_network_latency(g, c.mode);
  MinimizeOptions options{c.mode, c.workers};
  std::vector<MinimizationTrace> traces;
  for (Heuristic h : {Heuristic::kMaxLat, Heuristic::kMaxBC, Heuristic::kGreedy}) {
    traces.push_back(minimize(g, k, h, options));
  }
  write_file(dir / "latmin_trace.tsv", trace_tsv(traces, p));
  ordered_json j;
  j["topic"] = c.topic;
  j["nodes"] = g.node_count();
  j["edges"] = g.graph().edge_count();
  j["average_latency"] = base.value;
  j["reachable_pairs"] = base.reachable_pairs;
  j["ordered_pairs"] = base.ordered_pairs;
  ordered_json finals = ordered_json::object();
  for (const auto& t : traces) {
    finals[std::string(heuristic_name(t.heuristic))] = t.relative_latency.back();
  }
  j["relative_latency_at_k"] = finals;
  j["provenance"] = provenance_object(p);
  write_file(dir / "latmin_summary.json", j.dump(1) + "\n");
  out << fmt::format("latmin: {} nodes, average latency {}\n", g.node_count(),
                     format_real(base.value));
}

void cmd_syngen(const RunConfig& c, std::ostream& out) {
  if (!c.seed) throw UsageError("syngen needs --seed");
  GenParams params;
  if (!c.manifest.empty()) {
    std::ifstream in(c.manifest);
    if (!in) throw UsageError("cannot open generator config " + c.manifest);
    try {
      params = gen_params_from(read_key_values(in));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  params.seed = *c.seed;
  try {
    validate(params);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const fs::path dir = output_dir(c);
  const SyntheticData data = generate(params);
  write_synthetic(data, dir);
  out << fmt::format("syngen: {} nodes, {} edges, {} events\n",
                     data.net.node_count(), data.net.edge_count(),
                     data.events.size());
}

// Result tables whose rows are copied into the report.
bool embeds_rows(const std::string& name) {
  static const char* const kTables[] = {
      "classify_errors.tsv", "classify_curves.tsv", "predict_auc.tsv",
      "latmin_trace.tsv", "backbone_overlap.tsv"};
  return std::find(std::begin(kTables), std::end(kTables), name) !=
         std::end(kTables);
}

ordered_json summarize_tsv(const std::string& text, bool rows) {
  ordered_json j;
  ordered_json prov = ordered_json::object();
  ordered_json table = ordered_json::array();
  std::vector<std::string> columns;
  std::size_t lines = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0 && line.find('\t') == std::string::npos) {
      const auto colon = line.find(": ");
      if (colon != std::string::npos) {
        prov[line.substr(2, colon - 2)] = line.substr(colon + 2);
      }
      continue;
    }
    ++lines;
    if (!rows) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (columns.empty()) {
      columns = fields;
    } else {
      table.push_back(fields);
    }
  }
  j["provenance"] = prov;
  j["lines"] = lines;
  if (rows) {
    j["columns"] = columns;
    j["rows"] = table;
  }
  return j;
}

void cmd_report(const RunConfig& c, std::ostream& out) {
  if (c.out.empty()) throw UsageError("--out is required");
  if (!fs::is_directory(c.out)) {
    throw UsageError("output directory not found: " + c.out);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(c.out)) {
    if (entry.is_regular_file() && entry.path().filename() != "report.json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  ordered_json j;
  ordered_json outputs = ordered_json::object();
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    const std::string name = path.filename().string();
    ordered_json entry;
    entry["sha256"] = sha256_hex(text);
    if (path.extension() == ".json") {
      try {
        entry["content"] = ordered_json::parse(text);
      } catch (const ordered_json::parse_error& e) {
        throw DataError(fmt::format("{}: {}", name, e.what()));
      }
    } else if (path.extension() == ".tsv") {
      entry["table"] = summarize_tsv(text, embeds_rows(name));
    }
    outputs[name] = entry;
  }
  j["outputs"] = outputs;
  j["provenance"] = provenance_object(provenance(c, nullptr));
  write_file(fs::path(c.out) / "report.json", j.dump(1) + "\n");
  out << fmt::format("report: {} outputs\n", files.size());
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  RunConfig c;
  CLI::App app{"Social media genotype analysis"};
  app.name("smg");
  app.require_subcommand(1);

  bool strict = false, permissive = false;
  auto add_manifest = [&](CLI::App* sub) {
    sub->add_option("--manifest", c.manifest, "Dataset manifest (key=value)");
  };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", c.out, "Output directory")->required();
  };
  auto add_topic = [&](CLI::App* sub) {
    sub->add_option("--topic", c.topic, "Restrict to one topic");
  };
  auto add_metric = [&](CLI::App* sub) {
    sub->add_option("--metric", c.metric,
                    "Restrict to one metric (" + metric_name_list() + ")");
  };
  auto add_workers = [&](CLI::App* sub) {
    sub->add_option("--workers", c.workers, "Worker threads")
        ->check(CLI::PositiveNumber);
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "Seed for all sampling");
  };

  auto* ingest = app.add_subcommand("ingest-check", "Load and summarize a dataset");
  add_manifest(ingest);
  add_out(ingest);

  auto* genome = app.add_subcommand("genome", "Per-user topic genotypes");
  add_manifest(genome);
  add_out(genome);
  add_topic(genome);
  add_metric(genome);
  add_workers(genome);

  auto* backbone = app.add_subcommand("backbone", "Topic influence backbones");
  add_manifest(backbone);
  add_out(backbone);
  add_topic(backbone);

  auto* classify = app.add_subcommand("classify", "Leave-one-hashtag-out topic classification");
  add_manifest(classify);
  add_out(classify);
  add_metric(classify);
  add_seed(classify);
  add_workers(classify);
  classify->add_option("--ensemble-sizes", c.ensemble_sizes,
                       "Comma-separated classifier counts for accuracy curves")
      ->delimiter(',');

  auto* predict = app.add_subcommand("predict", "Influencer and adopter prediction AUC");
  add_manifest(predict);
  add_out(predict);
  add_topic(predict);
  add_workers(predict);

  auto* latmin = app.add_subcommand("latmin", "Network latency minimization");
  add_manifest(latmin);
  add_out(latmin);
  add_topic(latmin);
  add_workers(latmin);
  latmin->add_option("--k", c.k, "Number of nodes to target");
  auto* strict_flag = latmin->add_flag("--strict", strict,
                                       "Require strong connectivity (default)");
  auto* permissive_flag = latmin->add_flag(
      "--permissive", permissive, "Average over reachable pairs only");
  strict_flag->excludes(permissive_flag);

  auto* syngen = app.add_subcommand("syngen", "Generate a synthetic dataset");
  syngen->add_option("--manifest", c.manifest, "Generator config (key=value)");
  add_out(syngen);
  add_seed(syngen);

  auto* report = app.add_subcommand("report", "Aggregate outputs into report.json");
  add_out(report);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  c.mode = permissive ? LatencyMode::kPermissive : LatencyMode::kStrict;
  c.command = app.get_subcommands().front()->get_name();

  try {
    if (c.command == "ingest-check") {
      cmd_ingest_check(c, out);
    } else if (c.command == "genome") {
      cmd_genome(c, out);
    } else if (c.command == "backbone") {
      cmd_backbone(c, out);
    } else if (c.command == "classify") {
      cmd_classify(c, out);
    } else if (c.command == "predict") {
      cmd_predict(c, out);
    } else if (c.command == "latmin") {
      cmd_latmin(c, out);
    } else if (c.command == "syngen") {
      cmd_syngen(c, out);
    } else {
      cmd_report(c, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitData;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace smg::cli
