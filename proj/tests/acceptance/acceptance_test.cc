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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails.
//
// Usage: acceptance_test <path to smg binary>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>
#include <fmt/ranges.h>

#include "oracles/brute_force.h"
#include "smg/classify.h"
#include "smg/digest.h"
#include "smg/genotype.h"
#include "smg/graph.h"
#include "smg/ingest.h"
#include "smg/latmin.h"
#include "smg/predict.h"
#include "smg/syngen.h"

namespace smg {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> problems;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (problems.size() < 5) problems.push_back(what);
    }
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n == 0) return std::nan("");
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Dataset dataset_of(const oracle::RawLog& raw) {
  std::vector<std::pair<std::string, std::string>> topics(raw.topic_of.begin(),
                                                          raw.topic_of.end());
  std::vector<std::string> users;
  for (const auto& e : raw.events) users.push_back(e.user);
  return make_dataset(FollowerNetwork::from_edges(raw.edges, users), EventLog(raw.events),
                      TopicMap(topics));
}

DirectedGraph graph_of(const oracle::Matrix& adj) {
  DirectedGraph g;
  for (std::size_t i = 0; i < adj.size(); ++i) g.add_node("n" + std::to_string(i));
  for (std::size_t i = 0; i < adj.size(); ++i) {
    for (std::size_t j = 0; j < adj.size(); ++j) {
      if (adj[i][j]) g.add_edge(static_cast<DirectedGraph::NodeId>(i),
                                static_cast<DirectedGraph::NodeId>(j));
    }
  }
  return g;
}

// 1. Metric oracle equivalence.
Outcome metric_oracle() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 rng(1001);
  std::size_t compared = 0;
  for (int round = 0; round < 100; ++round) {
    const oracle::RawLog raw = oracle::random_log(rng, 50, 20);
    const Dataset d = dataset_of(raw);
    for (const auto& user : d.events.users()) {
      for (const auto& [tag, adoption] : d.index.adoptions_of(user)) {
        const bool has_topic = d.topics.topic_of(tag).has_value();
        const auto mean = oracle::mean_lat(tag, raw);
        for (MetricKind k : kAllMetrics) {
          if ((k == MetricKind::kLat || k == MetricKind::kLogLat) && !has_topic) continue;
          if (k == MetricKind::kLogLat && !(mean && *mean > 0)) continue;
          std::optional<double> hint;
          if (k == MetricKind::kLogLat) hint = mean;
          const auto got =
              compute_metric(k, user, tag, d.events, d.index, d.net, d.topics, hint);
          const auto want = oracle::metric(k, user, tag, raw, hint);
          const std::string where =
              fmt::format("{} {} {} round {}", metric_name(k), user, tag, round);
          o.check(got.has_value() == want.has_value(), "definedness " + where);
          if (!got || !want) continue;
          ++compared;
          const bool exact = k == MetricKind::kTime || k == MetricKind::kNUses ||
                             k == MetricKind::kNPar;
          if (exact) {
            o.check(*got == *want, "value " + where);
          } else {
            const double scale = std::max(std::abs(*want), 1e-300);
            o.check(std::abs(*got - *want) <= 1e-12 * scale, "value " + where);
          }
        }
      }
    }
  }
  const double secs = seconds_since(start);
  o.check(secs < 30.0, fmt::format("runtime {:.1f}s", secs));
  o.check(compared > 1000, fmt::format("only {} values compared", compared));
  o.detail = fmt::format("{} values on 100 logs, {:.1f}s", compared, secs);
  return o;
}

// 2. Graph kernel equivalence.
Outcome graph_oracle() {
  Outcome o;
  std::mt19937_64 rng(2002);
  std::uniform_real_distribution<double> density(0.05, 0.6);
  double worst_pr = 0.0, worst_bc = 0.0;
  for (int round = 0; round < 200; ++round) {
    const int n = 1 + round % 8;
    const auto adj = oracle::random_digraph(rng, n, density(rng));
    const DirectedGraph g = graph_of(adj);
    auto as_int = [](const Partition& p) {
      std::vector<std::vector<int>> out;
      for (const auto& part : p) out.emplace_back(part.begin(), part.end());
      return out;
    };
    o.check(as_int(strongly_connected_components(g)) == oracle::scc(adj),
            fmt::format("scc round {}", round));
    o.check(as_int(weakly_connected_components(g)) == oracle::wcc(adj),
            fmt::format("wcc round {}", round));
    const auto bc = betweenness_centrality(g);
    const auto bc_want = oracle::betweenness(adj);
    for (int i = 0; i < n; ++i) {
      // Both sides sum the same rationals in a different order; allow for
      // the final-bit rounding that leaves.
      worst_bc = std::max(worst_bc, std::abs(bc[i] - bc_want[i]));
      o.check(std::abs(bc[i] - bc_want[i]) <= 1e-12 * std::max(1.0, bc_want[i]),
              fmt::format("betweenness round {} node {}: {} vs {}", round, i, bc[i],
                          bc_want[i]));
    }
    const auto pr = pagerank(g);
    const auto pr_want = oracle::pagerank(adj);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      worst_pr = std::max(worst_pr, std::abs(pr[i] - pr_want[i]));
      sum += pr[i];
    }
    o.check(std::abs(sum - 1.0) <= 1e-9, fmt::format("pagerank sum {} round {}", sum, round));
  }
  o.check(worst_pr <= 1e-8, fmt::format("pagerank deviation {}", worst_pr));
  std::uniform_int_distribution<int> level(0, 5);
  for (int round = 0; round < 200; ++round) {
    const int n = 2 + round % 12;
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = level(rng);
      b[i] = level(rng);
    }
    const double got = kendall_tau(a, b);
    const double want = oracle::kendall_tau_b(a, b);
    o.check((std::isnan(got) && std::isnan(want)) || got == want,
            fmt::format("kendall round {}: {} vs {}", round, got, want));
  }
  o.detail = fmt::format(
      "200 graphs n<=8, SCC/WCC identical, max betweenness deviation {:.1e}, max pagerank "
      "deviation {:.1e}, kendall identical",
      worst_bc, worst_pr);
  return o;
}

GenParams lat_params(std::uint64_t seed, bool separated) {
  GenParams p;
  p.nodes = 300;
  p.topics = 5;
  p.hashtags_per_topic = 20;
  p.clock = DelayClock::kTimeline;
  p.latency_levels = separated ? std::vector<double>{1, 2, 4, 8, 16} : std::vector<double>{4};
  p.latency_jitter = 0.1;
  // Without separation every topic gets the same plan per user, so nothing
  // but noise tells topics apart.
  if (!separated) p.activity_spread = 0.0;
  p.seed = seed;
  return p;
}

// Per user: the smallest gap between adjacent topic means of LAT values, in
// pooled within-topic standard deviations. Median over users.
double lat_separation(const MetricData& data) {
  std::vector<double> per_user;
  for (const auto& values : data.values) {
    std::vector<double> sum(data.topics.size(), 0.0), sq(data.topics.size(), 0.0);
    std::vector<std::size_t> n(data.topics.size(), 0);
    for (const auto& tv : values) {
      sum[tv.topic] += tv.value;
      ++n[tv.topic];
    }
    std::vector<double> means;
    std::size_t total = 0, groups = 0;
    for (std::size_t t = 0; t < n.size(); ++t) {
      if (n[t] == 0) continue;
      const double m = sum[t] / static_cast<double>(n[t]);
      means.push_back(m);
      total += n[t];
      ++groups;
      for (const auto& tv : values) {
        if (tv.topic == t) sq[t] += (tv.value - m) * (tv.value - m);
      }
    }
    if (groups < 2 || total <= groups) continue;
    double within = 0.0;
    for (double s : sq) within += s;
    const double sd = std::sqrt(within / static_cast<double>(total - groups));
    std::sort(means.begin(), means.end());
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < means.size(); ++i) gap = std::min(gap, means[i] - means[i - 1]);
    per_user.push_back(sd > 0 ? gap / sd : std::numeric_limits<double>::infinity());
  }
  return median(per_user);
}

MetricData lat_data(const GenParams& p) {
  const SyntheticData data = generate(p);
  const Dataset d = data.dataset();
  const Genome genome = build_genome(d);
  return collect_metric_data(genome, d.topics, MetricKind::kLat);
}

// 3. Classification recovery.
Outcome classification_recovery() {
  Outcome o;
  const auto start = Clock::now();
  std::vector<std::string> sep_parts, zero_parts;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const MetricData sep = lat_data(lat_params(seed, true));
    const double gap = lat_separation(sep);
    const auto r = leave_one_out(sep);
    o.check(gap >= 3.0, fmt::format("seed {} separation {:.2f} < 3", seed, gap));
    o.check(r.test.expected_error <= 0.15,
            fmt::format("seed {} separated E[x] {:.3f} > 0.15", seed, r.test.expected_error));
    sep_parts.push_back(fmt::format("{:.3f}@{:.1f}sd", r.test.expected_error, gap));

    const MetricData flat = lat_data(lat_params(seed, false));
    const auto z = leave_one_out(flat);
    const double flat_gap = lat_separation(flat);
    const double diff = z.test.expected_error - z.random_baseline.expected_error;
    o.check(std::abs(diff) <= 0.1,
            fmt::format("seed {} zero-separation E[x] {:.3f} vs random {:.3f}", seed,
                        z.test.expected_error, z.random_baseline.expected_error));
    zero_parts.push_back(fmt::format("{:.3f}/{:.3f}@{:.1f}sd", z.test.expected_error,
                                     z.random_baseline.expected_error, flat_gap));
  }
  const double secs = seconds_since(start);
  o.check(secs < 120.0, fmt::format("runtime {:.1f}s", secs));
  o.detail = fmt::format("separated E[x] [{}]; zero-separation E[x]/random [{}]; {:.1f}s",
                         fmt::join(sep_parts, " "), fmt::join(zero_parts, " "), secs);
  return o;
}

// 4. Ensemble effect.
Outcome ensemble_effect() {
  Outcome o;
  int gains = 0;
  std::vector<std::string> parts;
  const std::vector<std::size_t> sizes{1, 2, 4, 8, 16, 32, 64};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const MetricData sep = lat_data(lat_params(seed, true));
    const AccuracyCurve curve = accuracy_curve(sep, sizes, 10, seed);
    const double first = curve.mean_accuracy.front().second;
    const double last = curve.mean_accuracy.back().second;
    if (last - first >= 0.1) ++gains;
    std::vector<std::pair<double, double>> points;
    for (const auto& [size, acc] : curve.mean_accuracy) {
      points.emplace_back(static_cast<double>(size), acc);
    }
    const LogisticFit fit = fit_logistic(points);
    o.check(fit.slope > 0.0, fmt::format("seed {} slope {:.3f}", seed, fit.slope));
    parts.push_back(fmt::format("{:.2f}->{:.2f} k={:.2f}", first, last, fit.slope));
  }
  o.check(gains >= 4, fmt::format("size 64 beat size 1 by 0.1 in only {} seeds", gains));
  o.detail = fmt::format("accuracy size1->size64 [{}]", fmt::join(parts, ", "));
  return o;
}

// 5. Predictor ordering.
Outcome predictor_ordering() {
  Outcome o;
  GenParams p;
  p.seed = 11;
  const SyntheticData data = generate(p);
  const Dataset d = data.dataset();
  const PredictionContext ctx(d);
  const auto instances = build_instances(Direction::kInfluencer, ctx);
  std::map<PredictorKind, double> auc;
  for (PredictorKind k : kAllPredictors) auc[k] = evaluate(k, instances, ctx).mean_auc;
  std::mt19937_64 rng(5005);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<double>> draws;
  for (const auto& inst : instances) {
    std::vector<double> s(inst.candidates.size());
    for (double& v : s) v = unit(rng);
    draws.push_back(std::move(s));
  }
  std::map<const PredictionInstance*, std::size_t> slot;
  for (std::size_t i = 0; i < instances.size(); ++i) slot[&instances[i]] = i;
  const Evaluation random = evaluate(
      [&](const PredictionInstance& inst) { return draws[slot.at(&inst)]; }, instances);

  const std::size_t count = evaluate(PredictorKind::kFollowees, instances, ctx).instances;
  o.check(count >= 200, fmt::format("only {} instances", count));
  for (PredictorKind strong : {PredictorKind::kTopicAct, PredictorKind::kRWAct}) {
    for (PredictorKind weak : {PredictorKind::kFollowees, PredictorKind::kFollowers}) {
      o.check(auc[strong] >= auc[weak] + 0.10,
              fmt::format("{} {:.3f} vs {} {:.3f}", predictor_name(strong), auc[strong],
                          predictor_name(weak), auc[weak]));
    }
  }
  o.check(std::abs(random.mean_auc - 0.5) <= 0.05,
          fmt::format("random scorer {:.3f}", random.mean_auc));
  std::vector<std::string> parts;
  for (PredictorKind k : kAllPredictors) {
    parts.push_back(fmt::format("{} {:.3f}", predictor_name(k), auc[k]));
  }
  o.detail = fmt::format("{} instances; {}; random {:.3f}", count, fmt::join(parts, ", "),
                         random.mean_auc);
  return o;
}

LatencyGraph latency_graph_of(const oracle::Matrix& adj, const std::vector<double>& lat) {
  return LatencyGraph(graph_of(adj), lat);
}

oracle::Matrix strong_matrix(std::mt19937_64& rng, int n, double density) {
  oracle::Matrix adj = oracle::random_digraph(rng, n, density);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (int i = 0; i < n; ++i) adj[order[i]][order[(i + 1) % n]] = 1;
  return adj;
}

// 6. Latency suite.
Outcome latency_suite(std::string& timing) {
  Outcome o;
  const auto start = Clock::now();
  const std::vector<Heuristic> heuristics{Heuristic::kMaxLat, Heuristic::kMaxBC,
                                          Heuristic::kGreedy};
  // (a) Quarter-unit latencies keep every path sum exact in binary.
  std::mt19937_64 rng(6006);
  std::uniform_int_distribution<int> quarter(0, 40);
  for (int round = 0; round < 200; ++round) {
    const int n = 2 + round % 7;
    const auto adj = oracle::random_digraph(rng, n, 0.3);
    std::vector<double> lat(n);
    for (double& v : lat) v = quarter(rng) / 4.0;
    const LatencyGraph g = latency_graph_of(adj, lat);
    const auto want = oracle::path_latency_fw(adj, lat);
    for (int s = 0; s < n; ++s) {
      for (int t = 0; t < n; ++t) {
        if (s == t) continue;
        const auto got = pair_latency(g, s, t);
        const bool same = want[s][t] >= oracle::kInf ? !got : (got && *got == want[s][t]);
        o.check(same, fmt::format("(a) round {} pair {}->{}", round, s, t));
      }
    }
  }
  // (b)
  std::uniform_real_distribution<double> unit(0.1, 10.0);
  int matched = 0;
  for (int round = 0; round < 100; ++round) {
    const int n = 4 + round % 7;
    const auto adj = strong_matrix(rng, n, 0.2);
    std::vector<double> lat(n);
    for (double& v : lat) v = unit(rng);
    const LatencyGraph g = latency_graph_of(adj, lat);
    const std::size_t target_k = 1 + static_cast<std::size_t>(round % 3);
    for (std::size_t k = 1; k <= 3; ++k) {
      const double best = exact_k_latmin(g, k).average_latency;
      for (Heuristic h : heuristics) {
        const auto trace = minimize(g, k, h);
        const double value = trace.relative_latency.back() * trace.original_latency;
        o.check(best <= value + 1e-9 * trace.original_latency,
                fmt::format("(b) round {} k {} {} {} < exact {}", round, k,
                            heuristic_name(h), value, best));
        if (h == Heuristic::kGreedy && k == target_k &&
            std::abs(value - best) <= 1e-9 * trace.original_latency) {
          ++matched;
        }
      }
    }
  }
  o.check(matched >= 80, fmt::format("(b) Greedy matched exact on {}/100", matched));
  // (c)
  std::vector<double> reductions;
  bool dominates = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    GenParams p;
    p.nodes = 500;
    p.model = GraphModel::kPreferentialAttachment;
    p.attachment_links = 1;
    auto graph_rng = make_rng(seed, 1);
    const FollowerNetwork net = generate_graph(p, graph_rng);
    DirectedGraph g;
    for (const auto& name : net.nodes()) g.add_node(name);
    for (auto [a, b] : net.edges()) g.add_edge(a, b);
    o.check(strongly_connected_components(g).size() == 1,
            fmt::format("(c) seed {} graph not strongly connected", seed));
    auto lat_rng = make_rng(seed, 100);
    std::vector<double> lat(g.node_count());
    for (double& v : lat) v = sample_pareto(1.5, 1.0, lat_rng);
    const LatencyGraph lg(std::move(g), std::move(lat));
    std::map<Heuristic, MinimizationTrace> traces;
    for (Heuristic h : heuristics) traces[h] = minimize(lg, 25, h);
    const auto& greedy = traces[Heuristic::kGreedy].relative_latency;
    reductions.push_back(1.0 - greedy[4]);
    for (std::size_t k = 0; k < 25; ++k) {
      for (Heuristic h : {Heuristic::kMaxLat, Heuristic::kMaxBC}) {
        if (greedy[k] > traces[h].relative_latency[k] + 1e-12) {
          dominates = false;
          o.check(false, fmt::format("(c) seed {} k {} Greedy {:.4f} > {} {:.4f}", seed, k + 1,
                                     greedy[k], heuristic_name(h),
                                     traces[h].relative_latency[k]));
        }
      }
    }
  }
  const double med = median(reductions);
  o.check(med >= 0.40, fmt::format("(c) median reduction at k=5 {:.3f}", med));
  const double secs = seconds_since(start);
  o.check(secs < 600.0, fmt::format("runtime {:.1f}s", secs));
  o.detail = fmt::format(
      "greedy=exact on {}/100; median reduction at k=5 {:.1f}%; Greedy dominates: {}; {:.1f}s",
      matched, 100 * med, dominates ? "yes" : "no", secs);
  timing = fmt::format("{:.1f}", secs);
  return o;
}

std::string file_digest(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  Digest d;
  d.update(ss.str());
  return d.hex();
}

std::map<std::string, std::string> dir_digests(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) {
      out[entry.path().filename().string()] = file_digest(entry.path());
    }
  }
  return out;
}

int shell(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 7. Determinism.
Outcome determinism(const std::string& binary) {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "smg_acceptance_cli";
  fs::remove_all(root);
  fs::create_directories(root);
  {
    std::ofstream cfg(root / "gen.txt");
    cfg << "nodes=150\ntopics=3\nhashtags_per_topic=8\n";
  }
  const std::string gen = (root / "gen.txt").string();
  for (const char* name : {"data1", "data2"}) {
    const int code = shell(fmt::format("'{}' syngen --manifest '{}' --seed 21 --out '{}'", binary,
                                       gen, (root / name).string()));
    o.check(code == 0, fmt::format("syngen exit {}", code));
  }
  o.check(dir_digests(root / "data1") == dir_digests(root / "data2"), "syngen outputs differ");
  const std::string manifest = (root / "data1" / "manifest.txt").string();

  const std::vector<std::string> commands{
      "ingest-check", "genome", "backbone", "classify --seed 3 --ensemble-sizes 1,4,16",
      "predict", "latmin --topic topic1 --k 3"};
  std::size_t files = 0;
  for (int workers : {1, 4}) {
    const fs::path out = root / fmt::format("out{}", workers);
    for (const auto& cmd : commands) {
      const bool takes_workers = cmd.rfind("ingest-check", 0) != 0 && cmd.rfind("backbone", 0) != 0;
      const std::string flag = takes_workers ? fmt::format(" --workers {}", workers) : "";
      const int code = shell(fmt::format("'{}' {} --manifest '{}' --out '{}'{}", binary, cmd,
                                         manifest, out.string(), flag));
      o.check(code == 0, fmt::format("{} exit {} (workers {})", cmd, code, workers));
    }
    const int code = shell(fmt::format("'{}' report --out '{}'", binary, out.string()));
    o.check(code == 0, fmt::format("report exit {}", code));
  }
  // A second single-worker run checks plain re-runs too.
  const fs::path again = root / "again";
  for (const auto& cmd : commands) {
    shell(fmt::format("'{}' {} --manifest '{}' --out '{}'", binary, cmd, manifest,
                      again.string()));
  }
  shell(fmt::format("'{}' report --out '{}'", binary, again.string()));
  const auto one = dir_digests(root / "out1");
  const auto four = dir_digests(root / "out4");
  const auto re = dir_digests(again);
  files = one.size();
  o.check(files >= 10, fmt::format("only {} output files", files));
  o.check(one == four, "outputs differ between 1 and 4 workers");
  o.check(one == re, "outputs differ between re-runs");
  for (const auto& [name, digest] : one) {
    auto it = four.find(name);
    if (it == four.end() || it->second != digest) o.check(false, "differs: " + name);
  }
  fs::remove_all(root);
  o.detail = fmt::format("{} output files identical across re-runs and worker counts", files);
  return o;
}

}  // namespace
}  // namespace smg

int main(int argc, char** argv) {
  if (argc < 2) {
    fmt::print(stderr, "usage: {} <smg binary>\n", argv[0]);
    return 2;
  }
  const std::string binary = argv[1];
  std::string latency_time;
  const std::vector<std::pair<int, std::function<smg::Outcome()>>> criteria{
      {1, smg::metric_oracle},
      {2, smg::graph_oracle},
      {3, smg::classification_recovery},
      {4, smg::ensemble_effect},
      {5, smg::predictor_ordering},
      {6, [&] { return smg::latency_suite(latency_time); }},
      {7, [&] { return smg::determinism(binary); }},
  };
  bool all = true;
  for (const auto& [id, fn] : criteria) {
    smg::Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.problems.push_back(std::string("exception: ") + e.what());
    }
    all = all && o.pass;
    fmt::print("criterion {}: {} - {}\n", id, o.pass ? "PASS" : "FAIL", o.detail);
    for (const auto& p : o.problems) fmt::print("    {}\n", p);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
