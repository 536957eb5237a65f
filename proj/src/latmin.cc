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

#include "smg/latmin.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

#include "smg/errors.h"
#include "smg/parallel.h"

namespace smg {

using NodeId = LatencyGraph::NodeId;

LatencyGraph::LatencyGraph(DirectedGraph graph, std::vector<double> latency)
    : graph_(std::move(graph)),
      latency_(std::move(latency)),
      targeted_(latency_.size(), false) {
  if (latency_.size() != graph_.node_count()) {
    throw std::invalid_argument("latency vector does not match node count");
  }
  for (double l : latency_) {
    if (!(l >= 0.0) || std::isinf(l)) {
      throw std::invalid_argument("latencies must be finite and non-negative");
    }
  }
}

void LatencyGraph::target(NodeId id) {
  latency_.at(id) = 0.0;
  targeted_[id] = true;
}

double path_latency(const LatencyGraph& g, std::span<const NodeId> path) {
  if (path.empty()) throw std::invalid_argument("empty path");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (path[i] >= g.node_count() || path[i + 1] >= g.node_count() ||
        !g.graph().has_edge(path[i], path[i + 1])) {
      throw std::invalid_argument(
          fmt::format("path is broken between positions {} and {}", i, i + 1));
    }
    total += g.latency(path[i]);
  }
  return total;
}

namespace {

std::vector<double> dijkstra(const LatencyGraph& g, NodeId source) {
  const DirectedGraph& graph = g.graph();
  std::vector<double> dist(graph.node_count(), kUnreachable);
  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    const double through = d + g.latency(u);
    for (const auto& arc : graph.out(u)) {
      if (through < dist[arc.target]) {
        dist[arc.target] = through;
        queue.emplace(through, arc.target);
      }
    }
  }
  return dist;
}

std::vector<NodeId> by_name(const DirectedGraph& g) {
  std::vector<NodeId> order(g.node_count());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](NodeId a, NodeId b) { return g.name(a) < g.name(b); });
  return order;
}

}  // namespace

std::optional<double> pair_latency(const LatencyGraph& g, NodeId s, NodeId t) {
  if (s >= g.node_count() || t >= g.node_count()) {
    throw std::out_of_range("pair_latency: node out of range");
  }
  if (s == t) throw std::invalid_argument("pair_latency: s == t");
  const double d = dijkstra(g, s)[t];
  if (d == kUnreachable) return std::nullopt;
  return d;
}

LatencyMatrix all_pair_latencies(const LatencyGraph& g) {
  LatencyMatrix d;
  d.reserve(g.node_count());
  for (NodeId s = 0; s < g.node_count(); ++s) d.push_back(dijkstra(g, s));
  return d;
}

AverageLatency average_from_matrix(const LatencyMatrix& d, LatencyMode mode) {
  AverageLatency out;
  const std::size_t n = d.size();
  out.ordered_pairs = n < 2 ? 0 : n * (n - 1);
  if (n < 2) throw DataError("average latency needs at least two nodes");
  double total = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      if (s == t || d[s][t] == kUnreachable) continue;
      total += d[s][t];
      ++out.reachable_pairs;
    }
  }
  if (mode == LatencyMode::kStrict && out.reachable_pairs != out.ordered_pairs) {
    throw DataError(fmt::format(
        "graph is not strongly connected ({} of {} ordered pairs reachable)",
        out.reachable_pairs, out.ordered_pairs));
  }
  out.value = out.reachable_pairs > 0
                  ? total / static_cast<double>(out.reachable_pairs)
                  : 0.0;
  return out;
}

AverageLatency average_network_latency(const LatencyGraph& g,
                                       LatencyMode mode) {
  return average_from_matrix(all_pair_latencies(g), mode);
}

std::string_view heuristic_name(Heuristic h) {
  switch (h) {
    case Heuristic::kMaxLat:
      return "MaxLat";
    case Heuristic::kMaxBC:
      return "MaxBC";
    case Heuristic::kGreedy:
      return "Greedy";
  }
  return "?";
}

std::optional<Heuristic> parse_heuristic(std::string_view name) {
  for (Heuristic h : {Heuristic::kMaxLat, Heuristic::kMaxBC,
                      Heuristic::kGreedy}) {
    if (heuristic_name(h) == name) return h;
  }
  return std::nullopt;
}

namespace {

// Ranks untargeted nodes by descending score, ties by name.
std::vector<NodeId> ranked(const LatencyGraph& g,
                           const std::vector<double>& score) {
  std::vector<NodeId> order;
  for (NodeId id : by_name(g.graph())) {
    if (!g.targeted(id)) order.push_back(id);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return score[a] > score[b]; });
  return order;
}

// Total latency saved over all reachable ordered pairs if x were zeroed.
// Paths that do not pass through x keep their cost, so the new distance is
// min(d[s][t], d[s][x] + d[x][t] - latency(x)).
double zeroing_gain(const LatencyMatrix& d, const LatencyGraph& g, NodeId x) {
  const double lx = g.latency(x);
  if (lx == 0.0) return 0.0;
  const std::size_t n = d.size();
  const auto& from_x = d[x];
  double gain = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    if (t != x && from_x[t] != kUnreachable) gain += lx;
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (s == x) continue;
    const auto& row = d[s];
    const double to_x = row[x];
    if (to_x == kUnreachable) continue;
    const double base = to_x - lx;
    for (std::size_t t = 0; t < n; ++t) {
      if (t == s || t == x) continue;
      const double via = base + from_x[t];
      if (via < row[t]) gain += row[t] - via;
    }
  }
  return gain;
}

}  // namespace

MinimizationTrace minimize(const LatencyGraph& g, std::size_t k,
                           Heuristic heuristic,
                           const MinimizeOptions& options) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  std::size_t open = 0;
  for (NodeId id = 0; id < g.node_count(); ++id) open += g.targeted(id) ? 0 : 1;
  if (k > open) {
    throw std::invalid_argument(fmt::format(
        "k = {} exceeds the {} untargeted nodes", k, open));
  }
  MinimizationTrace trace;
  trace.heuristic = heuristic;
  trace.original_latency = average_network_latency(g, options.mode).value;
  if (trace.original_latency <= 0.0) {
    throw DataError("original average latency is zero");
  }

  LatencyGraph work = g;
  auto record = [&](NodeId id) {
    work.target(id);
    trace.selected.push_back(id);
    trace.selected_names.push_back(g.graph().name(id));
    trace.relative_latency.push_back(
        average_network_latency(work, options.mode).value /
        trace.original_latency);
  };

  if (heuristic == Heuristic::kMaxLat || heuristic == Heuristic::kMaxBC) {
    const std::vector<double> score =
        heuristic == Heuristic::kMaxLat
            ? std::vector<double>(g.latencies().begin(), g.latencies().end())
            : betweenness_centrality(g.graph());
    const std::vector<NodeId> order = ranked(g, score);
    for (std::size_t i = 0; i < k; ++i) record(order[i]);
    return trace;
  }

  const std::vector<NodeId> names = by_name(g.graph());
  for (std::size_t step = 0; step < k; ++step) {
    const LatencyMatrix d = all_pair_latencies(work);
    std::vector<NodeId> candidates;
    for (NodeId id : names) {
      if (!work.targeted(id)) candidates.push_back(id);
    }
    std::vector<double> gains(candidates.size());
    parallel_for(candidates.size(), options.workers, [&](std::size_t i) {
      gains[i] = zeroing_gain(d, work, candidates[i]);
    });
    // Candidates are in name order, so keeping the first of near-equal gains
    // applies the identifier tie-break.
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
      const double scale = std::max({1.0, std::abs(gains[i]),
                                     std::abs(gains[best])});
      if (gains[i] > gains[best] + 1e-12 * scale) best = i;
    }
    record(candidates[best]);
  }
  return trace;
}

ExactSolution exact_k_latmin(const LatencyGraph& g, std::size_t k,
                             LatencyMode mode) {
  const std::size_t n = g.node_count();
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (k > n) throw std::invalid_argument("k exceeds node count");
  double subsets = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    subsets = subsets * static_cast<double>(n - i) / static_cast<double>(i + 1);
  }
  if (std::round(subsets) > kExactBudget) {
    throw std::invalid_argument(fmt::format(
        "C({}, {}) = {:.0f} subsets exceeds the exhaustive budget of {:.0f}",
        n, k, subsets, kExactBudget));
  }
  const std::vector<NodeId> names = by_name(g.graph());
  std::vector<std::size_t> pick(k);
  std::iota(pick.begin(), pick.end(), 0);
  ExactSolution best;
  bool found = false;
  while (true) {
    LatencyGraph trial = g;
    for (std::size_t i : pick) trial.target(names[i]);
    const double value = average_network_latency(trial, mode).value;
    if (!found || value < best.average_latency) {
      found = true;
      best.average_latency = value;
      best.selected.clear();
      for (std::size_t i : pick) best.selected.push_back(names[i]);
    }
    // Next combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

LatencyGraph topic_latency_graph(const FollowerNetwork& net,
                                 const Genome& genome, std::string_view topic,
                                 LatencyMode mode) {
  const std::map<std::string, double> latency =
      node_topic_latency(genome, topic);
  DirectedGraph full;
  for (const auto& [user, value] : latency) full.add_node(user);
  for (const auto& [followee, follower] : net.edges()) {
    const std::string& a = net.name(followee);
    const std::string& b = net.name(follower);
    if (latency.count(a) != 0 && latency.count(b) != 0) full.add_edge(a, b);
  }
  std::vector<DirectedGraph::NodeId> keep;
  if (mode == LatencyMode::kStrict) {
    for (const auto& part : strongly_connected_components(full)) {
      if (part.size() > keep.size()) keep = part;
    }
  } else {
    keep.resize(full.node_count());
    std::iota(keep.begin(), keep.end(), 0);
  }
  DirectedGraph core = full.induced(keep);
  std::vector<double> values;
  for (DirectedGraph::NodeId id = 0; id < core.node_count(); ++id) {
    values.push_back(latency.at(core.name(id)));
  }
  return LatencyGraph(std::move(core), std::move(values));
}

}  // namespace smg
