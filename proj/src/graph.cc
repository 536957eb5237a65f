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

#include "smg/graph.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace smg {

DirectedGraph::NodeId DirectedGraph::add_node(std::string_view name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  const auto id = static_cast<NodeId>(names_.size());
  names_.emplace_back(name);
  index_.emplace(names_.back(), id);
  out_.emplace_back();
  in_.emplace_back();
  return id;
}

void DirectedGraph::add_edge(NodeId from, NodeId to, double weight) {
  if (from >= names_.size() || to >= names_.size()) {
    throw std::invalid_argument("edge endpoint out of range");
  }
  if (!(weight >= 0.0)) throw std::invalid_argument("negative edge weight");
  if (!edge_keys_.insert(key(from, to)).second) {
    throw std::invalid_argument("duplicate edge " + names_[from] + " -> " +
                                names_[to]);
  }
  out_[from].push_back(Arc{to, weight});
  in_[to].push_back(from);
  ++edge_count_;
}

void DirectedGraph::add_edge(std::string_view from, std::string_view to,
                             double weight) {
  const NodeId u = add_node(from);
  const NodeId v = add_node(to);
  add_edge(u, v, weight);
}

std::optional<DirectedGraph::NodeId> DirectedGraph::find(
    std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool DirectedGraph::has_edge(NodeId from, NodeId to) const {
  return edge_keys_.count(key(from, to)) > 0;
}

std::optional<double> DirectedGraph::weight(NodeId from, NodeId to) const {
  if (!has_edge(from, to)) return std::nullopt;
  for (const Arc& arc : out_[from]) {
    if (arc.target == to) return arc.weight;
  }
  return std::nullopt;
}

DirectedGraph DirectedGraph::reversed() const {
  DirectedGraph r;
  for (const auto& n : names_) r.add_node(n);
  for (NodeId u = 0; u < names_.size(); ++u) {
    for (const Arc& arc : out_[u]) r.add_edge(arc.target, u, arc.weight);
  }
  return r;
}

DirectedGraph DirectedGraph::induced(std::span<const NodeId> keep) const {
  DirectedGraph sub;
  std::vector<std::int64_t> remap(names_.size(), -1);
  for (NodeId id : keep) remap[id] = sub.add_node(names_[id]);
  for (NodeId id : keep) {
    for (const Arc& arc : out_[id]) {
      if (remap[arc.target] >= 0) {
        sub.add_edge(static_cast<NodeId>(remap[id]),
                     static_cast<NodeId>(remap[arc.target]), arc.weight);
      }
    }
  }
  return sub;
}

namespace {

Partition canonical(Partition parts) {
  for (auto& p : parts) std::sort(p.begin(), p.end());
  std::sort(parts.begin(), parts.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return parts;
}

}  // namespace

Partition strongly_connected_components(const DirectedGraph& g) {
  using NodeId = DirectedGraph::NodeId;
  const std::size_t n = g.node_count();
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> order(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<NodeId> stack;
  Partition parts;
  std::size_t counter = 0;

  // Iterative Tarjan: frames hold (node, next arc position).
  std::vector<std::pair<NodeId, std::size_t>> frames;
  for (NodeId root = 0; root < n; ++root) {
    if (order[root] != kUnvisited) continue;
    frames.emplace_back(root, 0);
    order[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      auto arcs = g.out(v);
      if (pos < arcs.size()) {
        const NodeId w = arcs[pos++].target;
        if (order[w] == kUnvisited) {
          order[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], order[w]);
        }
        continue;
      }
      const NodeId done = v;
      frames.pop_back();
      if (!frames.empty()) {
        const NodeId parent = frames.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == order[done]) {
        std::vector<NodeId> part;
        NodeId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          part.push_back(w);
        } while (w != done);
        parts.push_back(std::move(part));
      }
    }
  }
  return canonical(std::move(parts));
}

Partition weakly_connected_components(const DirectedGraph& g) {
  using NodeId = DirectedGraph::NodeId;
  const std::size_t n = g.node_count();
  std::vector<NodeId> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](NodeId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (NodeId u = 0; u < n; ++u) {
    for (const auto& arc : g.out(u)) {
      NodeId a = find(u), b = find(arc.target);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::map<NodeId, std::vector<NodeId>> groups;
  for (NodeId u = 0; u < n; ++u) groups[find(u)].push_back(u);
  Partition parts;
  for (auto& [root, members] : groups) parts.push_back(std::move(members));
  return canonical(std::move(parts));
}

double largest_part_fraction(const Partition& parts, std::size_t node_count) {
  if (node_count == 0) return 0.0;
  std::size_t largest = 0;
  for (const auto& p : parts) largest = std::max(largest, p.size());
  return static_cast<double>(largest) / static_cast<double>(node_count);
}

RankVector pagerank(const DirectedGraph& g, const PageRankOptions& options) {
  const std::size_t n = g.node_count();
  if (n == 0) throw std::invalid_argument("pagerank of an empty graph");
  if (!(options.damping > 0.0 && options.damping < 1.0)) {
    throw std::invalid_argument("damping must lie in (0, 1)");
  }
  if (!(options.tolerance > 0.0)) {
    throw std::invalid_argument("tolerance must be positive");
  }
  const double uniform = 1.0 / static_cast<double>(n);
  RankVector rank(n, uniform), next(n);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    double dangling = 0.0;
    for (DirectedGraph::NodeId u = 0; u < n; ++u) {
      if (g.out_degree(u) == 0) dangling += rank[u];
    }
    const double base =
        (1.0 - options.damping) * uniform + options.damping * dangling * uniform;
    std::fill(next.begin(), next.end(), base);
    for (DirectedGraph::NodeId u = 0; u < n; ++u) {
      const auto arcs = g.out(u);
      if (arcs.empty()) continue;
      const double share =
          options.damping * rank[u] / static_cast<double>(arcs.size());
      for (const auto& arc : arcs) next[arc.target] += share;
    }
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change += std::abs(next[i] - rank[i]);
    rank.swap(next);
    if (change < options.tolerance) break;
  }
  const double total = std::accumulate(rank.begin(), rank.end(), 0.0);
  for (double& r : rank) r /= total;
  return rank;
}

RankVector betweenness_centrality(const DirectedGraph& g) {
  using NodeId = DirectedGraph::NodeId;
  const std::size_t n = g.node_count();
  RankVector centrality(n, 0.0);
  std::vector<std::vector<NodeId>> preds(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<std::int64_t> dist(n);
  std::vector<NodeId> visit_order;
  visit_order.reserve(n);
  std::queue<NodeId> frontier;
  for (NodeId s = 0; s < n; ++s) {
    for (auto& p : preds) p.clear();
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    visit_order.clear();
    sigma[s] = 1.0;
    dist[s] = 0;
    frontier.push(s);
    while (!frontier.empty()) {
      const NodeId v = frontier.front();
      frontier.pop();
      visit_order.push_back(v);
      for (const auto& arc : g.out(v)) {
        const NodeId w = arc.target;
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          frontier.push(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    for (auto it = visit_order.rbegin(); it != visit_order.rend(); ++it) {
      const NodeId w = *it;
      for (NodeId v : preds[w]) {
        delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      }
      if (w != s) centrality[w] += delta[w];
    }
  }
  return centrality;
}

namespace {

// Number of tied pairs inside runs of equal values of an already sorted key.
template <typename Key>
std::int64_t tied_pairs(std::size_t n, Key&& equal_to_previous) {
  std::int64_t ties = 0, run = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i < n && equal_to_previous(i)) {
      ++run;
    } else {
      ties += run * (run - 1) / 2;
      run = 1;
    }
  }
  return ties;
}

// Merge sort returning the number of strict inversions.
std::int64_t count_inversions(std::vector<double>& v, std::vector<double>& tmp,
                              std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = count_inversions(v, tmp, lo, mid) +
                       count_inversions(v, tmp, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      tmp[k++] = v[j++];
    } else {
      tmp[k++] = v[i++];
    }
  }
  while (i < mid) tmp[k++] = v[i++];
  while (j < hi) tmp[k++] = v[j++];
  std::copy(tmp.begin() + lo, tmp.begin() + hi, v.begin() + lo);
  return swaps;
}

}  // namespace

double kendall_tau(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("kendall_tau: rank vectors differ in size");
  }
  const std::size_t n = a.size();
  if (n < 2) throw std::invalid_argument("kendall_tau needs at least 2 nodes");

  // Knight's O(n log n) algorithm.
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    return a[x] < a[y] || (a[x] == a[y] && b[x] < b[y]);
  });
  const std::int64_t ties_a = tied_pairs(
      n, [&](std::size_t i) { return a[idx[i]] == a[idx[i - 1]]; });
  const std::int64_t ties_both = tied_pairs(n, [&](std::size_t i) {
    return a[idx[i]] == a[idx[i - 1]] && b[idx[i]] == b[idx[i - 1]];
  });
  std::vector<double> bs(n), tmp(n);
  for (std::size_t i = 0; i < n; ++i) bs[i] = b[idx[i]];
  const std::int64_t discordant = count_inversions(bs, tmp, 0, n);
  const std::int64_t ties_b =
      tied_pairs(n, [&](std::size_t i) { return bs[i] == bs[i - 1]; });

  const std::int64_t total = static_cast<std::int64_t>(n) *
                             static_cast<std::int64_t>(n - 1) / 2;
  // concordant - discordant over pairs untied in both.
  const std::int64_t numerator =
      total - ties_a - ties_b + ties_both - 2 * discordant;
  const std::int64_t untied_a = total - ties_a;
  const std::int64_t untied_b = total - ties_b;
  if (untied_a == 0 || untied_b == 0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return static_cast<double>(numerator) /
         std::sqrt(static_cast<double>(untied_a) *
                   static_cast<double>(untied_b));
}

EdgeSet edge_set(const DirectedGraph& g) {
  EdgeSet out;
  for (DirectedGraph::NodeId u = 0; u < g.node_count(); ++u) {
    for (const auto& arc : g.out(u)) out.emplace(g.name(u), g.name(arc.target));
  }
  return out;
}

double jaccard_edge_similarity(const EdgeSet& a, const EdgeSet& b) {
  if (a.empty() && b.empty()) {
    throw std::invalid_argument("jaccard similarity of two empty edge sets");
  }
  std::size_t common = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(uni);
}

}  // namespace smg
