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

#ifndef SMG_GRAPH_H_
#define SMG_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace smg {

// Directed graph over named nodes with non-negative edge weights. Node ids
// are dense and follow insertion order.
class DirectedGraph {
 public:
  using NodeId = std::uint32_t;

  struct Arc {
    NodeId target;
    double weight;
  };

  DirectedGraph() = default;

  // Returns the existing id when the name is already present.
  NodeId add_node(std::string_view name);
  // Throws std::invalid_argument on a duplicate edge or a negative weight.
  void add_edge(NodeId from, NodeId to, double weight = 1.0);
  void add_edge(std::string_view from, std::string_view to,
                double weight = 1.0);

  std::size_t node_count() const { return names_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  bool empty() const { return names_.empty(); }

  const std::string& name(NodeId id) const { return names_[id]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<NodeId> find(std::string_view name) const;

  std::span<const Arc> out(NodeId id) const { return out_[id]; }
  std::span<const NodeId> in(NodeId id) const { return in_[id]; }
  std::size_t out_degree(NodeId id) const { return out_[id].size(); }
  std::size_t in_degree(NodeId id) const { return in_[id].size(); }

  bool has_edge(NodeId from, NodeId to) const;
  std::optional<double> weight(NodeId from, NodeId to) const;

  // Same nodes (same ids), every edge flipped.
  DirectedGraph reversed() const;
  // Subgraph on `keep` (ids renumbered in the order given).
  DirectedGraph induced(std::span<const NodeId> keep) const;

 private:
  static std::uint64_t key(NodeId from, NodeId to) {
    return (static_cast<std::uint64_t>(from) << 32) | to;
  }

  std::vector<std::string> names_;
  std::map<std::string, NodeId, std::less<>> index_;
  std::vector<std::vector<Arc>> out_;
  std::vector<std::vector<NodeId>> in_;
  std::unordered_set<std::uint64_t> edge_keys_;
  std::size_t edge_count_ = 0;
};

// Each part sorted ascending; parts ordered by their smallest member.
using Partition = std::vector<std::vector<DirectedGraph::NodeId>>;

Partition strongly_connected_components(const DirectedGraph& g);
Partition weakly_connected_components(const DirectedGraph& g);

// Size of the largest part divided by the node count; 0 for an empty graph.
double largest_part_fraction(const Partition& parts, std::size_t node_count);

// One score per node id.
using RankVector = std::vector<double>;

struct PageRankOptions {
  double damping = 0.85;
  double tolerance = 1e-10;
  int max_iterations = 200;
};

// Unweighted power iteration; dangling mass is spread uniformly. Stops when
// the L1 change drops below the tolerance. Throws on an empty graph.
RankVector pagerank(const DirectedGraph& g, const PageRankOptions& options = {});

// Exact directed betweenness over hop-count shortest paths (Brandes), not
// normalized, endpoints excluded. Edge weights are ignored.
RankVector betweenness_centrality(const DirectedGraph& g);

// Tie-corrected Kendall tau-b. Throws when fewer than two entries or the
// sizes differ; NaN when either side is constant (tau-b is 0/0 there).
double kendall_tau(std::span<const double> a, std::span<const double> b);

using Edge = std::pair<std::string, std::string>;
using EdgeSet = std::set<Edge>;

EdgeSet edge_set(const DirectedGraph& g);

// |A n B| / |A u B|. Throws when both sets are empty.
double jaccard_edge_similarity(const EdgeSet& a, const EdgeSet& b);

}  // namespace smg

#endif  // SMG_GRAPH_H_
