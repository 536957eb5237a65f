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

#ifndef SMG_LATMIN_H_
#define SMG_LATMIN_H_

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smg/genotype.h"
#include "smg/graph.h"
#include "smg/ingest.h"

namespace smg {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

// A digraph whose nodes delay what passes through them. Latencies are
// indexed by node id.
class LatencyGraph {
 public:
  using NodeId = DirectedGraph::NodeId;

  LatencyGraph() = default;
  // Throws std::invalid_argument on a size mismatch or a negative latency.
  LatencyGraph(DirectedGraph graph, std::vector<double> latency);

  const DirectedGraph& graph() const { return graph_; }
  std::size_t node_count() const { return graph_.node_count(); }
  double latency(NodeId id) const { return latency_[id]; }
  std::span<const double> latencies() const { return latency_; }
  bool targeted(NodeId id) const { return targeted_[id]; }

  // Sets the node's latency to zero.
  void target(NodeId id);

 private:
  DirectedGraph graph_;
  std::vector<double> latency_;
  std::vector<bool> targeted_;
};

// Sum of latencies of every node on the path but the last. Throws
// std::invalid_argument for an empty path or a missing edge.
double path_latency(const LatencyGraph& g,
                    std::span<const LatencyGraph::NodeId> path);

// Minimum path latency from s to t, nullopt when t is unreachable.
std::optional<double> pair_latency(const LatencyGraph& g,
                                   LatencyGraph::NodeId s,
                                   LatencyGraph::NodeId t);

// Row s holds pair latencies from s; kUnreachable where there is no path
// and 0 on the diagonal.
using LatencyMatrix = std::vector<std::vector<double>>;
LatencyMatrix all_pair_latencies(const LatencyGraph& g);

enum class LatencyMode { kStrict, kPermissive };

struct AverageLatency {
  double value = 0.0;
  std::size_t reachable_pairs = 0;
  std::size_t ordered_pairs = 0;
};

// Mean over ordered pairs s != t. Strict mode throws DataError unless every
// pair is reachable; permissive mode averages the reachable pairs.
AverageLatency average_network_latency(
    const LatencyGraph& g, LatencyMode mode = LatencyMode::kStrict);
AverageLatency average_from_matrix(const LatencyMatrix& d, LatencyMode mode);

enum class Heuristic { kMaxLat, kMaxBC, kGreedy };

std::string_view heuristic_name(Heuristic h);
std::optional<Heuristic> parse_heuristic(std::string_view name);

struct MinimizationTrace {
  Heuristic heuristic = Heuristic::kGreedy;
  double original_latency = 0.0;
  std::vector<LatencyGraph::NodeId> selected;
  std::vector<std::string> selected_names;
  // Average latency after each pick divided by the original.
  std::vector<double> relative_latency;
};

struct MinimizeOptions {
  LatencyMode mode = LatencyMode::kStrict;
  std::size_t workers = 1;
};

// Throws std::invalid_argument when k is 0 or exceeds the number of
// untargeted nodes, DataError when the original average latency is 0.
MinimizationTrace minimize(const LatencyGraph& g, std::size_t k,
                           Heuristic heuristic,
                           const MinimizeOptions& options = {});

inline constexpr double kExactBudget = 1e6;

struct ExactSolution {
  std::vector<LatencyGraph::NodeId> selected;  // ascending by name
  double average_latency = 0.0;
};

// Exhaustive search over k-subsets in lexicographic order of node names.
// Throws std::invalid_argument when the subset count exceeds kExactBudget.
ExactSolution exact_k_latmin(const LatencyGraph& g, std::size_t k,
                             LatencyMode mode = LatencyMode::kStrict);

// Follower edges (followee -> follower) among users holding a TIME value in
// the topic; node latency is the topic TIME mean. Strict mode keeps only the
// largest strongly connected component.
LatencyGraph topic_latency_graph(const FollowerNetwork& net,
                                 const Genome& genome, std::string_view topic,
                                 LatencyMode mode = LatencyMode::kStrict);

}  // namespace smg

#endif  // SMG_LATMIN_H_
