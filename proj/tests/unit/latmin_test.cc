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

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles/brute_force.h"
#include "smg/errors.h"
#include "smg/latmin.h"

namespace smg {
namespace {

using NodeId = LatencyGraph::NodeId;

LatencyGraph make(const std::vector<std::pair<int, int>>& edges,
                  std::vector<double> latency) {
  DirectedGraph g;
  for (std::size_t i = 0; i < latency.size(); ++i) g.add_node("n" + std::to_string(i));
  for (auto [a, b] : edges) g.add_edge(static_cast<NodeId>(a), static_cast<NodeId>(b));
  return LatencyGraph(std::move(g), std::move(latency));
}

LatencyGraph from_matrix(const oracle::Matrix& adj, const std::vector<double>& latency) {
  std::vector<std::pair<int, int>> edges;
  for (std::size_t i = 0; i < adj.size(); ++i) {
    for (std::size_t j = 0; j < adj.size(); ++j) {
      if (adj[i][j]) edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }
  return make(edges, latency);
}

std::vector<double> integer_latencies(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> d(0, 9);
  std::vector<double> out(n);
  for (auto& v : out) v = d(rng);
  return out;
}

// A random strongly connected graph: a Hamiltonian cycle plus extra arcs.
oracle::Matrix strong_matrix(std::mt19937_64& rng, int n, double density) {
  oracle::Matrix adj = oracle::random_digraph(rng, n, density);
  for (int i = 0; i < n; ++i) adj[i][(i + 1) % n] = 1;
  return adj;
}

TEST(PathLatency, Examples) {
  const LatencyGraph chain = make({{0, 1}, {1, 2}}, {2, 3, 7});
  const std::vector<NodeId> path{0, 1, 2};
  EXPECT_DOUBLE_EQ(path_latency(chain, path), 5.0);
  const LatencyGraph edge = make({{0, 1}}, {4, 9});
  const std::vector<NodeId> one{0, 1};
  EXPECT_DOUBLE_EQ(path_latency(edge, one), 4.0);
  LatencyGraph zeroed = chain;
  zeroed.target(1);
  EXPECT_DOUBLE_EQ(path_latency(zeroed, path), 2.0);
  EXPECT_TRUE(zeroed.targeted(1));
  EXPECT_EQ(zeroed.latency(1), 0.0);
  const std::vector<NodeId> broken{0, 2};
  EXPECT_THROW(path_latency(chain, broken), std::invalid_argument);
  EXPECT_THROW(path_latency(chain, std::vector<NodeId>{}), std::invalid_argument);
}

TEST(PairLatency, Examples) {
  const LatencyGraph g = make({{0, 1}, {1, 2}, {0, 2}}, {2, 3, 1});
  EXPECT_EQ(pair_latency(g, 0, 2), 2.0);
  EXPECT_EQ(pair_latency(g, 0, 1), 2.0);
  EXPECT_FALSE(pair_latency(g, 2, 0));
  EXPECT_FALSE(pair_latency(g, 2, 1));
  EXPECT_THROW(pair_latency(g, 1, 1), std::invalid_argument);
  EXPECT_THROW(LatencyGraph(DirectedGraph(), {1.0}), std::invalid_argument);
  EXPECT_THROW(make({}, {-1.0}), std::invalid_argument);
}

TEST(PairLatency, MatchesOracles) {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 200; ++round) {
    const int n = 2 + round % 7;
    const auto adj = oracle::random_digraph(rng, n, 0.35);
    const auto lat = integer_latencies(rng, n);
    const LatencyGraph g = from_matrix(adj, lat);
    const auto fw = oracle::path_latency_fw(adj, lat);
    const auto apsp = all_pair_latencies(g);
    for (int s = 0; s < n; ++s) {
      for (int t = 0; t < n; ++t) {
        if (s == t) continue;
        const auto got = pair_latency(g, s, t);
        const double enumerated = oracle::path_latency_enum(adj, lat, s, t);
        EXPECT_EQ(fw[s][t], enumerated);
        if (fw[s][t] >= oracle::kInf) {
          EXPECT_FALSE(got);
          EXPECT_EQ(apsp[s][t], kUnreachable);
        } else {
          ASSERT_TRUE(got);
          EXPECT_EQ(*got, fw[s][t]);
          EXPECT_EQ(apsp[s][t], fw[s][t]);
        }
      }
    }
  }
}

TEST(PairLatency, TriangleAndMonotonicity) {
  std::mt19937_64 rng(32);
  for (int round = 0; round < 100; ++round) {
    const int n = 3 + round % 6;
    const auto adj = oracle::random_digraph(rng, n, 0.4);
    const auto lat = integer_latencies(rng, n);
    const LatencyGraph g = from_matrix(adj, lat);
    const auto d = all_pair_latencies(g);
    for (int s = 0; s < n; ++s) {
      for (int t = 0; t < n; ++t) {
        for (int m = 0; m < n; ++m) {
          if (s == t || m == s || m == t) continue;
          EXPECT_LE(d[s][t], d[s][m] + d[m][t]);
        }
      }
    }
    for (int z = 0; z < n; ++z) {
      LatencyGraph zeroed = g;
      zeroed.target(z);
      const auto dz = all_pair_latencies(zeroed);
      for (int s = 0; s < n; ++s) {
        for (int t = 0; t < n; ++t) EXPECT_LE(dz[s][t], d[s][t]);
      }
    }
  }
}

TEST(AverageLatency, Examples) {
  const LatencyGraph two = make({{0, 1}, {1, 0}}, {1, 2});
  const auto a = average_network_latency(two);
  EXPECT_DOUBLE_EQ(a.value, 1.5);
  EXPECT_EQ(a.ordered_pairs, 2u);
  EXPECT_EQ(a.reachable_pairs, 2u);
  EXPECT_DOUBLE_EQ(average_network_latency(make({{0, 1}, {1, 0}}, {0, 0})).value, 0.0);
  // Directed 4-cycle, unit latency: pair latencies 1, 2, 3 from every source.
  const LatencyGraph cycle = make({{0, 1}, {1, 2}, {2, 3}, {3, 0}}, {1, 1, 1, 1});
  const oracle::Matrix adj{{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}};
  const double want = oracle::mean_latency(oracle::path_latency_fw(adj, {1, 1, 1, 1}));
  EXPECT_DOUBLE_EQ(want, 2.0);
  EXPECT_DOUBLE_EQ(average_network_latency(cycle).value, want);
}

TEST(AverageLatency, StrictAndPermissive) {
  const LatencyGraph chain = make({{0, 1}, {1, 2}}, {2, 3, 7});
  EXPECT_THROW(average_network_latency(chain), DataError);
  const auto p = average_network_latency(chain, LatencyMode::kPermissive);
  EXPECT_EQ(p.reachable_pairs, 3u);
  EXPECT_EQ(p.ordered_pairs, 6u);
  EXPECT_DOUBLE_EQ(p.value, (2.0 + 5.0 + 3.0) / 3.0);
  EXPECT_THROW(average_network_latency(make({}, {1.0})), DataError);
}

TEST(AverageLatency, MatchesOracleMean) {
  std::mt19937_64 rng(33);
  for (int round = 0; round < 100; ++round) {
    const int n = 2 + round % 7;
    const auto adj = strong_matrix(rng, n, 0.3);
    const auto lat = integer_latencies(rng, n);
    EXPECT_NEAR(average_network_latency(from_matrix(adj, lat)).value,
                oracle::mean_latency(oracle::path_latency_fw(adj, lat)), 1e-12);
  }
}

TEST(Minimize, StarCenter) {
  std::vector<std::pair<int, int>> edges;
  for (int leaf = 1; leaf <= 5; ++leaf) {
    edges.emplace_back(0, leaf);
    edges.emplace_back(leaf, 0);
  }
  const LatencyGraph star = make(edges, {10, 1, 1, 1, 1, 1});
  for (Heuristic h : {Heuristic::kMaxLat, Heuristic::kMaxBC, Heuristic::kGreedy}) {
    const auto trace = minimize(star, 1, h);
    ASSERT_EQ(trace.selected.size(), 1u);
    EXPECT_EQ(trace.selected[0], 0u) << heuristic_name(h);
    EXPECT_EQ(trace.selected_names[0], "n0");
  }
}

TEST(Minimize, SymmetricCycleTieGoesToFirstName) {
  const LatencyGraph cycle =
      make({{0, 1}, {1, 0}, {1, 2}, {2, 1}, {2, 3}, {3, 2}, {3, 0}, {0, 3}}, {2, 2, 2, 2});
  for (Heuristic h : {Heuristic::kMaxLat, Heuristic::kMaxBC, Heuristic::kGreedy}) {
    EXPECT_EQ(minimize(cycle, 1, h).selected_names[0], "n0") << heuristic_name(h);
  }
}

TEST(Minimize, TwoCycle) {
  const LatencyGraph two = make({{0, 1}, {1, 0}}, {1, 2});
  const auto trace = minimize(two, 1, Heuristic::kGreedy);
  EXPECT_EQ(trace.selected[0], 1u);
  EXPECT_DOUBLE_EQ(trace.original_latency, 1.5);
  EXPECT_DOUBLE_EQ(trace.relative_latency[0], 0.5 / 1.5);
  const auto exact = exact_k_latmin(two, 1);
  EXPECT_EQ(exact.selected, std::vector<NodeId>{1});
  EXPECT_DOUBLE_EQ(exact.average_latency, 0.5);
  EXPECT_DOUBLE_EQ(exact_k_latmin(two, 2).average_latency, 0.0);
}

TEST(Minimize, Errors) {
  const LatencyGraph two = make({{0, 1}, {1, 0}}, {1, 2});
  EXPECT_THROW(minimize(two, 0, Heuristic::kGreedy), std::invalid_argument);
  EXPECT_THROW(minimize(two, 3, Heuristic::kGreedy), std::invalid_argument);
  EXPECT_THROW(minimize(make({{0, 1}, {1, 0}}, {0, 0}), 1, Heuristic::kMaxLat), DataError);
  EXPECT_THROW(exact_k_latmin(two, 3), std::invalid_argument);
  std::vector<std::pair<int, int>> ring;
  for (int i = 0; i < 60; ++i) ring.emplace_back(i, (i + 1) % 60);
  const LatencyGraph big = make(ring, std::vector<double>(60, 1.0));
  try {
    exact_k_latmin(big, 5);
    FAIL() << "expected a budget error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("1000000"), std::string::npos) << e.what();
  }
}

TEST(Minimize, HeuristicNames) {
  for (Heuristic h : {Heuristic::kMaxLat, Heuristic::kMaxBC, Heuristic::kGreedy}) {
    EXPECT_EQ(parse_heuristic(heuristic_name(h)), h);
  }
  EXPECT_FALSE(parse_heuristic("Random"));
}

TEST(Minimize, TracesAndExactBound) {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int round = 0; round < 60; ++round) {
    const int n = 3 + round % 8;
    const auto adj = strong_matrix(rng, n, 0.25);
    std::vector<double> lat(n);
    for (auto& v : lat) v = u(rng);
    const LatencyGraph g = from_matrix(adj, lat);
    const std::size_t kmax = std::min<std::size_t>(3, n);
    std::vector<double> exact;
    for (std::size_t k = 1; k <= kmax; ++k) {
      exact.push_back(exact_k_latmin(g, k).average_latency);
    }
    for (Heuristic h : {Heuristic::kMaxLat, Heuristic::kMaxBC, Heuristic::kGreedy}) {
      const auto trace = minimize(g, kmax, h);
      ASSERT_EQ(trace.relative_latency.size(), kmax);
      double prev = 1.0;
      for (std::size_t k = 0; k < kmax; ++k) {
        const double r = trace.relative_latency[k];
        EXPECT_LE(r, prev + 1e-12);
        EXPECT_GE(r, 0.0);
        prev = r;
        EXPECT_LE(exact[k], r * trace.original_latency + 1e-9);
        // The recorded value equals a fresh evaluation of the zeroed graph.
        LatencyGraph zeroed = g;
        for (std::size_t i = 0; i <= k; ++i) zeroed.target(trace.selected[i]);
        EXPECT_NEAR(average_network_latency(zeroed).value, r * trace.original_latency, 1e-9);
      }
    }
  }
}

TEST(Minimize, GreedyMatchesSequentialDefinition) {
  // Greedy must pick the candidate with the smallest recomputed average,
  // the first name winning ties.
  std::mt19937_64 rng(35);
  std::uniform_int_distribution<int> d(0, 4);
  for (int round = 0; round < 40; ++round) {
    const int n = 3 + round % 6;
    const auto adj = strong_matrix(rng, n, 0.3);
    std::vector<double> lat(n);
    for (auto& v : lat) v = 1 + d(rng);
    const LatencyGraph g = from_matrix(adj, lat);
    const std::size_t k = std::min(3, n - 1);
    MinimizeOptions options;
    options.workers = 1 + round % 3;
    const auto trace = minimize(g, k, Heuristic::kGreedy, options);
    LatencyGraph current = g;
    for (std::size_t step = 0; step < k; ++step) {
      double best = kUnreachable;
      NodeId pick = 0;
      for (NodeId c = 0; c < static_cast<NodeId>(n); ++c) {
        if (current.targeted(c)) continue;
        LatencyGraph trial = current;
        trial.target(c);
        const double v = average_network_latency(trial).value;
        if (v < best - 1e-9) {
          best = v;
          pick = c;
        }
      }
      EXPECT_EQ(trace.selected[step], pick);
      current.target(trace.selected[step]);
    }
  }
}

TEST(Minimize, WorkersDoNotChangeTrace) {
  std::mt19937_64 rng(36);
  const auto adj = strong_matrix(rng, 40, 0.08);
  std::vector<double> lat(40);
  for (auto& v : lat) v = 1 + static_cast<double>(rng() % 1000) / 10.0;
  const LatencyGraph g = from_matrix(adj, lat);
  for (Heuristic h : {Heuristic::kMaxLat, Heuristic::kMaxBC, Heuristic::kGreedy}) {
    MinimizeOptions four;
    four.workers = 4;
    const auto a = minimize(g, 6, h);
    const auto b = minimize(g, 6, h, four);
    EXPECT_EQ(a.selected, b.selected);
    EXPECT_EQ(a.relative_latency, b.relative_latency);
  }
}

}  // namespace
}  // namespace smg
