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

#include "smg/backbone.h"

#include <map>
#include <set>
#include <utility>

#include "smg/errors.h"

namespace smg {
namespace {

InfluenceBackbone build(std::string_view topic,
                        const std::vector<std::string>& hashtags,
                        const AdoptionIndex& index,
                        const FollowerNetwork& net) {
  std::map<std::pair<std::string, std::string>, int> weights;
  for (const auto& tag : hashtags) {
    const AdopterMap& adopters = index.adopters(tag);
    for (const auto& [user, adoption] : adopters) {
      auto id = net.find(user);
      if (!id) continue;
      for (auto follower : net.followers(*id)) {
        auto later = adopters.find(net.name(follower));
        if (later != adopters.end() &&
            adoption.first_use < later->second.first_use) {
          ++weights[{user, net.name(follower)}];
        }
      }
    }
  }
  InfluenceBackbone backbone{std::string(topic), {}};
  std::set<std::string> nodes;
  for (const auto& [edge, w] : weights) {
    nodes.insert(edge.first);
    nodes.insert(edge.second);
  }
  for (const auto& n : nodes) backbone.graph.add_node(n);
  for (const auto& [edge, w] : weights) {
    backbone.graph.add_edge(edge.first, edge.second, static_cast<double>(w));
  }
  return backbone;
}

}  // namespace

InfluenceBackbone extract_backbone(std::string_view topic,
                                   const AdoptionIndex& index,
                                   const FollowerNetwork& net,
                                   const TopicMap& topics) {
  if (!topics.contains_topic(topic)) {
    throw DataError("unknown topic '" + std::string(topic) + "'");
  }
  return build(topic, topics.hashtags_in(topic), index, net);
}

InfluenceBackbone exclude_hashtag(const InfluenceBackbone& backbone,
                                  std::string_view hashtag,
                                  const AdoptionIndex& index,
                                  const FollowerNetwork& net,
                                  const TopicMap& topics) {
  auto topic = topics.topic_of(hashtag);
  if (!topic || *topic != backbone.topic) {
    throw DataError("hashtag '" + std::string(hashtag) +
                    "' is not in topic '" + backbone.topic + "'");
  }
  std::vector<std::string> remaining;
  for (auto& tag : topics.hashtags_in(backbone.topic)) {
    if (tag != hashtag) remaining.push_back(std::move(tag));
  }
  return build(backbone.topic, remaining, index, net);
}

DirectedGraph follower_counterpart(const InfluenceBackbone& backbone,
                                   const FollowerNetwork& net) {
  const DirectedGraph& g = backbone.graph;
  DirectedGraph counterpart;
  for (const auto& name : g.names()) counterpart.add_node(name);
  std::vector<std::optional<FollowerNetwork::NodeId>> net_ids;
  net_ids.reserve(g.node_count());
  for (const auto& name : g.names()) net_ids.push_back(net.find(name));
  for (DirectedGraph::NodeId u = 0; u < g.node_count(); ++u) {
    if (!net_ids[u]) continue;
    for (auto follower : net.followers(*net_ids[u])) {
      if (auto v = g.find(net.name(follower))) counterpart.add_edge(u, *v);
    }
  }
  return counterpart;
}

RankVector influence_pagerank(const DirectedGraph& g) {
  return pagerank(g.reversed());
}

BackboneReport compare_with_follower(const InfluenceBackbone& backbone,
                                     const FollowerNetwork& net) {
  const DirectedGraph& influence = backbone.graph;
  if (influence.edge_count() == 0) {
    throw DataError("backbone of topic '" + backbone.topic + "' is empty");
  }
  const DirectedGraph follower = follower_counterpart(backbone, net);
  const std::size_t n = influence.node_count();

  BackboneReport report;
  report.topic = backbone.topic;
  report.nodes = n;
  report.influence_edges = influence.edge_count();
  report.follower_edges = follower.edge_count();
  report.jaccard =
      jaccard_edge_similarity(edge_set(influence), edge_set(follower));
  report.scc_fraction_influence =
      largest_part_fraction(strongly_connected_components(influence), n);
  report.wcc_fraction_influence =
      largest_part_fraction(weakly_connected_components(influence), n);
  report.scc_fraction_follower =
      largest_part_fraction(strongly_connected_components(follower), n);
  report.wcc_fraction_follower =
      largest_part_fraction(weakly_connected_components(follower), n);

  if (n >= 2) {
    RankVector in_followers(n), in_followees(n), fo_followers(n),
        fo_followees(n);
    for (DirectedGraph::NodeId u = 0; u < n; ++u) {
      in_followers[u] = static_cast<double>(influence.out_degree(u));
      in_followees[u] = static_cast<double>(influence.in_degree(u));
      fo_followers[u] = static_cast<double>(follower.out_degree(u));
      fo_followees[u] = static_cast<double>(follower.in_degree(u));
    }
    report.kendall_followers = kendall_tau(in_followers, fo_followers);
    report.kendall_followees = kendall_tau(in_followees, fo_followees);
    report.kendall_pagerank = kendall_tau(influence_pagerank(influence),
                                          influence_pagerank(follower));
  }
  return report;
}

std::vector<std::vector<double>> cross_topic_overlap(
    std::span<const InfluenceBackbone> backbones) {
  const std::size_t n = backbones.size();
  std::vector<EdgeSet> sets;
  sets.reserve(n);
  for (const auto& b : backbones) sets.push_back(edge_set(b.graph));
  std::vector<std::vector<double>> matrix(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double js = (sets[i].empty() && sets[j].empty())
                            ? 1.0
                            : jaccard_edge_similarity(sets[i], sets[j]);
      matrix[i][j] = matrix[j][i] = js;
    }
  }
  return matrix;
}

}  // namespace smg
