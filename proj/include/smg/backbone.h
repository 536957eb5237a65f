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

#ifndef SMG_BACKBONE_H_
#define SMG_BACKBONE_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smg/graph.h"
#include "smg/ingest.h"

namespace smg {

// Topic influence network. Edge (u, v) is a follower edge (u followee, v
// follower) such that u's first use of some topic hashtag strictly precedes
// v's; its weight counts those hashtags. Only nodes touching an edge are
// present, and node ids follow lexicographic order of the names.
struct InfluenceBackbone {
  std::string topic;
  DirectedGraph graph;
};

// Throws DataError for a topic absent from the map.
InfluenceBackbone extract_backbone(std::string_view topic,
                                   const AdoptionIndex& index,
                                   const FollowerNetwork& net,
                                   const TopicMap& topics);

// The backbone recomputed without one hashtag. Throws DataError when the
// hashtag does not belong to the backbone's topic.
InfluenceBackbone exclude_hashtag(const InfluenceBackbone& backbone,
                                  std::string_view hashtag,
                                  const AdoptionIndex& index,
                                  const FollowerNetwork& net,
                                  const TopicMap& topics);

// Every follower edge between nodes of the backbone, on the same node ids.
DirectedGraph follower_counterpart(const InfluenceBackbone& backbone,
                                   const FollowerNetwork& net);

// PageRank with authority flowing from followers to followees, i.e. over the
// reversed edges. Used wherever a node's influence centrality is needed.
RankVector influence_pagerank(const DirectedGraph& g);

struct BackboneReport {
  std::string topic;
  std::size_t nodes = 0;
  std::size_t influence_edges = 0;
  std::size_t follower_edges = 0;
  double jaccard = 0.0;
  double scc_fraction_influence = 0.0;
  double wcc_fraction_influence = 0.0;
  double scc_fraction_follower = 0.0;
  double wcc_fraction_follower = 0.0;
  // Kendall tau-b between the influence and follower rankings; NaN when a
  // ranking is constant.
  double kendall_followers = 0.0;
  double kendall_followees = 0.0;
  double kendall_pagerank = 0.0;
};

// Throws DataError for an empty backbone.
BackboneReport compare_with_follower(const InfluenceBackbone& backbone,
                                     const FollowerNetwork& net);

// Symmetric Jaccard matrix with a unit diagonal. A pair of empty backbones
// counts as identical (1.0).
std::vector<std::vector<double>> cross_topic_overlap(
    std::span<const InfluenceBackbone> backbones);

}  // namespace smg

#endif  // SMG_BACKBONE_H_
