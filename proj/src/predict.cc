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

#include "smg/predict.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "smg/digest.h"
#include "smg/parallel.h"

namespace smg {

std::string_view direction_name(Direction d) {
  return d == Direction::kInfluencer ? "influencer" : "adopter";
}

std::string_view predictor_name(PredictorKind kind) {
  switch (kind) {
    case PredictorKind::kFollowees:
      return "Followees";
    case PredictorKind::kFollowers:
      return "Followers";
    case PredictorKind::kReciprocal:
      return "Reciprocal";
    case PredictorKind::kAct:
      return "Act";
    case PredictorKind::kTopicAct:
      return "TopicAct";
    case PredictorKind::kRWAct:
      return "RWAct";
  }
  return "?";
}

std::optional<PredictorKind> parse_predictor(std::string_view name) {
  for (PredictorKind kind : kAllPredictors) {
    if (predictor_name(kind) == name) return kind;
  }
  return std::nullopt;
}

std::size_t PredictionInstance::positives() const {
  return static_cast<std::size_t>(std::count(truth.begin(), truth.end(), true));
}

bool ExcludedView::touches_backbone(std::string_view user) const {
  return backbone.graph.find(user).has_value();
}

std::string ExcludedView::digest() const {
  Digest d;
  d.field(topic);
  const DirectedGraph& g = backbone.graph;
  for (DirectedGraph::NodeId u = 0; u < g.node_count(); ++u) {
    for (const auto& arc : g.out(u)) {
      d.field(g.name(u)).field(g.name(arc.target));
      d.field(std::to_string(arc.weight));
    }
  }
  for (const auto* counts : {&activity, &topic_activity}) {
    d.field("|");
    for (const auto& [user, n] : *counts) {
      if (n != 0) d.field(user).field(std::to_string(n));
    }
  }
  return d.hex();
}

PredictionContext::PredictionContext(const Dataset& data) : data_(&data) {}

const ExcludedView& PredictionContext::view(std::string_view hashtag) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = views_.find(hashtag);
    if (it != views_.end()) return *it->second;
  }
  const Dataset& data = *data_;
  auto topic = data.topics.topic_of(hashtag);
  if (!topic) {
    throw std::invalid_argument("hashtag '" + std::string(hashtag) +
                                "' has no topic");
  }
  auto view = std::make_unique<ExcludedView>();
  view->hashtag = std::string(hashtag);
  view->topic = std::string(*topic);
  const InfluenceBackbone full =
      extract_backbone(view->topic, data.index, data.net, data.topics);
  view->backbone =
      exclude_hashtag(full, hashtag, data.index, data.net, data.topics);
  if (!view->backbone.graph.empty()) {
    const RankVector pr = influence_pagerank(view->backbone.graph);
    for (DirectedGraph::NodeId u = 0; u < pr.size(); ++u) {
      view->centrality.emplace(view->backbone.graph.name(u), pr[u]);
    }
  }
  for (const auto& user : data.events.users()) {
    std::int64_t all = 0, in_topic = 0;
    for (const auto& [tag, adoption] : data.index.adoptions_of(user)) {
      if (tag == hashtag) continue;
      all += adoption.uses;
      auto t = data.topics.topic_of(tag);
      if (t && *t == view->topic) in_topic += adoption.uses;
    }
    view->activity.emplace(user, all);
    view->topic_activity.emplace(user, in_topic);
  }
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = views_.emplace(std::string(hashtag), std::move(view));
  return *it->second;
}

std::vector<PredictionInstance> build_instances(
    Direction direction, const PredictionContext& context) {
  const Dataset& data = context.data();
  std::vector<PredictionInstance> out;
  for (const auto& topic : data.topics.topics()) {
    for (const auto& tag : data.topics.hashtags_in(topic)) {
      const AdopterMap& adopters = data.index.adopters(tag);
      for (const auto& [user, adoption] : adopters) {
        auto id = data.net.find(user);
        if (!id || data.net.followees(*id).size() < kMinFollowees) continue;
        PredictionInstance inst;
        inst.user = user;
        inst.hashtag = tag;
        inst.topic = topic;
        inst.direction = direction;
        auto neighbors = direction == Direction::kInfluencer
                             ? data.net.followees(*id)
                             : data.net.followers(*id);
        for (auto n : neighbors) {
          const std::string& cand = data.net.name(n);
          auto it = adopters.find(cand);
          bool positive = false;
          if (it != adopters.end()) {
            positive = direction == Direction::kInfluencer
                           ? it->second.first_use < adoption.first_use
                           : it->second.first_use > adoption.first_use;
          }
          inst.candidates.push_back(cand);
          inst.truth.push_back(positive);
        }
        if (inst.positives() == 0) continue;
        const ExcludedView& view = context.view(tag);
        const bool connected = std::any_of(
            inst.candidates.begin(), inst.candidates.end(),
            [&](const std::string& c) { return view.touches_backbone(c); });
        if (!connected) continue;
        out.push_back(std::move(inst));
      }
    }
  }
  return out;
}

namespace {

template <typename Map>
double lookup(const Map& map, std::string_view key) {
  auto it = map.find(key);
  return it == map.end() ? 0.0 : static_cast<double>(it->second);
}

}  // namespace

std::vector<double> score_candidates(PredictorKind kind,
                                     const PredictionInstance& instance,
                                     const PredictionContext& context) {
  const Dataset& data = context.data();
  const ExcludedView& view = context.view(instance.hashtag);
  if (view.topic != instance.topic) {
    throw std::invalid_argument("instance topic does not match its hashtag");
  }
  std::vector<double> scores;
  scores.reserve(instance.candidates.size());
  switch (kind) {
    case PredictorKind::kFollowees:
      for (const auto& c : instance.candidates) {
        scores.push_back(static_cast<double>(data.net.followee_count(c)));
      }
      break;
    case PredictorKind::kFollowers:
      for (const auto& c : instance.candidates) {
        scores.push_back(static_cast<double>(data.net.follower_count(c)));
      }
      break;
    case PredictorKind::kReciprocal:
      for (const auto& c : instance.candidates) {
        const bool mutual = data.net.has_edge(c, instance.user) &&
                            data.net.has_edge(instance.user, c);
        scores.push_back(mutual ? 1.0 : 0.0);
      }
      break;
    case PredictorKind::kAct:
      for (const auto& c : instance.candidates) {
        scores.push_back(lookup(view.activity, c));
      }
      break;
    case PredictorKind::kTopicAct:
      for (const auto& c : instance.candidates) {
        scores.push_back(lookup(view.topic_activity, c));
      }
      break;
    case PredictorKind::kRWAct: {
      std::vector<double> rank, act;
      for (const auto& c : instance.candidates) {
        rank.push_back(lookup(view.centrality, c));
        act.push_back(lookup(view.topic_activity, c));
      }
      const double max_rank =
          rank.empty() ? 0.0 : *std::max_element(rank.begin(), rank.end());
      const double max_act =
          act.empty() ? 0.0 : *std::max_element(act.begin(), act.end());
      for (std::size_t i = 0; i < rank.size(); ++i) {
        const double r = max_rank > 0 ? rank[i] / max_rank : 0.0;
        const double a = max_act > 0 ? act[i] / max_act : 0.0;
        scores.push_back(r * a);
      }
      break;
    }
  }
  return scores;
}

std::optional<double> roc_auc(std::span<const double> scores,
                              const std::vector<bool>& truth) {
  if (scores.size() != truth.size()) {
    throw std::invalid_argument("roc_auc: scores and truth differ in size");
  }
  const std::size_t n = scores.size();
  std::size_t pos = 0;
  for (bool t : truth) pos += t ? 1 : 0;
  const std::size_t neg = n - pos;
  if (pos == 0 || neg == 0) return std::nullopt;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Sum of mid-ranks (1-based, doubled to stay integral) of the positives.
  std::size_t doubled_rank_sum = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const std::size_t doubled_mid = i + 1 + j;  // 2 * (i+1 + j) / 2
    for (std::size_t k = i; k < j; ++k) {
      if (truth[order[k]]) doubled_rank_sum += doubled_mid;
    }
    i = j;
  }
  const double u = static_cast<double>(doubled_rank_sum) / 2.0 -
                   static_cast<double>(pos * (pos + 1)) / 2.0;
  return u / (static_cast<double>(pos) * static_cast<double>(neg));
}

Evaluation evaluate(const CandidateScorer& scorer,
                    std::span<const PredictionInstance> instances,
                    std::size_t workers) {
  std::vector<std::optional<double>> aucs(instances.size());
  parallel_for(instances.size(), workers, [&](std::size_t i) {
    aucs[i] = roc_auc(scorer(instances[i]), instances[i].truth);
  });
  Evaluation result;
  std::map<std::string, std::pair<double, std::size_t>> per_topic;
  double total = 0.0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (!aucs[i]) {
      ++result.undefined;
      continue;
    }
    auto& acc = per_topic[instances[i].topic];
    acc.first += *aucs[i];
    acc.second += 1;
    total += *aucs[i];
    ++result.instances;
  }
  for (const auto& [topic, acc] : per_topic) {
    result.topics.push_back(
        TopicAuc{topic, acc.first / static_cast<double>(acc.second),
                 acc.second});
  }
  result.mean_auc = result.instances > 0
                        ? total / static_cast<double>(result.instances)
                        : 0.0;
  return result;
}

Evaluation evaluate(PredictorKind kind,
                    std::span<const PredictionInstance> instances,
                    const PredictionContext& context, std::size_t workers) {
  // Build the views up front so workers only read the cache.
  for (const auto& inst : instances) context.view(inst.hashtag);
  return evaluate(
      [&](const PredictionInstance& inst) {
        return score_candidates(kind, inst, context);
      },
      instances, workers);
}

}  // namespace smg
