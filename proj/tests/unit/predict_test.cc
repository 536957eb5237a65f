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
#include <map>
#include <tuple>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "oracles/brute_force.h"
#include "smg/predict.h"
#include "smg/syngen.h"

namespace smg {
namespace {

using testing::dataset_of;
using testing::EdgeList;

// U follows F0..F{n-1}. F0..F2 use h before U; F0 also uses g before U, which
// leaves an F0 -> U backbone edge once h is excluded.
Dataset star(int followees, bool with_g = true) {
  EdgeList edges;
  for (int i = 0; i < followees; ++i) edges.push_back({"F" + std::to_string(i), "U"});
  std::vector<PostEvent> events{{1, "F0", "h"}, {4, "F0", "h"}, {2, "F1", "h"},
                                {3, "F2", "h"}, {10, "U", "h"}, {20, "F3", "h"}};
  if (with_g) {
    events.push_back({1, "F0", "g"});
    events.push_back({5, "U", "g"});
  }
  return dataset_of(edges, events, {{"h", "T"}, {"g", "T"}});
}

std::vector<PredictionInstance> instances_for(const PredictionContext& ctx,
                                              const std::string& tag) {
  auto all = build_instances(Direction::kInfluencer, ctx);
  std::erase_if(all, [&](const PredictionInstance& x) { return x.hashtag != tag; });
  return all;
}

TEST(RocAuc, HandExample) {
  // candidates p, q, r; truth {p, q}; scores p=1, q=3, r=2
  const std::vector<double> scores{1, 3, 2};
  const std::vector<bool> truth{true, true, false};
  EXPECT_DOUBLE_EQ(*roc_auc(scores, truth), 0.5);
}

TEST(RocAuc, TiesAndUndefined) {
  const std::vector<double> flat{1, 1, 1, 1};
  EXPECT_DOUBLE_EQ(*roc_auc(flat, {true, false, false, true}), 0.5);
  EXPECT_FALSE(roc_auc(flat, {false, false, false, false}));
  EXPECT_FALSE(roc_auc(flat, {true, true, true, true}));
  const std::vector<double> perfect{3, 2, 1};
  EXPECT_DOUBLE_EQ(*roc_auc(perfect, {true, false, false}), 1.0);
}

TEST(RocAuc, MatchesPairEnumeration) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> level(0, 4);
  std::bernoulli_distribution coin(0.4);
  for (int round = 0; round < 300; ++round) {
    const int n = 2 + round % 15;
    std::vector<double> scores;
    std::vector<bool> truth;
    for (int i = 0; i < n; ++i) {
      scores.push_back(level(rng));
      truth.push_back(coin(rng));
    }
    const auto got = roc_auc(scores, truth);
    const auto pos = std::count(truth.begin(), truth.end(), true);
    ASSERT_EQ(got.has_value(), pos > 0 && pos < n);
    if (got) EXPECT_NEAR(*got, oracle::auc_pairs(scores, truth), 1e-12);
  }
}

TEST(RocAuc, MonotoneTransformAndComplement) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> noise(0, 1);
  std::bernoulli_distribution coin(0.5);
  for (int round = 0; round < 200; ++round) {
    std::vector<double> scores, transformed;
    std::vector<bool> truth, complement;
    for (int i = 0; i < 12; ++i) {
      const double s = std::round(noise(rng) * 2);
      scores.push_back(s);
      transformed.push_back(std::exp(3 * s) + 7);
      truth.push_back(coin(rng));
      complement.push_back(!truth.back());
    }
    const auto a = roc_auc(scores, truth);
    if (!a) continue;
    EXPECT_NEAR(*roc_auc(transformed, truth), *a, 1e-12);
    EXPECT_NEAR(*roc_auc(scores, complement), 1.0 - *a, 1e-12);
  }
}

TEST(Instances, TenFolloweesThreeTrueInfluencers) {
  const Dataset d = star(10);
  const PredictionContext ctx(d);
  // U on g qualifies as well, through the h edges.
  EXPECT_EQ(build_instances(Direction::kInfluencer, ctx).size(), 2u);
  const auto inst = instances_for(ctx, "h");
  ASSERT_EQ(inst.size(), 1u);
  EXPECT_EQ(inst[0].user, "U");
  EXPECT_EQ(inst[0].hashtag, "h");
  EXPECT_EQ(inst[0].topic, "T");
  EXPECT_EQ(inst[0].candidates.size(), 10u);
  EXPECT_EQ(inst[0].positives(), 3u);
  for (std::size_t i = 0; i < inst[0].candidates.size(); ++i) {
    const auto& c = inst[0].candidates[i];
    EXPECT_EQ(inst[0].truth[i], c == "F0" || c == "F1" || c == "F2") << c;
  }
}

TEST(Instances, NineFolloweesAreTooFew) {
  const Dataset d = star(9);
  const PredictionContext ctx(d);
  EXPECT_TRUE(build_instances(Direction::kInfluencer, ctx).empty());
}

TEST(Instances, IsolatedCandidatesAreFiltered) {
  const Dataset d = star(10, false);
  const PredictionContext ctx(d);
  EXPECT_TRUE(build_instances(Direction::kInfluencer, ctx).empty());
}

TEST(Instances, AdopterDirection) {
  // The same threshold applies: U has no followers, F* have one followee.
  const Dataset d = star(10);
  const PredictionContext ctx(d);
  EXPECT_TRUE(build_instances(Direction::kAdopter, ctx).empty());
}

TEST(Scores, ActExcludesTargetHashtag) {
  const Dataset d = star(10);
  const PredictionContext ctx(d);
  const auto inst = instances_for(ctx, "h");
  ASSERT_EQ(inst.size(), 1u);
  const auto act = score_candidates(PredictorKind::kAct, inst[0], ctx);
  const auto topic_act = score_candidates(PredictorKind::kTopicAct, inst[0], ctx);
  const auto rw = score_candidates(PredictorKind::kRWAct, inst[0], ctx);
  const auto followers = score_candidates(PredictorKind::kFollowers, inst[0], ctx);
  const auto followees = score_candidates(PredictorKind::kFollowees, inst[0], ctx);
  const auto recip = score_candidates(PredictorKind::kReciprocal, inst[0], ctx);
  for (std::size_t i = 0; i < inst[0].candidates.size(); ++i) {
    const bool f0 = inst[0].candidates[i] == "F0";
    EXPECT_EQ(act[i], f0 ? 1.0 : 0.0);
    EXPECT_EQ(topic_act[i], f0 ? 1.0 : 0.0);
    EXPECT_EQ(rw[i], f0 ? 1.0 : 0.0);
    EXPECT_EQ(followers[i], 1.0);
    EXPECT_EQ(followees[i], 0.0);
    EXPECT_EQ(recip[i], 0.0);
  }
}

TEST(Scores, ZeroTopicActivityZeroesRwAct) {
  for (int round = 0; round < 10; ++round) {
    GenParams p;
    p.nodes = 80;
    p.topics = 2;
    p.hashtags_per_topic = 4;
    p.seed = 100 + round;
    const Dataset d = generate(p).dataset();
    const PredictionContext ctx(d);
    for (const auto& inst : build_instances(Direction::kInfluencer, ctx)) {
      const auto rw = score_candidates(PredictorKind::kRWAct, inst, ctx);
      const auto ta = score_candidates(PredictorKind::kTopicAct, inst, ctx);
      for (std::size_t i = 0; i < rw.size(); ++i) {
        if (ta[i] == 0.0) EXPECT_EQ(rw[i], 0.0);
        EXPECT_GE(rw[i], 0.0);
        EXPECT_LE(rw[i], 1.0);
      }
    }
  }
}

TEST(Context, IgnoresTargetHashtagEvents) {
  std::mt19937_64 rng(12);
  int compared = 0;
  for (int round = 0; round < 40; ++round) {
    const oracle::RawLog raw = oracle::random_log(rng, 8, 4);
    const Dataset full = dataset_of(raw);
    const PredictionContext ctx(full);
    for (const auto& [tag, topic] : raw.topic_of) {
      oracle::RawLog stripped = raw;
      std::erase_if(stripped.events, [&](const PostEvent& e) { return e.hashtag == tag; });
      const Dataset other = dataset_of(stripped);
      const PredictionContext other_ctx(other);
      EXPECT_EQ(ctx.view(tag).digest(), other_ctx.view(tag).digest());
      ++compared;
    }
  }
  EXPECT_GT(compared, 40);
}

TEST(Context, InstancesAreOrdered) {
  GenParams p;
  p.nodes = 120;
  p.topics = 3;
  p.hashtags_per_topic = 5;
  p.seed = 4;
  const Dataset d = generate(p).dataset();
  const PredictionContext ctx(d);
  const auto inst = build_instances(Direction::kInfluencer, ctx);
  ASSERT_FALSE(inst.empty());
  for (std::size_t i = 1; i < inst.size(); ++i) {
    const auto a = std::tie(inst[i - 1].topic, inst[i - 1].hashtag, inst[i - 1].user);
    const auto b = std::tie(inst[i].topic, inst[i].hashtag, inst[i].user);
    EXPECT_LT(a, b);
  }
  for (const auto& x : inst) {
    EXPECT_GE(x.candidates.size(), kMinFollowees);
    EXPECT_GT(x.positives(), 0u);
  }
}

TEST(Evaluate, SingleInstanceAndWorkers) {
  const Dataset d = star(10);
  const PredictionContext ctx(d);
  const auto inst = instances_for(ctx, "h");
  ASSERT_EQ(inst.size(), 1u);
  const auto e = evaluate(PredictorKind::kAct, inst, ctx);
  ASSERT_EQ(e.topics.size(), 1u);
  const auto scores = score_candidates(PredictorKind::kAct, inst[0], ctx);
  EXPECT_DOUBLE_EQ(e.mean_auc, *roc_auc(scores, inst[0].truth));
  EXPECT_DOUBLE_EQ(e.topics[0].mean_auc, e.mean_auc);
  EXPECT_EQ(e.instances, 1u);

  GenParams p;
  p.nodes = 150;
  p.topics = 3;
  p.hashtags_per_topic = 6;
  p.seed = 9;
  const Dataset big = generate(p).dataset();
  const PredictionContext big_ctx(big);
  const auto many = build_instances(Direction::kInfluencer, big_ctx);
  for (auto kind : kAllPredictors) {
    const auto one = evaluate(kind, many, big_ctx, 1);
    const auto four = evaluate(kind, many, big_ctx, 4);
    EXPECT_EQ(one.mean_auc, four.mean_auc);
    EXPECT_EQ(one.instances, four.instances);
  }
}

TEST(Evaluate, RandomScoresNearHalf) {
  GenParams p;
  p.seed = 5;
  const Dataset d = generate(p).dataset();
  const PredictionContext ctx(d);
  const auto inst = build_instances(Direction::kInfluencer, ctx);
  ASSERT_GE(inst.size(), 200u);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<std::vector<double>> draws;
  for (const auto& x : inst) {
    std::vector<double> s(x.candidates.size());
    for (auto& v : s) v = u(rng);
    draws.push_back(std::move(s));
  }
  std::size_t next = 0;
  std::map<std::string, std::size_t> slot;
  for (const auto& x : inst) slot[x.user + "\t" + x.hashtag] = next++;
  const auto e = evaluate(
      [&](const PredictionInstance& x) { return draws[slot.at(x.user + "\t" + x.hashtag)]; },
      inst, 2);
  EXPECT_NEAR(e.mean_auc, 0.5, 0.05);
}

TEST(Predictors, Names) {
  for (auto kind : kAllPredictors) {
    EXPECT_EQ(parse_predictor(predictor_name(kind)), kind);
  }
  EXPECT_FALSE(parse_predictor("PageRank"));
}

}  // namespace
}  // namespace smg
