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

#ifndef SMG_PREDICT_H_
#define SMG_PREDICT_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smg/backbone.h"
#include "smg/ingest.h"

namespace smg {

inline constexpr std::size_t kMinFollowees = 10;

enum class Direction { kInfluencer, kAdopter };

std::string_view direction_name(Direction d);

enum class PredictorKind {
  kFollowees,
  kFollowers,
  kReciprocal,
  kAct,
  kTopicAct,
  kRWAct
};

inline constexpr std::array<PredictorKind, 6> kAllPredictors = {
    PredictorKind::kFollowees, PredictorKind::kFollowers,
    PredictorKind::kReciprocal, PredictorKind::kAct,
    PredictorKind::kTopicAct,  PredictorKind::kRWAct};

std::string_view predictor_name(PredictorKind kind);
std::optional<PredictorKind> parse_predictor(std::string_view name);

// One (user, hashtag) case. Influencer candidates are the user's followees,
// adopter candidates its followers; both sorted by name.
struct PredictionInstance {
  std::string user;
  std::string hashtag;
  std::string topic;
  Direction direction = Direction::kInfluencer;
  std::vector<std::string> candidates;
  std::vector<bool> truth;  // parallel to candidates

  std::size_t positives() const;
};

// What a predictor may see when the target is one hashtag: the topic
// backbone without that hashtag and activity counts without its posts.
struct ExcludedView {
  std::string hashtag;
  std::string topic;
  InfluenceBackbone backbone;
  std::map<std::string, double, std::less<>> centrality;  // backbone nodes
  std::map<std::string, std::int64_t, std::less<>> activity;
  std::map<std::string, std::int64_t, std::less<>> topic_activity;

  bool touches_backbone(std::string_view user) const;
  // Digest of everything above except the hashtag name itself.
  std::string digest() const;
};

class PredictionContext {
 public:
  explicit PredictionContext(const Dataset& data);
  explicit PredictionContext(Dataset&&) = delete;

  const Dataset& data() const { return *data_; }
  // Built on first use and cached; safe to call concurrently.
  const ExcludedView& view(std::string_view hashtag) const;

 private:
  const Dataset* data_;
  mutable std::mutex mu_;
  mutable std::map<std::string, std::unique_ptr<ExcludedView>, std::less<>>
      views_;
};

// Instances for every adopter with >= kMinFollowees followees, a non-empty
// truth set and at least one candidate touching the hashtag-excluded
// backbone; ordered by (topic, hashtag, user).
std::vector<PredictionInstance> build_instances(
    Direction direction, const PredictionContext& context);

std::vector<double> score_candidates(PredictorKind kind,
                                     const PredictionInstance& instance,
                                     const PredictionContext& context);

// Mann-Whitney AUC with half credit for ties; nullopt when the truth set is
// empty or covers every candidate.
std::optional<double> roc_auc(std::span<const double> scores,
                              const std::vector<bool>& truth);

struct TopicAuc {
  std::string topic;
  double mean_auc = 0.0;
  std::size_t instances = 0;
};

struct Evaluation {
  std::vector<TopicAuc> topics;   // topics with at least one valid instance
  double mean_auc = 0.0;          // over all valid instances
  std::size_t instances = 0;
  std::size_t undefined = 0;      // instances without a defined AUC
};

using CandidateScorer =
    std::function<std::vector<double>(const PredictionInstance&)>;

Evaluation evaluate(const CandidateScorer& scorer,
                    std::span<const PredictionInstance> instances,
                    std::size_t workers = 1);
Evaluation evaluate(PredictorKind kind,
                    std::span<const PredictionInstance> instances,
                    const PredictionContext& context, std::size_t workers = 1);

}  // namespace smg

#endif  // SMG_PREDICT_H_
