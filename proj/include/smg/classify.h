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

#ifndef SMG_CLASSIFY_H_
#define SMG_CLASSIFY_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "smg/genotype.h"
#include "smg/ingest.h"

namespace smg {

inline constexpr double kVarianceFloor = 1e-9;

// One labelled metric value of a user: the hashtag, its topic (index into
// TopicMap::topics()) and the value.
struct TrainingValue {
  std::string hashtag;
  std::size_t topic = 0;
  double value = 0.0;
};

// 1-D linear discriminant: per-topic Gaussian class conditionals sharing one
// pooled variance. Arrays are indexed by global topic; topics without
// training data have count 0 and prior 0.
struct LocalClassifier {
  std::string owner;
  MetricKind metric = MetricKind::kTime;
  std::vector<double> means;
  std::vector<std::size_t> counts;
  double pooled_variance = kVarianceFloor;
  std::vector<double> priors;

  std::size_t topic_count() const { return counts.size(); }
  bool trained(std::size_t topic) const { return counts[topic] > 0; }
};

// Throws DataError unless at least two topics carry values, or when every
// value is identical (nothing to separate).
LocalClassifier train_local(std::string_view user, MetricKind metric,
                            std::span<const TrainingValue> training,
                            std::size_t topic_count);

// Posterior over all topics; untrained topics get probability 0.
std::vector<double> classify_local(const LocalClassifier& c, double value);
// Same in log space (-inf for untrained topics).
std::vector<double> classify_local_log(const LocalClassifier& c, double value);

struct ConsensusResult {
  std::string hashtag;
  std::size_t predicted_topic = 0;
  std::vector<double> log_scores;
  std::size_t contributing_users = 0;
};

struct LocalObservation {
  const LocalClassifier* classifier = nullptr;
  double value = 0.0;
};

// A user's evidence for each topic: log posterior minus log local prior on
// trained topics, 0 on topics the user never saw.
std::vector<double> local_evidence(const LocalClassifier& c, double value);

// Naive Bayes consensus: log global prior plus the summed local evidence;
// argmax with ties going to the lower topic index.
ConsensusResult nb_consensus(std::string_view hashtag,
                             std::span<const LocalObservation> locals,
                             std::span<const double> global_priors);

struct ErrorTable {
  std::vector<std::string> topics;
  std::vector<double> error;           // per topic, NaN when no cases
  std::vector<std::size_t> cases;      // evaluated hashtags per topic
  double expected_error = 0.0;         // case-weighted mean of `error`
};

// Per-hashtag training inputs for one metric, derived from a genome.
struct MetricData {
  MetricKind metric = MetricKind::kTime;
  std::vector<std::string> topics;
  std::vector<std::string> users;                    // sorted
  std::vector<std::vector<TrainingValue>> values;    // per user, by hashtag
  std::vector<std::string> hashtags;                 // with >=1 value
  std::vector<std::size_t> hashtag_topic;            // parallel to hashtags
};

MetricData collect_metric_data(const Genome& genome, const TopicMap& topics,
                               MetricKind metric);

struct FoldPrediction {
  std::string hashtag;
  std::size_t true_topic = 0;
  std::size_t predicted_topic = 0;
  std::size_t contributing_users = 0;
};

struct LeaveOneOutResult {
  MetricKind metric = MetricKind::kTime;
  ErrorTable train;
  ErrorTable test;
  ErrorTable random_baseline;
  std::vector<FoldPrediction> predictions;
  // Hashtags withheld from evaluation because their topic has one hashtag.
  std::vector<std::string> skipped;
};

struct LeaveOneOutOptions {
  std::size_t workers = 1;
  bool compute_train_error = true;
  // Called with (held-out hashtag, user, training set) for every local
  // classifier trained inside a fold.
  std::function<void(std::string_view, std::string_view,
                     std::span<const TrainingValue>)>
      training_observer;
};

LeaveOneOutResult leave_one_out(const MetricData& data,
                                const LeaveOneOutOptions& options = {});
LeaveOneOutResult leave_one_out(MetricKind metric, const Genome& genome,
                                const TopicMap& topics,
                                const LeaveOneOutOptions& options = {});

// 1 - (topic's share of hashtags), per topic.
ErrorTable random_baseline(const std::vector<std::string>& topics,
                           std::span<const std::size_t> hashtag_topic);

struct CurveSample {
  std::size_t size = 0;
  std::size_t repetition = 0;
  double accuracy = 0.0;
  std::vector<double> topic_accuracy;  // NaN for topics without hashtags
};

struct AccuracyCurve {
  MetricKind metric = MetricKind::kTime;
  std::vector<std::string> topics;
  std::size_t available_users = 0;
  std::vector<CurveSample> samples;
  // (size, mean accuracy over repetitions) per requested size.
  std::vector<std::pair<std::size_t, double>> mean_accuracy;
  // Per topic: (size, mean accuracy) points.
  std::vector<std::vector<std::pair<std::size_t, double>>> topic_mean_accuracy;
};

// For each size, `repetitions` uniform samples (without replacement) of the
// users owning a trained classifier; every sample runs the leave-one-out
// consensus restricted to its members. Throws std::invalid_argument on a
// zero size, zero repetitions or a size above the available users.
AccuracyCurve accuracy_curve(const MetricData& data,
                             std::span<const std::size_t> sizes,
                             std::size_t repetitions, std::uint64_t seed,
                             std::size_t workers = 1);

struct LogisticFit {
  double height = 0.0;    // L
  double slope = 0.0;     // k
  double midpoint = 0.0;  // x0, on the log-size axis
  double rms_residual = 0.0;

  double operator()(double size) const;
};

// Least-squares fit of L / (1 + exp(-k (ln x - x0))) by coordinate descent.
// Throws std::invalid_argument with fewer than 3 points or a non-positive
// size.
LogisticFit fit_logistic(std::span<const std::pair<double, double>> points);

}  // namespace smg

#endif  // SMG_CLASSIFY_H_
