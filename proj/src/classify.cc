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

#include "smg/classify.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "smg/errors.h"
#include "smg/parallel.h"

namespace smg {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double log_sum_exp(std::span<const double> v) {
  double peak = kNegInf;
  for (double x : v) peak = std::max(peak, x);
  if (peak == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double x : v) {
    if (x != kNegInf) sum += std::exp(x - peak);
  }
  return peak + std::log(sum);
}

std::size_t argmax(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace

LocalClassifier train_local(std::string_view user, MetricKind metric,
                            std::span<const TrainingValue> training,
                            std::size_t topic_count) {
  LocalClassifier c;
  c.owner = std::string(user);
  c.metric = metric;
  c.means.assign(topic_count, 0.0);
  c.counts.assign(topic_count, 0);
  c.priors.assign(topic_count, 0.0);
  for (const auto& tv : training) {
    if (tv.topic >= topic_count) {
      throw std::invalid_argument("training topic index out of range");
    }
    c.means[tv.topic] += tv.value;
    c.counts[tv.topic] += 1;
  }
  std::size_t trained_topics = 0;
  for (std::size_t t = 0; t < topic_count; ++t) {
    if (c.counts[t] == 0) continue;
    ++trained_topics;
    c.means[t] /= static_cast<double>(c.counts[t]);
  }
  if (trained_topics < 2) {
    throw DataError("user '" + c.owner + "' has training data for " +
                    std::to_string(trained_topics) + " topic(s), need 2");
  }
  const bool all_identical = std::all_of(
      training.begin(), training.end(),
      [&](const TrainingValue& tv) { return tv.value == training[0].value; });
  if (all_identical) {
    throw DataError("user '" + c.owner + "' has identical values everywhere");
  }
  double within = 0.0;
  for (const auto& tv : training) {
    const double d = tv.value - c.means[tv.topic];
    within += d * d;
  }
  const std::size_t n = training.size();
  const double dof = static_cast<double>(n - trained_topics);
  c.pooled_variance =
      std::max(kVarianceFloor, dof > 0 ? within / dof : 0.0);
  for (std::size_t t = 0; t < topic_count; ++t) {
    c.priors[t] = static_cast<double>(c.counts[t]) / static_cast<double>(n);
  }
  return c;
}

std::vector<double> classify_local_log(const LocalClassifier& c,
                                       double value) {
  std::vector<double> logp(c.topic_count(), kNegInf);
  // Offset by the smallest squared distance first, so a tiny variance does
  // not swamp the priors in rounding.
  double closest = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < c.topic_count(); ++t) {
    if (c.trained(t)) closest = std::min(closest, std::abs(value - c.means[t]));
  }
  for (std::size_t t = 0; t < c.topic_count(); ++t) {
    if (!c.trained(t)) continue;
    const double d = std::abs(value - c.means[t]);
    logp[t] = std::log(c.priors[t]) -
              (d - closest) * (d + closest) / (2.0 * c.pooled_variance);
  }
  const double norm = log_sum_exp(logp);
  for (double& x : logp) {
    if (x != kNegInf) x -= norm;
  }
  return logp;
}

std::vector<double> classify_local(const LocalClassifier& c, double value) {
  std::vector<double> p = classify_local_log(c, value);
  for (double& x : p) x = std::exp(x);
  return p;
}

std::vector<double> local_evidence(const LocalClassifier& c, double value) {
  std::vector<double> e = classify_local_log(c, value);
  for (std::size_t t = 0; t < e.size(); ++t) {
    e[t] = c.trained(t) ? e[t] - std::log(c.priors[t]) : 0.0;
  }
  return e;
}

ConsensusResult nb_consensus(std::string_view hashtag,
                             std::span<const LocalObservation> locals,
                             std::span<const double> global_priors) {
  ConsensusResult result;
  result.hashtag = std::string(hashtag);
  result.log_scores.resize(global_priors.size());
  for (std::size_t t = 0; t < global_priors.size(); ++t) {
    result.log_scores[t] =
        global_priors[t] > 0.0 ? std::log(global_priors[t]) : kNegInf;
  }
  for (const auto& obs : locals) {
    if (obs.classifier->topic_count() != global_priors.size()) {
      throw std::invalid_argument("classifier topic count mismatch");
    }
    const auto evidence = local_evidence(*obs.classifier, obs.value);
    for (std::size_t t = 0; t < evidence.size(); ++t) {
      result.log_scores[t] += evidence[t];
    }
  }
  result.contributing_users = locals.size();
  result.predicted_topic = argmax(result.log_scores);
  return result;
}

MetricData collect_metric_data(const Genome& genome, const TopicMap& topics,
                               MetricKind metric) {
  MetricData data;
  data.metric = metric;
  data.topics = topics.topics();
  std::map<std::string, std::size_t> hashtag_topics;
  for (const auto& [user, genotype] : genome.genotypes) {
    std::vector<TrainingValue> values;
    for (const auto& [key, cell] : genotype.cells) {
      if (key.second != metric) continue;
      auto topic = topics.topic_index(key.first);
      if (!topic) continue;
      for (const auto& obs : cell.values) {
        values.push_back(TrainingValue{obs.hashtag, *topic, obs.value});
        hashtag_topics.emplace(obs.hashtag, *topic);
      }
    }
    if (values.empty()) continue;
    std::sort(values.begin(), values.end(),
              [](const auto& a, const auto& b) { return a.hashtag < b.hashtag; });
    data.users.push_back(user);
    data.values.push_back(std::move(values));
  }
  for (const auto& [tag, topic] : hashtag_topics) {
    data.hashtags.push_back(tag);
    data.hashtag_topic.push_back(topic);
  }
  return data;
}

ErrorTable random_baseline(const std::vector<std::string>& topics,
                           std::span<const std::size_t> hashtag_topic) {
  ErrorTable table;
  table.topics = topics;
  table.error.assign(topics.size(), kNaN);
  table.cases.assign(topics.size(), 0);
  for (std::size_t t : hashtag_topic) table.cases[t] += 1;
  const double total = static_cast<double>(hashtag_topic.size());
  double weighted = 0.0;
  for (std::size_t t = 0; t < topics.size(); ++t) {
    if (table.cases[t] == 0) continue;
    table.error[t] = 1.0 - static_cast<double>(table.cases[t]) / total;
    weighted += table.error[t] * static_cast<double>(table.cases[t]);
  }
  table.expected_error = total > 0 ? weighted / total : kNaN;
  return table;
}

namespace {

const TrainingValue* find_value(const std::vector<TrainingValue>& values,
                                std::string_view hashtag) {
  auto it = std::lower_bound(
      values.begin(), values.end(), hashtag,
      [](const TrainingValue& tv, std::string_view h) { return tv.hashtag < h; });
  if (it == values.end() || it->hashtag != hashtag) return nullptr;
  return &*it;
}

struct Tally {
  std::vector<std::size_t> wrong;
  std::vector<std::size_t> cases;

  explicit Tally(std::size_t topics) : wrong(topics, 0), cases(topics, 0) {}

  void add(std::size_t truth, std::size_t predicted) {
    cases[truth] += 1;
    if (predicted != truth) wrong[truth] += 1;
  }

  void merge(const Tally& other) {
    for (std::size_t t = 0; t < cases.size(); ++t) {
      wrong[t] += other.wrong[t];
      cases[t] += other.cases[t];
    }
  }

  ErrorTable table(const std::vector<std::string>& topics) const {
    ErrorTable out;
    out.topics = topics;
    out.error.assign(topics.size(), kNaN);
    out.cases = cases;
    std::size_t all_wrong = 0, all_cases = 0;
    for (std::size_t t = 0; t < topics.size(); ++t) {
      all_wrong += wrong[t];
      all_cases += cases[t];
      if (cases[t] > 0) {
        out.error[t] =
            static_cast<double>(wrong[t]) / static_cast<double>(cases[t]);
      }
    }
    out.expected_error =
        all_cases > 0 ? static_cast<double>(all_wrong) /
                            static_cast<double>(all_cases)
                      : kNaN;
    return out;
  }
};

// Everything the consensus of one held-out hashtag needs: the fold's log
// prior and the evidence of every user who used the hashtag and still has a
// trainable classifier without it.
struct Fold {
  std::size_t hashtag = 0;  // index into MetricData::hashtags
  std::vector<double> log_prior;
  std::vector<std::pair<std::size_t, std::vector<double>>> evidence;
  Tally train{0};
};

std::vector<double> fold_log_prior(std::span<const std::size_t> topic_counts,
                                   std::size_t held_out_topic) {
  std::vector<double> counts(topic_counts.begin(), topic_counts.end());
  counts[held_out_topic] -= 1.0;
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  std::vector<double> logp(counts.size());
  for (std::size_t t = 0; t < counts.size(); ++t) {
    logp[t] = counts[t] > 0 ? std::log(counts[t] / total) : kNegInf;
  }
  return logp;
}

std::optional<LocalClassifier> try_train(
    std::string_view user, MetricKind metric,
    std::span<const TrainingValue> values, std::size_t topics) {
  try {
    return train_local(user, metric, values, topics);
  } catch (const DataError&) {
    return std::nullopt;
  }
}

struct Prepared {
  std::vector<std::size_t> topic_counts;
  std::vector<std::optional<LocalClassifier>> full;
  std::vector<std::vector<std::size_t>> users_of_hashtag;
  std::vector<std::size_t> evaluated;  // hashtag indices
  std::vector<std::string> skipped;
};

Prepared prepare(const MetricData& data) {
  Prepared p;
  const std::size_t topics = data.topics.size();
  p.topic_counts.assign(topics, 0);
  for (std::size_t t : data.hashtag_topic) p.topic_counts[t] += 1;
  p.full.resize(data.users.size());
  for (std::size_t u = 0; u < data.users.size(); ++u) {
    p.full[u] = try_train(data.users[u], data.metric, data.values[u], topics);
  }
  std::map<std::string_view, std::size_t> hashtag_index;
  for (std::size_t h = 0; h < data.hashtags.size(); ++h) {
    hashtag_index.emplace(data.hashtags[h], h);
  }
  p.users_of_hashtag.resize(data.hashtags.size());
  for (std::size_t u = 0; u < data.users.size(); ++u) {
    for (const auto& tv : data.values[u]) {
      p.users_of_hashtag[hashtag_index.at(tv.hashtag)].push_back(u);
    }
  }
  for (std::size_t h = 0; h < data.hashtags.size(); ++h) {
    if (p.topic_counts[data.hashtag_topic[h]] < 2) {
      p.skipped.push_back(data.hashtags[h]);
    } else {
      p.evaluated.push_back(h);
    }
  }
  return p;
}

Fold run_fold(const MetricData& data, const Prepared& prep, std::size_t h,
              const LeaveOneOutOptions& options) {
  const std::size_t topics = data.topics.size();
  const std::string& held_out = data.hashtags[h];
  Fold fold;
  fold.hashtag = h;
  fold.log_prior = fold_log_prior(prep.topic_counts, data.hashtag_topic[h]);

  // Classifiers retrained without the held-out hashtag, for its users.
  std::map<std::size_t, std::optional<LocalClassifier>> retrained;
  for (std::size_t u : prep.users_of_hashtag[h]) {
    std::vector<TrainingValue> training;
    training.reserve(data.values[u].size());
    for (const auto& tv : data.values[u]) {
      if (tv.hashtag != held_out) training.push_back(tv);
    }
    if (options.training_observer) {
      options.training_observer(held_out, data.users[u], training);
    }
    auto c = try_train(data.users[u], data.metric, training, topics);
    if (c) {
      const double value = find_value(data.values[u], held_out)->value;
      fold.evidence.emplace_back(u, local_evidence(*c, value));
    }
    retrained.emplace(u, std::move(c));
  }
  if (options.training_observer) {
    // Users without the held-out hashtag keep their full training set.
    for (std::size_t u = 0; u < data.users.size(); ++u) {
      if (!retrained.count(u)) {
        options.training_observer(held_out, data.users[u], data.values[u]);
      }
    }
  }

  if (options.compute_train_error) {
    fold.train = Tally(topics);
    for (std::size_t other = 0; other < data.hashtags.size(); ++other) {
      if (other == h) continue;
      std::vector<double> scores = fold.log_prior;
      for (std::size_t u : prep.users_of_hashtag[other]) {
        auto it = retrained.find(u);
        const std::optional<LocalClassifier>& c =
            it != retrained.end() ? it->second : prep.full[u];
        if (!c) continue;
        const double value =
            find_value(data.values[u], data.hashtags[other])->value;
        const auto e = local_evidence(*c, value);
        for (std::size_t t = 0; t < topics; ++t) scores[t] += e[t];
      }
      fold.train.add(data.hashtag_topic[other], argmax(scores));
    }
  }
  return fold;
}

std::vector<Fold> run_folds(const MetricData& data, const Prepared& prep,
                            const LeaveOneOutOptions& options) {
  std::vector<Fold> folds(prep.evaluated.size());
  if (options.training_observer) {
    // The observer is not required to be thread-safe.
    for (std::size_t i = 0; i < folds.size(); ++i) {
      folds[i] = run_fold(data, prep, prep.evaluated[i], options);
    }
  } else {
    parallel_for(folds.size(), options.workers, [&](std::size_t i) {
      folds[i] = run_fold(data, prep, prep.evaluated[i], options);
    });
  }
  return folds;
}

// Consensus of one fold restricted to users with member[u] set.
std::size_t fold_prediction(const Fold& fold,
                            const std::vector<char>* member) {
  std::vector<double> scores = fold.log_prior;
  for (const auto& [u, e] : fold.evidence) {
    if (member != nullptr && !(*member)[u]) continue;
    for (std::size_t t = 0; t < scores.size(); ++t) scores[t] += e[t];
  }
  return argmax(scores);
}

}  // namespace

LeaveOneOutResult leave_one_out(const MetricData& data,
                                const LeaveOneOutOptions& options) {
  const Prepared prep = prepare(data);
  const std::vector<Fold> folds = run_folds(data, prep, options);
  const std::size_t topics = data.topics.size();

  LeaveOneOutResult result;
  result.metric = data.metric;
  result.skipped = prep.skipped;
  Tally test(topics), train(topics);
  std::vector<std::size_t> evaluated_topics;
  for (const Fold& fold : folds) {
    const std::size_t truth = data.hashtag_topic[fold.hashtag];
    const std::size_t predicted = fold_prediction(fold, nullptr);
    test.add(truth, predicted);
    if (options.compute_train_error) train.merge(fold.train);
    evaluated_topics.push_back(truth);
    result.predictions.push_back(FoldPrediction{
        data.hashtags[fold.hashtag], truth, predicted, fold.evidence.size()});
  }
  result.test = test.table(data.topics);
  result.train = train.table(data.topics);
  // Shares over every hashtag with a value, weights over evaluated ones.
  ErrorTable baseline = random_baseline(data.topics, data.hashtag_topic);
  baseline.cases = test.cases;
  double weighted = 0.0, total = 0.0;
  for (std::size_t t = 0; t < topics; ++t) {
    if (baseline.cases[t] == 0) continue;
    weighted += baseline.error[t] * static_cast<double>(baseline.cases[t]);
    total += static_cast<double>(baseline.cases[t]);
  }
  baseline.expected_error = total > 0 ? weighted / total : kNaN;
  result.random_baseline = baseline;
  return result;
}

LeaveOneOutResult leave_one_out(MetricKind metric, const Genome& genome,
                                const TopicMap& topics,
                                const LeaveOneOutOptions& options) {
  return leave_one_out(collect_metric_data(genome, topics, metric), options);
}

AccuracyCurve accuracy_curve(const MetricData& data,
                             std::span<const std::size_t> sizes,
                             std::size_t repetitions, std::uint64_t seed,
                             std::size_t workers) {
  if (repetitions == 0) throw std::invalid_argument("repetitions must be > 0");
  const Prepared prep = prepare(data);
  std::vector<std::size_t> pool;
  for (std::size_t u = 0; u < data.users.size(); ++u) {
    if (prep.full[u]) pool.push_back(u);
  }
  for (std::size_t s : sizes) {
    if (s == 0) throw std::invalid_argument("ensemble size 0");
    if (s > pool.size()) {
      throw std::invalid_argument(
          "ensemble size " + std::to_string(s) + " exceeds the " +
          std::to_string(pool.size()) + " users with a trained classifier");
    }
  }
  LeaveOneOutOptions fold_options;
  fold_options.workers = workers;
  fold_options.compute_train_error = false;
  const std::vector<Fold> folds = run_folds(data, prep, fold_options);
  const std::size_t topics = data.topics.size();

  AccuracyCurve curve;
  curve.metric = data.metric;
  curve.topics = data.topics;
  curve.available_users = pool.size();
  curve.samples.resize(sizes.size() * repetitions);
  parallel_for(curve.samples.size(), workers, [&](std::size_t job) {
    const std::size_t size = sizes[job / repetitions];
    const std::size_t rep = job % repetitions;
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(size),
                      static_cast<std::uint32_t>(rep)};
    std::mt19937_64 rng(seq);
    std::vector<std::size_t> shuffled = pool;
    for (std::size_t i = 0; i < size; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, shuffled.size() - 1);
      std::swap(shuffled[i], shuffled[pick(rng)]);
    }
    std::vector<char> member(data.users.size(), 0);
    for (std::size_t i = 0; i < size; ++i) member[shuffled[i]] = 1;
    Tally tally(topics);
    for (const Fold& fold : folds) {
      tally.add(data.hashtag_topic[fold.hashtag],
                fold_prediction(fold, &member));
    }
    const ErrorTable table = tally.table(data.topics);
    CurveSample sample;
    sample.size = size;
    sample.repetition = rep;
    sample.accuracy = 1.0 - table.expected_error;
    sample.topic_accuracy.resize(topics);
    for (std::size_t t = 0; t < topics; ++t) {
      sample.topic_accuracy[t] = 1.0 - table.error[t];
    }
    curve.samples[job] = std::move(sample);
  });

  curve.topic_mean_accuracy.resize(topics);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    double sum = 0.0;
    std::vector<double> topic_sum(topics, 0.0);
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
      const auto& s = curve.samples[i * repetitions + rep];
      sum += s.accuracy;
      for (std::size_t t = 0; t < topics; ++t) {
        topic_sum[t] += s.topic_accuracy[t];
      }
    }
    const double reps = static_cast<double>(repetitions);
    curve.mean_accuracy.emplace_back(sizes[i], sum / reps);
    for (std::size_t t = 0; t < topics; ++t) {
      curve.topic_mean_accuracy[t].emplace_back(sizes[i], topic_sum[t] / reps);
    }
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Logistic fit

double LogisticFit::operator()(double size) const {
  return height / (1.0 + std::exp(-slope * (std::log(size) - midpoint)));
}

namespace {

// Minimizes f near x: expands a bracket, then golden-section search.
template <typename F>
double minimize_1d(F&& f, double x, double step) {
  double a = x - step, b = x, c = x + step;
  double fa = f(a), fb = f(b), fc = f(c);
  for (int i = 0; i < 60 && !(fb <= fa && fb <= fc); ++i) {
    if (fa < fb) {
      c = b, fc = fb;
      b = a, fb = fa;
      a = b - 2.0 * (c - b);
      fa = f(a);
    } else {
      a = b, fa = fb;
      b = c, fb = fc;
      c = b + 2.0 * (b - a);
      fc = f(c);
    }
  }
  constexpr double kInvPhi = 0.6180339887498949;
  double lo = a, hi = c;
  double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < 200 && hi - lo > 1e-14 * (1.0 + std::abs(lo)); ++i) {
    if (f1 < f2) {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    }
  }
  const double best = f1 < f2 ? x1 : x2;
  return std::min(f1, f2) <= fb ? best : b;
}

}  // namespace

LogisticFit fit_logistic(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) {
    throw std::invalid_argument("logistic fit needs at least 3 points");
  }
  std::vector<double> lx, y;
  for (const auto& [size, acc] : points) {
    if (!(size > 0.0)) throw std::invalid_argument("non-positive size");
    lx.push_back(std::log(size));
    y.push_back(acc);
  }
  const double n = static_cast<double>(points.size());

  auto gate = [&](double k, double x0, std::size_t i) {
    return 1.0 / (1.0 + std::exp(-k * (lx[i] - x0)));
  };
  auto best_height = [&](double k, double x0) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double g = gate(k, x0, i);
      num += y[i] * g;
      den += g * g;
    }
    return den > 0 ? num / den : 0.0;
  };
  auto sse = [&](double L, double k, double x0) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double r = L * gate(k, x0, i) - y[i];
      s += r * r;
    }
    return s;
  };

  // Start from a log-linear regression of logit(y / L).
  double L = *std::max_element(y.begin(), y.end());
  if (!(L > 0.0)) L = 1.0;
  const double scale = L * 1.05;
  double mean_x = 0.0, mean_z = 0.0;
  std::vector<double> z(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double q = std::clamp(y[i] / scale, 1e-6, 1.0 - 1e-6);
    z[i] = std::log(q / (1.0 - q));
    mean_x += lx[i];
    mean_z += z[i];
  }
  mean_x /= n;
  mean_z /= n;
  double sxz = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sxz += (lx[i] - mean_x) * (z[i] - mean_z);
    sxx += (lx[i] - mean_x) * (lx[i] - mean_x);
  }
  double k = sxx > 0 ? sxz / sxx : 0.0;
  if (std::abs(k) < 1e-9) k = 0.0;
  double x0 = k != 0.0 ? mean_x - mean_z / k : mean_x;
  L = best_height(k, x0);

  double current = sse(L, k, x0);
  for (int sweep = 0; sweep < 20000; ++sweep) {
    const double before = current;
    k = minimize_1d([&](double v) { return sse(best_height(v, x0), v, x0); },
                    k, 0.1 + 0.1 * std::abs(k));
    L = best_height(k, x0);
    x0 = minimize_1d([&](double v) { return sse(best_height(k, v), k, v); },
                     x0, 0.1 + 0.1 * std::abs(x0));
    L = best_height(k, x0);
    current = sse(L, k, x0);
    if (before - current <= 1e-16 * (1.0 + before)) break;
  }
  return LogisticFit{L, k, x0, std::sqrt(current / n)};
}

}  // namespace smg
