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

#ifndef SMG_SYNGEN_H_
#define SMG_SYNGEN_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "smg/ingest.h"

namespace smg {

enum class GraphModel { kUniformRandom, kPreferentialAttachment };

// What an adoption delay is measured in: seconds, or same-topic posts seen
// on the user's timeline after first exposure.
enum class DelayClock { kTime, kTimeline };

struct GenParams {
  std::size_t nodes = 300;
  GraphModel model = GraphModel::kUniformRandom;
  double mean_followees = 15.0;       // uniform-random
  std::size_t attachment_links = 3;   // preferential-attachment
  double reciprocity = 0.3;           // preferential-attachment

  std::size_t topics = 5;
  std::size_t hashtags_per_topic = 20;
  std::size_t cascades_per_hashtag = 3;

  // Planted latency means; topic i uses level i modulo the list size, after
  // an optional per-user shuffle of topics.
  std::vector<double> latency_levels = {600, 1200, 2400, 4800, 9600};
  bool shuffle_levels = true;
  // Share of the mean that is random: 0 gives fixed delays, 1 a plain
  // geometric delay.
  double latency_jitter = 0.5;
  DelayClock clock = DelayClock::kTime;

  double adoption_probability = 0.2;  // for a user of mean topic activity
  double activity_spread = 0.8;       // sigma of the log-normal activity
  double repeat_rate = 1.0;           // expected repeats at mean activity
  double repeat_gap = 3600.0;         // mean seconds between repeats
  Timestamp start_window = 7 * 86400;
  Timestamp cascade_window = 3600;

  std::uint64_t seed = 0;
};

// Throws std::invalid_argument when a count is zero where it must not be,
// a probability leaves [0, 1], or the graph model cannot be realized on the
// node count.
void validate(const GenParams& params);

// Reads key=value pairs; unknown keys and malformed values throw
// std::invalid_argument. Keys absent from the map keep their defaults.
GenParams gen_params_from(const std::map<std::string, std::string>& kv,
                          GenParams base = {});
std::string gen_params_text(const GenParams& params);

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream);

std::string node_name(std::size_t index, std::size_t count);

FollowerNetwork generate_graph(const GenParams& params, std::mt19937_64& rng);

double sample_pareto(double alpha, double scale, std::mt19937_64& rng);

// Base value plus a geometric part so the mean is `mean` and the random part
// carries `jitter` of it. Always >= 1.
std::int64_t sample_delay(double mean, double jitter, std::mt19937_64& rng);

struct UserTopicPlan {
  double latency = 0.0;     // planted mean delay
  double activity = 1.0;
  double adoption_probability = 0.0;
  double repeat_rate = 0.0;
};

struct CascadeRecord {
  std::string hashtag;
  std::string seed;
  Timestamp start = 0;
  // Users in adoption order with their first-use time; empty when the seed
  // had already been reached by the hashtag.
  std::vector<std::pair<std::string, Timestamp>> adoptions;
};

struct PlantedTruth {
  std::vector<std::string> topics;
  std::map<std::string, std::string> hashtag_topic;
  // user -> per-topic plan, indexed like `topics`.
  std::map<std::string, std::vector<UserTopicPlan>> plans;
  std::vector<CascadeRecord> cascades;
};

struct CascadeSeed {
  std::string hashtag;
  std::string user;
  Timestamp start = 0;
};

struct CascadeOptions {
  DelayClock clock = DelayClock::kTime;
  double latency_jitter = 0.5;
  double repeat_gap = 3600.0;
};

struct CascadeOutput {
  std::vector<PostEvent> posts;
  std::vector<CascadeRecord> cascades;
};

// Independent-cascade simulation over explicit seeds. Every user flips once
// per hashtag at first exposure. `plans` maps each user to its plan per
// topic index of `topics`.
CascadeOutput simulate_cascades(
    const FollowerNetwork& net, const TopicMap& topics,
    const std::map<std::string, std::vector<UserTopicPlan>>& plans,
    const std::vector<CascadeSeed>& seeds, const CascadeOptions& options,
    std::mt19937_64& rng);

struct SyntheticData {
  GenParams params;
  FollowerNetwork net;
  EventLog events;
  TopicMap topics;
  PlantedTruth truth;

  Dataset dataset() const;
};

SyntheticData generate(const GenParams& params);

std::string truth_json(const SyntheticData& data);

// Writes edges.tsv, events.tsv, topics.tsv, truth.json and manifest.txt.
void write_synthetic(const SyntheticData& data,
                     const std::filesystem::path& dir);

}  // namespace smg

#endif  // SMG_SYNGEN_H_
