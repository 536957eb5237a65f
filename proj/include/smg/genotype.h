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

#ifndef SMG_GENOTYPE_H_
#define SMG_GENOTYPE_H_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "smg/ingest.h"

namespace smg {

// Per-(user, hashtag) behavioral metrics.
//
//   TIME     first use minus first exposure
//   N-USES   number of distinct posts of the pair
//   N-PAR    followees whose first use strictly precedes the user's
//   F-PAR    N-PAR over the number of followees
//   LAT      1 / max(1, same-topic hashtag occurrences posted by followees
//            strictly between first exposure and first use)
//   LOG-LAT  ln(LAT / mean LAT of the hashtag over all users with a LAT)
//
// TIME, N-PAR, F-PAR, LAT and LOG-LAT are undefined unless some followee used
// the hashtag strictly before the user did.
enum class MetricKind { kTime, kNUses, kNPar, kFPar, kLat, kLogLat };

inline constexpr std::array<MetricKind, 6> kAllMetrics = {
    MetricKind::kTime, MetricKind::kNUses, MetricKind::kNPar,
    MetricKind::kFPar, MetricKind::kLat,   MetricKind::kLogLat};

std::string_view metric_name(MetricKind kind);
std::optional<MetricKind> parse_metric(std::string_view name);
// "TIME, N-USES, N-PAR, F-PAR, LAT, LOG-LAT"
std::string metric_name_list();

// Throws std::invalid_argument if the user never used the hashtag, if
// LAT/LOG-LAT is requested for a hashtag without a topic, or if LOG-LAT is
// requested without a positive hashtag mean.
std::optional<double> compute_metric(
    MetricKind kind, std::string_view user, std::string_view hashtag,
    const EventLog& events, const AdoptionIndex& index,
    const FollowerNetwork& net, const TopicMap& topics,
    std::optional<double> hashtag_mean_lat = std::nullopt);

struct Observation {
  std::string hashtag;
  double value = 0.0;
};

struct GenotypeCell {
  // One entry per hashtag of the topic, ordered by hashtag.
  std::vector<Observation> values;
  double mean = 0.0;
  std::size_t count = 0;
};

struct Genotype {
  std::string owner;
  std::map<std::pair<std::string, MetricKind>, GenotypeCell> cells;

  const GenotypeCell* cell(std::string_view topic, MetricKind kind) const;
};

struct Genome {
  std::map<std::string, Genotype> genotypes;
  std::string dataset_digest;
  std::string topics_digest;
};

Genome build_genome(const EventLog& events, const AdoptionIndex& index,
                    const FollowerNetwork& net, const TopicMap& topics,
                    std::size_t workers = 1);
Genome build_genome(const Dataset& data, std::size_t workers = 1);

// Mean TIME per user for one topic; users without TIME values are omitted.
std::map<std::string, double> node_topic_latency(const Genome& genome,
                                                 std::string_view topic);

}  // namespace smg

#endif  // SMG_GENOTYPE_H_
