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

#include "smg/genotype.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "smg/digest.h"
#include "smg/parallel.h"

namespace smg {

std::string_view metric_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::kTime:
      return "TIME";
    case MetricKind::kNUses:
      return "N-USES";
    case MetricKind::kNPar:
      return "N-PAR";
    case MetricKind::kFPar:
      return "F-PAR";
    case MetricKind::kLat:
      return "LAT";
    case MetricKind::kLogLat:
      return "LOG-LAT";
  }
  return "?";
}

std::optional<MetricKind> parse_metric(std::string_view name) {
  for (MetricKind kind : kAllMetrics) {
    if (metric_name(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string metric_name_list() {
  std::string out;
  for (MetricKind kind : kAllMetrics) {
    if (!out.empty()) out += ", ";
    out += metric_name(kind);
  }
  return out;
}

namespace {

// Occurrences of `topic` hashtags posted by the user's followees strictly
// inside (from, to).
std::size_t timeline_topic_posts(std::string_view user, Timestamp from,
                                 Timestamp to, std::string_view topic,
                                 const EventLog& events,
                                 const FollowerNetwork& net,
                                 const TopicMap& topics) {
  std::size_t count = 0;
  for (std::string_view followee : net.followees_of(user)) {
    auto posts = events.posts_by(followee);
    auto first = std::upper_bound(
        posts.begin(), posts.end(), from,
        [](Timestamp t, const PostEvent& e) { return t < e.time; });
    for (auto it = first; it != posts.end() && it->time < to; ++it) {
      auto t = topics.topic_of(it->hashtag);
      if (t && *t == topic) ++count;
    }
  }
  return count;
}

struct PairValues {
  std::string hashtag;
  std::string topic;
  std::array<std::optional<double>, 6> values;
};

std::size_t slot(MetricKind kind) { return static_cast<std::size_t>(kind); }

}  // namespace

std::optional<double> compute_metric(MetricKind kind, std::string_view user,
                                     std::string_view hashtag,
                                     const EventLog& events,
                                     const AdoptionIndex& index,
                                     const FollowerNetwork& net,
                                     const TopicMap& topics,
                                     std::optional<double> hashtag_mean_lat) {
  const auto use = index.first_use(user, hashtag);
  if (!use) {
    throw std::invalid_argument("user '" + std::string(user) +
                                "' never used '" + std::string(hashtag) + "'");
  }
  if (kind == MetricKind::kNUses) {
    return static_cast<double>(index.use_count(user, hashtag));
  }
  if (kind == MetricKind::kLogLat &&
      !(hashtag_mean_lat && *hashtag_mean_lat > 0.0)) {
    throw std::invalid_argument("LOG-LAT needs a positive hashtag mean LAT");
  }
  std::optional<std::string_view> topic;
  if (kind == MetricKind::kLat || kind == MetricKind::kLogLat) {
    topic = topics.topic_of(hashtag);
    if (!topic) {
      throw std::invalid_argument("hashtag '" + std::string(hashtag) +
                                  "' has no topic");
    }
  }

  const auto exposure = index.first_exposure(user, hashtag);
  if (!exposure || !(*exposure < *use)) return std::nullopt;

  switch (kind) {
    case MetricKind::kTime:
      return static_cast<double>(*use - *exposure);
    case MetricKind::kNPar:
    case MetricKind::kFPar: {
      const auto followees = net.followees_of(user);
      std::size_t parents = 0;
      for (std::string_view v : followees) {
        auto t = index.first_use(v, hashtag);
        if (t && *t < *use) ++parents;
      }
      if (kind == MetricKind::kNPar) return static_cast<double>(parents);
      return static_cast<double>(parents) /
             static_cast<double>(followees.size());
    }
    case MetricKind::kLat:
    case MetricKind::kLogLat: {
      const std::size_t posts = timeline_topic_posts(
          user, *exposure, *use, *topic, events, net, topics);
      const double lat = 1.0 / static_cast<double>(std::max<std::size_t>(1, posts));
      if (kind == MetricKind::kLat) return lat;
      return std::log(lat / *hashtag_mean_lat);
    }
    case MetricKind::kNUses:
      break;
  }
  return std::nullopt;
}

const GenotypeCell* Genotype::cell(std::string_view topic,
                                   MetricKind kind) const {
  auto it = cells.find(std::make_pair(std::string(topic), kind));
  return it == cells.end() ? nullptr : &it->second;
}

Genome build_genome(const EventLog& events, const AdoptionIndex& index,
                    const FollowerNetwork& net, const TopicMap& topics,
                    std::size_t workers) {
  Genome genome;
  genome.dataset_digest =
      Digest().field(net.digest()).field(events.digest()).hex();
  genome.topics_digest = topics.digest();

  const std::vector<std::string> users = events.users();
  std::vector<std::vector<PairValues>> per_user(users.size());

  // Everything except LOG-LAT, which needs the hashtag-wide LAT mean.
  parallel_for(users.size(), workers, [&](std::size_t i) {
    const std::string& u = users[i];
    for (const auto& [tag, adoption] : index.adoptions_of(u)) {
      auto topic = topics.topic_of(tag);
      if (!topic) continue;
      PairValues pv{tag, std::string(*topic), {}};
      for (MetricKind kind : kAllMetrics) {
        if (kind == MetricKind::kLogLat) continue;
        pv.values[slot(kind)] =
            compute_metric(kind, u, tag, events, index, net, topics);
      }
      per_user[i].push_back(std::move(pv));
    }
  });

  // Mean LAT per hashtag, summed in user order.
  std::map<std::string, std::pair<double, std::size_t>> lat_sums;
  for (const auto& pairs : per_user) {
    for (const auto& pv : pairs) {
      if (auto lat = pv.values[slot(MetricKind::kLat)]) {
        auto& acc = lat_sums[pv.hashtag];
        acc.first += *lat;
        acc.second += 1;
      }
    }
  }

  for (std::size_t i = 0; i < users.size(); ++i) {
    Genotype genotype;
    genotype.owner = users[i];
    for (auto& pv : per_user[i]) {
      if (auto lat = pv.values[slot(MetricKind::kLat)]) {
        const auto& acc = lat_sums.at(pv.hashtag);
        const double mean = acc.first / static_cast<double>(acc.second);
        pv.values[slot(MetricKind::kLogLat)] = std::log(*lat / mean);
      }
      for (MetricKind kind : kAllMetrics) {
        const auto& value = pv.values[slot(kind)];
        if (!value) continue;
        auto& cell = genotype.cells[std::make_pair(pv.topic, kind)];
        cell.values.push_back(Observation{pv.hashtag, *value});
      }
    }
    for (auto& [key, cell] : genotype.cells) {
      double sum = 0.0;
      for (const auto& obs : cell.values) sum += obs.value;
      cell.count = cell.values.size();
      cell.mean = sum / static_cast<double>(cell.count);
    }
    genome.genotypes.emplace(users[i], std::move(genotype));
  }
  return genome;
}

Genome build_genome(const Dataset& data, std::size_t workers) {
  return build_genome(data.events, data.index, data.net, data.topics, workers);
}

std::map<std::string, double> node_topic_latency(const Genome& genome,
                                                 std::string_view topic) {
  std::map<std::string, double> out;
  for (const auto& [user, genotype] : genome.genotypes) {
    const GenotypeCell* cell = genotype.cell(topic, MetricKind::kTime);
    if (cell != nullptr && cell->count > 0) out.emplace(user, cell->mean);
  }
  return out;
}

}  // namespace smg
