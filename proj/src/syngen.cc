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

#include "smg/syngen.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>
#include <tuple>
#include <utility>

#include <fmt/format.h>
#include <json.hpp>

namespace smg {

namespace {

std::string_view model_name(GraphModel m) {
  return m == GraphModel::kUniformRandom ? "uniform-random"
                                         : "preferential-attachment";
}

std::string_view clock_name(DelayClock c) {
  return c == DelayClock::kTime ? "time" : "timeline";
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

void validate(const GenParams& p) {
  require(p.nodes >= 2, "nodes must be at least 2");
  require(p.topics > 0, "topics must be positive");
  require(p.hashtags_per_topic > 0, "hashtags_per_topic must be positive");
  require(!p.latency_levels.empty(), "latency_levels must not be empty");
  for (double l : p.latency_levels) {
    require(std::isfinite(l) && l >= 1.0, "latency levels must be >= 1");
  }
  require(is_probability(p.latency_jitter), "latency_jitter must be in [0,1]");
  require(is_probability(p.adoption_probability),
          "adoption_probability must be in [0,1]");
  require(is_probability(p.reciprocity), "reciprocity must be in [0,1]");
  require(p.activity_spread >= 0.0, "activity_spread must be non-negative");
  require(p.repeat_rate >= 0.0, "repeat_rate must be non-negative");
  require(p.repeat_gap >= 1.0, "repeat_gap must be >= 1");
  require(p.start_window >= 1 && p.cascade_window >= 1,
          "time windows must be positive");
  if (p.model == GraphModel::kUniformRandom) {
    require(p.mean_followees > 0.0 &&
                p.mean_followees <= static_cast<double>(p.nodes - 1),
            fmt::format("mean_followees must be in (0, {}]", p.nodes - 1));
  } else {
    require(p.attachment_links >= 1 && p.attachment_links + 1 < p.nodes,
            fmt::format("attachment_links must be in [1, {}]", p.nodes - 2));
  }
}

namespace {

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long out = 0;
  try {
    out = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty() || v[0] == '-') {
    throw std::invalid_argument(fmt::format("{}: '{}' is not a count", key, v));
  }
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty() || !std::isfinite(out)) {
    throw std::invalid_argument(fmt::format("{}: '{}' is not a number", key, v));
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument(fmt::format("{}: '{}' is not a boolean", key, v));
}

}  // namespace

GenParams gen_params_from(const std::map<std::string, std::string>& kv,
                          GenParams p) {
  for (const auto& [key, value] : kv) {
    if (key == "nodes") {
      p.nodes = parse_u64(key, value);
    } else if (key == "model") {
      if (value == "uniform-random") {
        p.model = GraphModel::kUniformRandom;
      } else if (value == "preferential-attachment") {
        p.model = GraphModel::kPreferentialAttachment;
      } else {
        throw std::invalid_argument(
            "model must be uniform-random or preferential-attachment");
      }
    } else if (key == "mean_followees") {
      p.mean_followees = parse_real(key, value);
    } else if (key == "attachment_links") {
      p.attachment_links = parse_u64(key, value);
    } else if (key == "reciprocity") {
      p.reciprocity = parse_real(key, value);
    } else if (key == "topics") {
      p.topics = parse_u64(key, value);
    } else if (key == "hashtags_per_topic") {
      p.hashtags_per_topic = parse_u64(key, value);
    } else if (key == "cascades_per_hashtag") {
      p.cascades_per_hashtag = parse_u64(key, value);
    } else if (key == "latency_levels") {
      p.latency_levels.clear();
      std::size_t start = 0;
      while (start <= value.size()) {
        const std::size_t end = std::min(value.find(',', start), value.size());
        p.latency_levels.push_back(
            parse_real(key, value.substr(start, end - start)));
        start = end + 1;
      }
    } else if (key == "shuffle_levels") {
      p.shuffle_levels = parse_bool(key, value);
    } else if (key == "latency_jitter") {
      p.latency_jitter = parse_real(key, value);
    } else if (key == "clock") {
      if (value == "time") {
        p.clock = DelayClock::kTime;
      } else if (value == "timeline") {
        p.clock = DelayClock::kTimeline;
      } else {
        throw std::invalid_argument("clock must be time or timeline");
      }
    } else if (key == "adoption_probability") {
      p.adoption_probability = parse_real(key, value);
    } else if (key == "activity_spread") {
      p.activity_spread = parse_real(key, value);
    } else if (key == "repeat_rate") {
      p.repeat_rate = parse_real(key, value);
    } else if (key == "repeat_gap") {
      p.repeat_gap = parse_real(key, value);
    } else if (key == "start_window") {
      p.start_window = static_cast<Timestamp>(parse_u64(key, value));
    } else if (key == "cascade_window") {
      p.cascade_window = static_cast<Timestamp>(parse_u64(key, value));
    } else if (key == "seed") {
      p.seed = parse_u64(key, value);
    } else {
      throw std::invalid_argument(fmt::format("unknown generator key '{}'", key));
    }
  }
  return p;
}

std::string gen_params_text(const GenParams& p) {
  std::string levels;
  for (std::size_t i = 0; i < p.latency_levels.size(); ++i) {
    levels += fmt::format("{}{}", i ? "," : "", p.latency_levels[i]);
  }
  std::string out;
  out += fmt::format("nodes={}\n", p.nodes);
  out += fmt::format("model={}\n", model_name(p.model));
  out += fmt::format("mean_followees={}\n", p.mean_followees);
  out += fmt::format("attachment_links={}\n", p.attachment_links);
  out += fmt::format("reciprocity={}\n", p.reciprocity);
  out += fmt::format("topics={}\n", p.topics);
  out += fmt::format("hashtags_per_topic={}\n", p.hashtags_per_topic);
  out += fmt::format("cascades_per_hashtag={}\n", p.cascades_per_hashtag);
  out += fmt::format("latency_levels={}\n", levels);
  out += fmt::format("shuffle_levels={}\n", p.shuffle_levels);
  out += fmt::format("latency_jitter={}\n", p.latency_jitter);
  out += fmt::format("clock={}\n", clock_name(p.clock));
  out += fmt::format("adoption_probability={}\n", p.adoption_probability);
  out += fmt::format("activity_spread={}\n", p.activity_spread);
  out += fmt::format("repeat_rate={}\n", p.repeat_rate);
  out += fmt::format("repeat_gap={}\n", p.repeat_gap);
  out += fmt::format("start_window={}\n", p.start_window);
  out += fmt::format("cascade_window={}\n", p.cascade_window);
  out += fmt::format("seed={}\n", p.seed);
  return out;
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

std::string node_name(std::size_t index, std::size_t count) {
  const std::size_t width = std::to_string(std::max<std::size_t>(count, 1) - 1)
                                .size();
  return fmt::format("u{:0{}}", index, width);
}

FollowerNetwork generate_graph(const GenParams& p, std::mt19937_64& rng) {
  validate(p);
  const std::size_t n = p.nodes;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(node_name(i, n));
  // (followee, follower)
  std::set<std::pair<std::size_t, std::size_t>> edges;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  if (p.model == GraphModel::kUniformRandom) {
    const double prob = p.mean_followees / static_cast<double>(n - 1);
    for (std::size_t follower = 0; follower < n; ++follower) {
      for (std::size_t followee = 0; followee < n; ++followee) {
        if (followee != follower && unit(rng) < prob) {
          edges.emplace(followee, follower);
        }
      }
    }
  } else {
    const std::size_t m = p.attachment_links;
    std::vector<double> weight(n, 0.0);
    // Fully reciprocal core so the graph starts strongly connected.
    for (std::size_t a = 0; a <= m; ++a) {
      for (std::size_t b = 0; b <= m; ++b) {
        if (a != b) edges.emplace(a, b);
      }
      weight[a] = 2.0 * static_cast<double>(m) + 1.0;
    }
    for (std::size_t v = m + 1; v < n; ++v) {
      std::vector<std::size_t> picks;
      std::vector<double> w(weight.begin(), weight.begin() + v);
      while (picks.size() < m) {
        std::discrete_distribution<std::size_t> choose(w.begin(), w.end());
        const std::size_t t = choose(rng);
        picks.push_back(t);
        w[t] = 0.0;
      }
      for (std::size_t i = 0; i < picks.size(); ++i) {
        const std::size_t t = picks[i];
        edges.emplace(t, v);  // v follows t
        weight[t] += 1.0;
        weight[v] += 1.0;
        // The first pick always follows back, which keeps every new node on
        // a cycle through the core.
        if (i == 0 || unit(rng) < p.reciprocity) {
          edges.emplace(v, t);
          weight[t] += 1.0;
          weight[v] += 1.0;
        }
      }
      weight[v] += 1.0;
    }
  }
  std::vector<std::pair<std::string, std::string>> named;
  named.reserve(edges.size());
  for (const auto& [a, b] : edges) named.emplace_back(names[a], names[b]);
  return FollowerNetwork::from_edges(named, names);
}

double sample_pareto(double alpha, double scale, std::mt19937_64& rng) {
  if (!(alpha > 0.0) || !(scale > 0.0)) {
    throw std::invalid_argument("pareto parameters must be positive");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double u = unit(rng);
  while (u <= 0.0) u = unit(rng);
  return scale / std::pow(u, 1.0 / alpha);
}

std::int64_t sample_delay(double mean, double jitter, std::mt19937_64& rng) {
  if (!(mean >= 1.0)) throw std::invalid_argument("delay mean must be >= 1");
  if (!is_probability(jitter)) {
    throw std::invalid_argument("jitter must be in [0,1]");
  }
  // The base never exceeds the mean, so the geometric part keeps the mean
  // exact; rounding keeps small jitter from inflating the random share.
  const double base = std::max(
      1.0, std::min(std::round((1.0 - jitter) * mean), std::floor(mean)));
  const double spread = mean - base;
  std::int64_t delay = static_cast<std::int64_t>(base);
  if (spread > 0.0) {
    std::geometric_distribution<std::int64_t> g(1.0 / (1.0 + spread));
    delay += g(rng);
  }
  return delay;
}

namespace {

enum class PostKind { kSeed, kAdopt, kRepeat };

struct Queued {
  Timestamp time;
  std::uint64_t order;
  PostKind kind;
  std::uint32_t user;
  std::uint32_t hashtag;
  std::uint32_t cascade;

  bool operator>(const Queued& o) const {
    return std::tie(time, order) > std::tie(o.time, o.order);
  }
};

struct Waiting {
  std::uint32_t hashtag;
  std::size_t topic;
  Timestamp exposed;
  std::int64_t remaining;
  std::uint32_t cascade;
};

}  // namespace

CascadeOutput simulate_cascades(
    const FollowerNetwork& net, const TopicMap& topics,
    const std::map<std::string, std::vector<UserTopicPlan>>& plans,
    const std::vector<CascadeSeed>& seeds, const CascadeOptions& options,
    std::mt19937_64& rng) {
  const std::size_t n = net.node_count();
  std::vector<std::string> hashtags;
  std::vector<std::size_t> hashtag_topic;
  for (const auto& [tag, topic] : topics.assignment()) {
    hashtags.push_back(tag);
    hashtag_topic.push_back(*topics.topic_index(topic));
  }
  auto tag_id = [&](std::string_view tag) -> std::uint32_t {
    auto it = std::lower_bound(hashtags.begin(), hashtags.end(), tag);
    if (it == hashtags.end() || *it != tag) {
      throw std::invalid_argument(
          fmt::format("seed hashtag '{}' has no topic", tag));
    }
    return static_cast<std::uint32_t>(it - hashtags.begin());
  };
  std::vector<const std::vector<UserTopicPlan>*> plan(n, nullptr);
  for (std::uint32_t u = 0; u < n; ++u) {
    auto it = plans.find(net.name(u));
    if (it == plans.end() || it->second.size() != topics.topics().size()) {
      throw std::invalid_argument(
          fmt::format("no complete plan for user '{}'", net.name(u)));
    }
    plan[u] = &it->second;
  }

  CascadeOutput out;
  std::priority_queue<Queued, std::vector<Queued>, std::greater<>> queue;
  std::uint64_t order = 0;
  for (const auto& seed : seeds) {
    auto u = net.find(seed.user);
    if (!u) {
      throw std::invalid_argument(
          fmt::format("seed user '{}' is not in the network", seed.user));
    }
    const auto cascade = static_cast<std::uint32_t>(out.cascades.size());
    out.cascades.push_back(CascadeRecord{seed.hashtag, seed.user, seed.start, {}});
    queue.push(Queued{seed.start, order++, PostKind::kSeed, *u,
                      tag_id(seed.hashtag), cascade});
  }

  std::vector<std::vector<char>> reached(hashtags.size(),
                                         std::vector<char>(n, 0));
  std::vector<std::vector<Waiting>> waiting(n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto schedule_adoption = [&](std::uint32_t user, std::uint32_t tag,
                               Timestamp when, std::uint32_t cascade) {
    queue.push(Queued{when, order++, PostKind::kAdopt, user, tag, cascade});
  };

  while (!queue.empty()) {
    const Queued q = queue.top();
    queue.pop();
    const std::size_t topic = hashtag_topic[q.hashtag];
    if (q.kind == PostKind::kSeed) {
      if (reached[q.hashtag][q.user]) continue;
      reached[q.hashtag][q.user] = 1;
    }
    out.posts.push_back(PostEvent{q.time, net.name(q.user), hashtags[q.hashtag]});

    if (options.clock == DelayClock::kTimeline) {
      for (auto w : net.followers(q.user)) {
        auto& list = waiting[w];
        for (std::size_t i = 0; i < list.size();) {
          Waiting& entry = list[i];
          if (entry.topic == topic && entry.exposed < q.time &&
              --entry.remaining == 0) {
            schedule_adoption(w, entry.hashtag, q.time + 1, entry.cascade);
            list.erase(list.begin() + static_cast<std::ptrdiff_t>(i));
          } else {
            ++i;
          }
        }
      }
    }
    if (q.kind == PostKind::kRepeat) continue;

    out.cascades[q.cascade].adoptions.emplace_back(net.name(q.user), q.time);
    for (auto w : net.followers(q.user)) {
      if (reached[q.hashtag][w]) continue;
      reached[q.hashtag][w] = 1;
      const UserTopicPlan& wp = (*plan[w])[topic];
      if (unit(rng) >= wp.adoption_probability) continue;
      const std::int64_t delay =
          sample_delay(wp.latency, options.latency_jitter, rng);
      if (options.clock == DelayClock::kTime) {
        schedule_adoption(w, q.hashtag, q.time + delay, q.cascade);
      } else {
        waiting[w].push_back(
            Waiting{q.hashtag, topic, q.time, delay, q.cascade});
      }
    }
    const UserTopicPlan& own = (*plan[q.user])[topic];
    if (own.repeat_rate > 0.0) {
      std::poisson_distribution<int> repeats(own.repeat_rate);
      std::geometric_distribution<std::int64_t> gap(
          1.0 / std::max(1.0, options.repeat_gap));
      Timestamp t = q.time;
      for (int r = repeats(rng); r > 0; --r) {
        t += 1 + gap(rng);
        queue.push(Queued{t, order++, PostKind::kRepeat, q.user, q.hashtag,
                          q.cascade});
      }
    }
  }
  return out;
}

Dataset SyntheticData::dataset() const {
  return make_dataset(net, events, topics);
}

SyntheticData generate(const GenParams& p) {
  validate(p);
  SyntheticData data;
  data.params = p;
  std::mt19937_64 graph_rng = make_rng(p.seed, 1);
  data.net = generate_graph(p, graph_rng);

  const std::size_t topic_width = std::to_string(p.topics).size();
  const std::size_t tag_width = std::to_string(p.hashtags_per_topic).size();
  std::vector<std::pair<std::string, std::string>> assignment;
  for (std::size_t t = 0; t < p.topics; ++t) {
    const std::string topic = fmt::format("topic{:0{}}", t + 1, topic_width);
    data.truth.topics.push_back(topic);
    for (std::size_t h = 0; h < p.hashtags_per_topic; ++h) {
      const std::string tag =
          fmt::format("t{:0{}}h{:0{}}", t + 1, topic_width, h + 1, tag_width);
      assignment.emplace_back(tag, topic);
      data.truth.hashtag_topic.emplace(tag, topic);
    }
  }
  data.topics = TopicMap(assignment);

  std::mt19937_64 plan_rng = make_rng(p.seed, 2);
  const double sigma = p.activity_spread;
  std::lognormal_distribution<double> activity(-sigma * sigma / 2.0, sigma);
  for (const auto& user : data.net.nodes()) {
    std::vector<std::size_t> slot(p.topics);
    std::iota(slot.begin(), slot.end(), 0);
    if (p.shuffle_levels) std::shuffle(slot.begin(), slot.end(), plan_rng);
    std::vector<UserTopicPlan> plans;
    for (std::size_t t = 0; t < p.topics; ++t) {
      UserTopicPlan up;
      up.latency = p.latency_levels[slot[t] % p.latency_levels.size()];
      up.activity = sigma > 0.0 ? activity(plan_rng) : 1.0;
      up.adoption_probability =
          std::min(1.0, p.adoption_probability * up.activity);
      up.repeat_rate = p.repeat_rate * up.activity;
      plans.push_back(up);
    }
    data.truth.plans.emplace(user, std::move(plans));
  }

  std::mt19937_64 seed_rng = make_rng(p.seed, 3);
  std::uniform_int_distribution<std::size_t> pick_user(0, p.nodes - 1);
  std::uniform_int_distribution<Timestamp> pick_start(0, p.start_window - 1);
  std::uniform_int_distribution<Timestamp> pick_offset(0, p.cascade_window - 1);
  std::vector<CascadeSeed> seeds;
  for (const auto& [tag, topic] : assignment) {
    if (p.cascades_per_hashtag == 0) break;
    const Timestamp start = pick_start(seed_rng);
    for (std::size_t c = 0; c < p.cascades_per_hashtag; ++c) {
      seeds.push_back(CascadeSeed{tag, data.net.name(static_cast<FollowerNetwork::NodeId>(
                                               pick_user(seed_rng))),
                                  start + pick_offset(seed_rng)});
    }
  }

  std::mt19937_64 sim_rng = make_rng(p.seed, 4);
  CascadeOptions options{p.clock, p.latency_jitter, p.repeat_gap};
  CascadeOutput sim = simulate_cascades(data.net, data.topics, data.truth.plans,
                                        seeds, options, sim_rng);
  data.events = EventLog(std::move(sim.posts));
  data.truth.cascades = std::move(sim.cascades);
  return data;
}

std::string truth_json(const SyntheticData& data) {
  using nlohmann::ordered_json;
  ordered_json j;
  ordered_json params;
  const std::string text = gen_params_text(data.params);
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    const std::string line = text.substr(start, end - start);
    const std::size_t eq = line.find('=');
    params[line.substr(0, eq)] = line.substr(eq + 1);
    start = end + 1;
  }
  j["params"] = params;
  j["topics"] = data.truth.topics;
  j["hashtag_topic"] = data.truth.hashtag_topic;
  ordered_json plans = ordered_json::object();
  for (const auto& [user, per_topic] : data.truth.plans) {
    ordered_json rows = ordered_json::array();
    for (const auto& up : per_topic) {
      rows.push_back({{"latency", up.latency},
                      {"activity", up.activity},
                      {"adoption_probability", up.adoption_probability},
                      {"repeat_rate", up.repeat_rate}});
    }
    plans[user] = rows;
  }
  j["plans"] = plans;
  ordered_json cascades = ordered_json::array();
  for (const auto& c : data.truth.cascades) {
    ordered_json order = ordered_json::array();
    for (const auto& [user, t] : c.adoptions) order.push_back({user, t});
    cascades.push_back({{"hashtag", c.hashtag},
                        {"seed", c.seed},
                        {"start", c.start},
                        {"adoptions", order}});
  }
  j["cascades"] = cascades;
  j["provenance"] = {{"seed", data.params.seed},
                     {"edges_digest", data.net.digest()},
                     {"events_digest", data.events.digest()},
                     {"topics_digest", data.topics.digest()}};
  return j.dump(1) + "\n";
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return out;
}

}  // namespace

void write_synthetic(const SyntheticData& data,
                     const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_output(dir / "edges.tsv");
    write_follower_edges(data.net, out);
  }
  {
    auto out = open_output(dir / "events.tsv");
    write_events(data.events, out);
  }
  {
    auto out = open_output(dir / "topics.tsv");
    write_topic_map(data.topics, out);
  }
  {
    auto out = open_output(dir / "truth.json");
    out << truth_json(data);
  }
  {
    auto out = open_output(dir / "manifest.txt");
    out << "edges=edges.tsv\nevents=events.tsv\ntopics=topics.tsv\n";
  }
}

}  // namespace smg
