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

#include "smg/ingest.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "smg/digest.h"
#include "smg/errors.h"

namespace smg {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

bool is_comment(std::string_view line) {
  return !line.empty() && line.front() == '#' &&
         line.find('\t') == std::string_view::npos;
}

// Calls fn(line_number, line) for every data line.
template <typename Fn>
void for_each_data_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (trim(view).empty() || is_comment(view)) continue;
    fn(number, view);
  }
}

}  // namespace

std::string normalize_hashtag(std::string_view raw) {
  std::string_view s = trim(raw);
  if (!s.empty() && s.front() == '#') s.remove_prefix(1);
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

// ---------------------------------------------------------------------------
// FollowerNetwork

FollowerNetwork FollowerNetwork::from_edges(
    std::span<const std::pair<std::string, std::string>> edges,
    std::span<const std::string> extra_nodes) {
  std::set<std::string> names(extra_nodes.begin(), extra_nodes.end());
  for (const auto& [followee, follower] : edges) {
    if (followee.empty() || follower.empty()) {
      throw DataError("empty node identifier in edge");
    }
    if (followee == follower) {
      throw DataError("self-loop on node '" + followee + "'");
    }
    names.insert(followee);
    names.insert(follower);
  }
  if (names.count("")) throw DataError("empty node identifier");

  FollowerNetwork net;
  net.names_.assign(names.begin(), names.end());
  for (NodeId i = 0; i < net.names_.size(); ++i) {
    net.index_.emplace(net.names_[i], i);
  }
  net.followees_.resize(net.names_.size());
  net.followers_.resize(net.names_.size());
  for (const auto& [followee, follower] : edges) {
    const NodeId u = net.index_.find(followee)->second;
    const NodeId v = net.index_.find(follower)->second;
    net.followers_[u].push_back(v);
    net.followees_[v].push_back(u);
  }
  auto sort_unique = [](std::vector<NodeId>& list) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  };
  std::size_t count = 0;
  for (auto& list : net.followers_) {
    sort_unique(list);
    count += list.size();
  }
  for (auto& list : net.followees_) sort_unique(list);
  net.edge_count_ = count;
  return net;
}

std::optional<FollowerNetwork::NodeId> FollowerNetwork::find(
    std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool FollowerNetwork::has_edge(NodeId followee, NodeId follower) const {
  const auto& list = followers_[followee];
  return std::binary_search(list.begin(), list.end(), follower);
}

bool FollowerNetwork::has_edge(std::string_view followee,
                               std::string_view follower) const {
  auto u = find(followee);
  auto v = find(follower);
  return u && v && has_edge(*u, *v);
}

std::vector<std::string_view> FollowerNetwork::followees_of(
    std::string_view user) const {
  std::vector<std::string_view> out;
  if (auto id = find(user)) {
    for (NodeId f : followees_[*id]) out.push_back(names_[f]);
  }
  return out;
}

std::size_t FollowerNetwork::followee_count(std::string_view user) const {
  auto id = find(user);
  return id ? followees_[*id].size() : 0;
}

std::size_t FollowerNetwork::follower_count(std::string_view user) const {
  auto id = find(user);
  return id ? followers_[*id].size() : 0;
}

std::vector<std::pair<FollowerNetwork::NodeId, FollowerNetwork::NodeId>>
FollowerNetwork::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(edge_count_);
  for (NodeId u = 0; u < followers_.size(); ++u) {
    for (NodeId v : followers_[u]) out.emplace_back(u, v);
  }
  return out;
}

std::string FollowerNetwork::digest() const {
  std::ostringstream text;
  write_follower_edges(*this, text);
  return sha256_hex(text.str());
}

FollowerNetwork load_follower_edges(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::string> extra;
  bool node_section = false;
  for_each_data_line(in, [&](std::size_t number, std::string_view line) {
    if (trim(line) == "[nodes]") {
      node_section = true;
      return;
    }
    auto fields = split(line, '\t');
    if (node_section) {
      if (fields.size() != 1 || trim(fields[0]).empty()) {
        throw ParseError("expected one node identifier", number);
      }
      extra.emplace_back(trim(fields[0]));
      return;
    }
    if (fields.size() != 2) {
      throw ParseError("expected 2 tab-separated fields, got " +
                           std::to_string(fields.size()),
                       number);
    }
    std::string_view followee = trim(fields[0]);
    std::string_view follower = trim(fields[1]);
    if (followee.empty() || follower.empty()) {
      throw ParseError("empty field", number);
    }
    if (followee == follower) {
      throw ParseError("self-loop on '" + std::string(followee) + "'",
                       number);
    }
    edges.emplace_back(followee, follower);
  });
  return FollowerNetwork::from_edges(edges, extra);
}

void write_follower_edges(const FollowerNetwork& net, std::ostream& out) {
  std::vector<FollowerNetwork::NodeId> isolated;
  for (FollowerNetwork::NodeId u = 0; u < net.node_count(); ++u) {
    for (auto v : net.followers(u)) {
      out << net.name(u) << '\t' << net.name(v) << '\n';
    }
    if (net.followers(u).empty() && net.followees(u).empty()) {
      isolated.push_back(u);
    }
  }
  if (!isolated.empty()) {
    out << "[nodes]\n";
    for (auto u : isolated) out << net.name(u) << '\n';
  }
}

// ---------------------------------------------------------------------------
// EventLog

EventLog::EventLog(std::vector<PostEvent> events, std::size_t skipped_lines)
    : events_(std::move(events)), skipped_lines_(skipped_lines) {
  for (const auto& e : events_) {
    if (e.time < 0) throw DataError("negative timestamp");
    if (e.user.empty() || e.hashtag.empty()) {
      throw DataError("event with empty user or hashtag");
    }
  }
  std::sort(events_.begin(), events_.end());
  events_.erase(std::unique(events_.begin(), events_.end()), events_.end());

  by_user_ = events_;
  std::sort(by_user_.begin(), by_user_.end(),
            [](const PostEvent& a, const PostEvent& b) {
              return std::tie(a.user, a.time, a.hashtag) <
                     std::tie(b.user, b.time, b.hashtag);
            });
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= by_user_.size(); ++i) {
    if (i == by_user_.size() || by_user_[i].user != by_user_[begin].user) {
      user_ranges_.emplace(by_user_[begin].user, std::make_pair(begin, i));
      begin = i;
    }
  }
}

std::span<const PostEvent> EventLog::posts_by(std::string_view user) const {
  auto it = user_ranges_.find(user);
  if (it == user_ranges_.end()) return {};
  return std::span<const PostEvent>(by_user_).subspan(
      it->second.first, it->second.second - it->second.first);
}

std::vector<std::string> EventLog::users() const {
  std::vector<std::string> out;
  out.reserve(user_ranges_.size());
  for (const auto& [user, range] : user_ranges_) out.push_back(user);
  return out;
}

std::string EventLog::digest() const {
  std::ostringstream text;
  write_events(*this, text);
  return sha256_hex(text.str());
}

EventLog load_events(std::istream& in) {
  std::vector<PostEvent> events;
  std::size_t skipped = 0;
  for_each_data_line(in, [&](std::size_t number, std::string_view line) {
    auto fields = split(line, '\t');
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError("expected time<TAB>user<TAB>hashtags", number);
    }
    std::string_view time_text = trim(fields[0]);
    Timestamp time = 0;
    auto [ptr, ec] = std::from_chars(
        time_text.data(), time_text.data() + time_text.size(), time);
    if (ec != std::errc() || ptr != time_text.data() + time_text.size() ||
        time_text.empty()) {
      throw ParseError("non-integer time '" + std::string(time_text) + "'",
                       number);
    }
    if (time < 0) throw ParseError("negative time", number);
    std::string_view user = trim(fields[1]);
    if (user.empty()) throw ParseError("empty user", number);

    std::vector<std::string> tags;
    if (fields.size() == 3) {
      for (std::string_view raw : split(fields[2], ',')) {
        std::string tag = normalize_hashtag(raw);
        if (!tag.empty()) tags.push_back(std::move(tag));
      }
    }
    if (tags.empty()) {
      ++skipped;
      return;
    }
    for (auto& tag : tags) {
      events.push_back(PostEvent{time, std::string(user), std::move(tag)});
    }
  });
  return EventLog(std::move(events), skipped);
}

void write_events(const EventLog& log, std::ostream& out) {
  for (const auto& e : log.events()) {
    out << e.time << '\t' << e.user << '\t' << e.hashtag << '\n';
  }
}

// ---------------------------------------------------------------------------
// TopicMap

TopicMap::TopicMap(
    std::span<const std::pair<std::string, std::string>> hashtag_topic_pairs) {
  std::set<std::string> topics;
  for (const auto& [raw_tag, topic] : hashtag_topic_pairs) {
    std::string tag = normalize_hashtag(raw_tag);
    if (tag.empty() || topic.empty()) {
      throw DataError("empty hashtag or topic in topic map");
    }
    auto [it, inserted] = assignment_.emplace(tag, topic);
    if (!inserted && it->second != topic) {
      throw DataError("hashtag '" + tag + "' assigned to both '" +
                      it->second + "' and '" + topic + "'");
    }
    topics.insert(topic);
  }
  topics_.assign(topics.begin(), topics.end());
}

std::optional<std::size_t> TopicMap::topic_index(
    std::string_view topic) const {
  auto it = std::lower_bound(topics_.begin(), topics_.end(), topic);
  if (it == topics_.end() || *it != topic) return std::nullopt;
  return static_cast<std::size_t>(it - topics_.begin());
}

std::optional<std::string_view> TopicMap::topic_of(
    std::string_view hashtag) const {
  auto it = assignment_.find(hashtag);
  if (it == assignment_.end()) return std::nullopt;
  return std::string_view(it->second);
}

std::vector<std::string> TopicMap::hashtags_in(std::string_view topic) const {
  std::vector<std::string> out;
  for (const auto& [tag, t] : assignment_) {
    if (t == topic) out.push_back(tag);
  }
  return out;
}

TopicMap TopicMap::without(std::string_view hashtag) const {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& [tag, topic] : assignment_) {
    if (tag != hashtag) pairs.emplace_back(tag, topic);
  }
  return TopicMap(pairs);
}

std::string TopicMap::digest() const {
  std::ostringstream text;
  write_topic_map(*this, text);
  return sha256_hex(text.str());
}

TopicMap load_topic_map(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::map<std::string, std::string> seen;
  for_each_data_line(in, [&](std::size_t number, std::string_view line) {
    auto fields = split(line, '\t');
    if (fields.size() != 2) {
      throw ParseError("expected hashtag<TAB>topic", number);
    }
    std::string tag = normalize_hashtag(fields[0]);
    std::string topic(trim(fields[1]));
    if (tag.empty() || topic.empty()) throw ParseError("empty field", number);
    auto [it, inserted] = seen.emplace(tag, topic);
    if (!inserted && it->second != topic) {
      throw ParseError("hashtag '" + tag + "' mapped to two topics", number);
    }
    pairs.emplace_back(std::move(tag), std::move(topic));
  });
  return TopicMap(pairs);
}

void write_topic_map(const TopicMap& topics, std::ostream& out) {
  for (const auto& [tag, topic] : topics.assignment()) {
    out << tag << '\t' << topic << '\n';
  }
}

// ---------------------------------------------------------------------------
// AdoptionIndex

namespace {
const AdopterMap kNoAdopters;
}  // namespace

std::optional<Timestamp> AdoptionIndex::first_use(
    std::string_view user, std::string_view hashtag) const {
  auto h = by_hashtag_.find(hashtag);
  if (h == by_hashtag_.end()) return std::nullopt;
  auto u = h->second.find(user);
  if (u == h->second.end()) return std::nullopt;
  return u->second.first_use;
}

std::optional<Timestamp> AdoptionIndex::first_exposure(
    std::string_view user, std::string_view hashtag) const {
  auto h = exposure_.find(hashtag);
  if (h == exposure_.end()) return std::nullopt;
  auto u = h->second.find(user);
  if (u == h->second.end()) return std::nullopt;
  return u->second;
}

std::int64_t AdoptionIndex::use_count(std::string_view user,
                                      std::string_view hashtag) const {
  auto h = by_hashtag_.find(hashtag);
  if (h == by_hashtag_.end()) return 0;
  auto u = h->second.find(user);
  return u == h->second.end() ? 0 : u->second.uses;
}

const AdopterMap& AdoptionIndex::adopters(std::string_view hashtag) const {
  auto h = by_hashtag_.find(hashtag);
  return h == by_hashtag_.end() ? kNoAdopters : h->second;
}

const AdopterMap& AdoptionIndex::adoptions_of(std::string_view user) const {
  auto u = by_user_.find(user);
  return u == by_user_.end() ? kNoAdopters : u->second;
}

std::vector<std::string> AdoptionIndex::hashtags() const {
  std::vector<std::string> out;
  for (const auto& [tag, adopters] : by_hashtag_) out.push_back(tag);
  return out;
}

AdoptionIndex build_adoption_index(const EventLog& events,
                                   const FollowerNetwork& net) {
  AdoptionIndex index;
  for (const PostEvent& e : events.events()) {
    auto& adopters = index.by_hashtag_[e.hashtag];
    auto [it, inserted] = adopters.try_emplace(e.user, Adoption{e.time, 0});
    it->second.first_use = std::min(it->second.first_use, e.time);
    it->second.uses += 1;
  }
  for (const auto& [tag, adopters] : index.by_hashtag_) {
    index.pairs_ += adopters.size();
    auto& exposures = index.exposure_[tag];
    for (const auto& [user, adoption] : adopters) {
      index.by_user_[user].emplace(tag, adoption);
      auto id = net.find(user);
      if (!id) continue;
      for (auto follower : net.followers(*id)) {
        auto [it, inserted] =
            exposures.try_emplace(net.name(follower), adoption.first_use);
        if (!inserted) {
          it->second = std::min(it->second, adoption.first_use);
        }
      }
    }
    index.exposures_ += exposures.size();
  }
  return index;
}

// ---------------------------------------------------------------------------
// Manifest and dataset

std::map<std::string, std::string> read_key_values(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#' || view.front() == '[') continue;
    auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected key=value", number);
    }
    std::string key(trim(view.substr(0, eq)));
    std::string_view value = trim(view.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty()) throw ParseError("empty key", number);
    out[key] = std::string(value);
  }
  return out;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path.string());
  auto values = read_key_values(in);
  const auto base = path.parent_path();
  auto resolve = [&](const char* key) {
    auto it = values.find(key);
    if (it == values.end() || it->second.empty()) {
      throw DataError(std::string("manifest is missing '") + key + "'");
    }
    std::filesystem::path p(it->second);
    return p.is_absolute() ? p : base / p;
  };
  return DatasetManifest{resolve("edges"), resolve("events"),
                         resolve("topics")};
}

Dataset make_dataset(FollowerNetwork net, EventLog events, TopicMap topics) {
  Dataset data{std::move(net), std::move(events), std::move(topics), {}};
  data.index = build_adoption_index(data.events, data.net);
  return data;
}

Dataset load_dataset(const DatasetManifest& manifest) {
  auto open = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw DataError("cannot open " + p.string());
    return in;
  };
  auto wrap = [](const std::filesystem::path& p, auto&& loader) {
    try {
      return loader();
    } catch (const ParseError& e) {
      throw ParseError(p.filename().string() + ": " + e.what());
    }
  };
  auto edges_in = open(manifest.edges);
  auto events_in = open(manifest.events);
  auto topics_in = open(manifest.topics);
  auto net = wrap(manifest.edges, [&] { return load_follower_edges(edges_in); });
  auto events = wrap(manifest.events, [&] { return load_events(events_in); });
  auto topics = wrap(manifest.topics, [&] { return load_topic_map(topics_in); });
  return make_dataset(std::move(net), std::move(events), std::move(topics));
}

}  // namespace smg
