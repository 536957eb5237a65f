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

#ifndef SMG_INGEST_H_
#define SMG_INGEST_H_

// Loading and indexing of the three input artifacts: the follower graph,
// the timestamped hashtag event log and the hashtag -> topic map.
//
// Line formats (UTF-8, one record per line, blank lines ignored; a line that
// starts with '#' and contains no TAB is a comment):
//
//   edges.tsv    followee<TAB>follower
//                an optional "[nodes]" line starts a section of one node
//                identifier per line, admitting isolated nodes
//   events.tsv   time<TAB>user<TAB>hashtag[,hashtag...]
//   topics.tsv   hashtag<TAB>topic
//
// Hashtags are normalized everywhere: surrounding blanks trimmed, one leading
// '#' stripped, ASCII lowercased.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace smg {

using Timestamp = std::int64_t;

std::string normalize_hashtag(std::string_view raw);

class FollowerNetwork {
 public:
  using NodeId = std::uint32_t;

  FollowerNetwork() = default;

  // Duplicate edges collapse. Throws DataError on a self-loop or an empty
  // identifier. Node ids follow lexicographic order of the identifiers.
  static FollowerNetwork from_edges(
      std::span<const std::pair<std::string, std::string>> edges,
      std::span<const std::string> extra_nodes = {});

  std::size_t node_count() const { return names_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  const std::vector<std::string>& nodes() const { return names_; }
  const std::string& name(NodeId id) const { return names_[id]; }
  std::optional<NodeId> find(std::string_view name) const;

  // In-neighbors: the users that `id` follows. Sorted.
  std::span<const NodeId> followees(NodeId id) const { return followees_[id]; }
  // Out-neighbors: the users following `id`. Sorted.
  std::span<const NodeId> followers(NodeId id) const { return followers_[id]; }

  bool has_edge(NodeId followee, NodeId follower) const;
  bool has_edge(std::string_view followee, std::string_view follower) const;

  // Followees of a user by name; empty for users outside the network.
  std::vector<std::string_view> followees_of(std::string_view user) const;
  std::size_t followee_count(std::string_view user) const;
  std::size_t follower_count(std::string_view user) const;

  // All (followee, follower) pairs in lexicographic order.
  std::vector<std::pair<NodeId, NodeId>> edges() const;

  std::string digest() const;

 private:
  std::vector<std::string> names_;
  std::map<std::string, NodeId, std::less<>> index_;
  std::vector<std::vector<NodeId>> followees_;
  std::vector<std::vector<NodeId>> followers_;
  std::size_t edge_count_ = 0;
};

FollowerNetwork load_follower_edges(std::istream& in);
// Writes the edge list plus a "[nodes]" section for isolated nodes, so
// load_follower_edges reproduces the same network.
void write_follower_edges(const FollowerNetwork& net, std::ostream& out);

struct PostEvent {
  Timestamp time = 0;
  std::string user;
  std::string hashtag;

  friend auto operator<=>(const PostEvent&, const PostEvent&) = default;
};

// Immutable, time-ordered set of post events. Identical (time, user,
// hashtag) triples are collapsed at construction.
class EventLog {
 public:
  EventLog() = default;
  explicit EventLog(std::vector<PostEvent> events,
                    std::size_t skipped_lines = 0);

  // Sorted by (time, user, hashtag).
  std::span<const PostEvent> events() const { return events_; }
  // Posts of one user sorted by (time, hashtag); empty for unknown users.
  std::span<const PostEvent> posts_by(std::string_view user) const;
  std::vector<std::string> users() const;

  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  // Lines of the source file dropped because they carried no hashtag.
  std::size_t skipped_lines() const { return skipped_lines_; }

  std::string digest() const;

 private:
  std::vector<PostEvent> events_;
  std::vector<PostEvent> by_user_;
  std::map<std::string, std::pair<std::size_t, std::size_t>, std::less<>>
      user_ranges_;
  std::size_t skipped_lines_ = 0;
};

EventLog load_events(std::istream& in);
void write_events(const EventLog& log, std::ostream& out);

class TopicMap {
 public:
  TopicMap() = default;
  // Throws DataError when a hashtag is assigned to two different topics.
  explicit TopicMap(std::span<const std::pair<std::string, std::string>>
                        hashtag_topic_pairs);

  // Topics in lexicographic order; this is the fixed tie-break order.
  const std::vector<std::string>& topics() const { return topics_; }
  std::optional<std::size_t> topic_index(std::string_view topic) const;
  std::optional<std::string_view> topic_of(std::string_view hashtag) const;
  bool contains_topic(std::string_view topic) const {
    return topic_index(topic).has_value();
  }
  // Hashtags of one topic in lexicographic order.
  std::vector<std::string> hashtags_in(std::string_view topic) const;
  const std::map<std::string, std::string, std::less<>>& assignment() const {
    return assignment_;
  }
  // Copy without one hashtag.
  TopicMap without(std::string_view hashtag) const;

  std::string digest() const;

 private:
  std::map<std::string, std::string, std::less<>> assignment_;
  std::vector<std::string> topics_;
};

TopicMap load_topic_map(std::istream& in);
void write_topic_map(const TopicMap& topics, std::ostream& out);

struct Adoption {
  Timestamp first_use = 0;
  std::int64_t uses = 0;
};

using AdopterMap = std::map<std::string, Adoption, std::less<>>;

// First-use, first-exposure and use-count lookups per (user, hashtag).
class AdoptionIndex {
 public:
  std::optional<Timestamp> first_use(std::string_view user,
                                     std::string_view hashtag) const;
  // Earliest first use of the hashtag among the user's followees; absent when
  // no followee ever used it.
  std::optional<Timestamp> first_exposure(std::string_view user,
                                          std::string_view hashtag) const;
  // 0 when the user never used the hashtag.
  std::int64_t use_count(std::string_view user,
                         std::string_view hashtag) const;

  // Users of one hashtag, by name.
  const AdopterMap& adopters(std::string_view hashtag) const;
  // Hashtags of one user with their adoption record, by hashtag.
  const AdopterMap& adoptions_of(std::string_view user) const;

  std::vector<std::string> hashtags() const;

  std::size_t pair_count() const { return pairs_; }
  std::size_t exposure_count() const { return exposures_; }

 private:
  friend AdoptionIndex build_adoption_index(const EventLog&,
                                            const FollowerNetwork&);

  std::map<std::string, AdopterMap, std::less<>> by_hashtag_;
  std::map<std::string, AdopterMap, std::less<>> by_user_;
  std::map<std::string, std::map<std::string, Timestamp, std::less<>>,
           std::less<>>
      exposure_;
  std::size_t pairs_ = 0;
  std::size_t exposures_ = 0;
};

AdoptionIndex build_adoption_index(const EventLog& events,
                                   const FollowerNetwork& net);

// key=value manifest naming the three dataset files. Relative paths resolve
// against the manifest's directory.
struct DatasetManifest {
  std::filesystem::path edges;
  std::filesystem::path events;
  std::filesystem::path topics;
};

DatasetManifest load_manifest(const std::filesystem::path& path);
// Generic key=value reader shared by the manifest and generator configs.
std::map<std::string, std::string> read_key_values(std::istream& in);

struct Dataset {
  FollowerNetwork net;
  EventLog events;
  TopicMap topics;
  AdoptionIndex index;

  std::string edges_digest() const { return net.digest(); }
  std::string events_digest() const { return events.digest(); }
  std::string topics_digest() const { return topics.digest(); }
};

Dataset load_dataset(const DatasetManifest& manifest);
Dataset make_dataset(FollowerNetwork net, EventLog events, TopicMap topics);

}  // namespace smg

#endif  // SMG_INGEST_H_
