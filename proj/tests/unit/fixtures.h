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

#ifndef SMG_TESTS_UNIT_FIXTURES_H_
#define SMG_TESTS_UNIT_FIXTURES_H_

#include <string>
#include <utility>
#include <vector>

#include "oracles/brute_force.h"
#include "smg/ingest.h"

namespace smg::testing {

using EdgeList = std::vector<std::pair<std::string, std::string>>;

inline Dataset dataset_of(const EdgeList& edges, std::vector<PostEvent> events,
                          const EdgeList& topic_pairs,
                          const std::vector<std::string>& extra_nodes = {}) {
  return make_dataset(FollowerNetwork::from_edges(edges, extra_nodes),
                      EventLog(std::move(events)), TopicMap(topic_pairs));
}

// Two followees A and C of B; one topic T = {x, y}.
inline Dataset toy_log() {
  return dataset_of({{"A", "B"}, {"C", "B"}},
                    {{10, "A", "x"}, {12, "C", "x"}, {14, "C", "y"},
                     {20, "B", "x"}, {21, "B", "x"}},
                    {{"x", "T"}, {"y", "T"}});
}

inline Dataset dataset_of(const oracle::RawLog& raw) {
  EdgeList topics(raw.topic_of.begin(), raw.topic_of.end());
  std::vector<std::string> users;
  for (const auto& e : raw.events) users.push_back(e.user);
  return dataset_of(raw.edges, raw.events, topics, users);
}

}  // namespace smg::testing

#endif  // SMG_TESTS_UNIT_FIXTURES_H_
