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

#ifndef SMG_DIGEST_H_
#define SMG_DIGEST_H_

#include <string>
#include <string_view>

namespace smg {

// Incremental SHA-256; hex() finalizes a copy so the digest can be read
// while more data is still being fed.
class Digest {
 public:
  Digest();
  ~Digest();
  Digest(const Digest& other);
  Digest& operator=(const Digest& other);

  Digest& update(std::string_view bytes);
  // Writes a length-prefixed field so adjacent fields cannot alias.
  Digest& field(std::string_view bytes);
  std::string hex() const;

 private:
  struct State;
  State* state_;
};

std::string sha256_hex(std::string_view bytes);

}  // namespace smg

#endif  // SMG_DIGEST_H_
