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

#include "smg/digest.h"

#include <openssl/evp.h>

#include <array>
#include <stdexcept>
#include <string>

namespace smg {

struct Digest::State {
  EVP_MD_CTX* ctx = nullptr;
};

Digest::Digest() : state_(new State) {
  state_->ctx = EVP_MD_CTX_new();
  if (state_->ctx == nullptr ||
      EVP_DigestInit_ex(state_->ctx, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 init failed");
  }
}

Digest::~Digest() {
  EVP_MD_CTX_free(state_->ctx);
  delete state_;
}

Digest::Digest(const Digest& other) : state_(new State) {
  state_->ctx = EVP_MD_CTX_new();
  EVP_MD_CTX_copy_ex(state_->ctx, other.state_->ctx);
}

Digest& Digest::operator=(const Digest& other) {
  if (this != &other) EVP_MD_CTX_copy_ex(state_->ctx, other.state_->ctx);
  return *this;
}

Digest& Digest::update(std::string_view bytes) {
  EVP_DigestUpdate(state_->ctx, bytes.data(), bytes.size());
  return *this;
}

Digest& Digest::field(std::string_view bytes) {
  update(std::to_string(bytes.size()));
  update(":");
  update(bytes);
  return *this;
}

std::string Digest::hex() const {
  EVP_MD_CTX* copy = EVP_MD_CTX_new();
  EVP_MD_CTX_copy_ex(copy, state_->ctx);
  std::array<unsigned char, EVP_MAX_MD_SIZE> out{};
  unsigned int length = 0;
  EVP_DigestFinal_ex(copy, out.data(), &length);
  EVP_MD_CTX_free(copy);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string result;
  result.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    result.push_back(kHex[out[i] >> 4]);
    result.push_back(kHex[out[i] & 0xf]);
  }
  return result;
}

std::string sha256_hex(std::string_view bytes) {
  return Digest().update(bytes).hex();
}

}  // namespace smg
