// Copyright 2026 The qsig Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sodium.h>

#include <cstring>
#include <stdexcept>

#include "qsig/authcrypto.hpp"

namespace qsig::auth {

namespace {

void ensure_sodium() {
  static const int status = sodium_init();
  if (status < 0) throw std::runtime_error("libsodium failed to initialize");
}

std::size_t purpose_slot(KeyPurpose p) { return static_cast<std::size_t>(p); }

}  // namespace

MasterSeed MasterSeed::from_u64(std::uint64_t seed) {
  ensure_sodium();
  std::uint8_t in[8];
  for (int i = 0; i < 8; ++i) in[i] = static_cast<std::uint8_t>(seed >> (8 * i));
  static constexpr char kContext[] = "qsig master seed";
  MasterSeed m;
  crypto_generichash(m.bytes.data(), m.bytes.size(), in, sizeof(in),
                     reinterpret_cast<const unsigned char*>(kContext), sizeof(kContext) - 1);
  return m;
}

MasterSeed MasterSeed::from_hex(std::string_view hex) {
  ensure_sodium();
  MasterSeed m;
  std::size_t written = 0;
  if (hex.size() != 2 * m.bytes.size() ||
      sodium_hex2bin(m.bytes.data(), m.bytes.size(), hex.data(), hex.size(), nullptr, &written, nullptr) != 0 ||
      written != m.bytes.size()) {
    throw std::invalid_argument("master seed must be 64 hex characters");
  }
  return m;
}

std::string MasterSeed::hex() const {
  std::string out(2 * bytes.size() + 1, '\0');
  sodium_bin2hex(out.data(), out.size(), bytes.data(), bytes.size());
  out.pop_back();
  return out;
}

KeyStore::KeyStore(const MasterSeed& master, std::string_view role) : role_(role) {
  ensure_sodium();
  const std::string msg = "link:" + role_;
  crypto_generichash(link_key_.data(), link_key_.size(), reinterpret_cast<const unsigned char*>(msg.data()),
                     msg.size(), master.bytes.data(), master.bytes.size());
}

std::array<std::uint8_t, KeyStore::kBlockBytes> KeyStore::next_block(KeyPurpose purpose) {
  const std::uint64_t counter = counters_[purpose_slot(purpose)]++;
  std::uint8_t msg[9];
  msg[0] = static_cast<std::uint8_t>(purpose);
  for (int i = 0; i < 8; ++i) msg[1 + i] = static_cast<std::uint8_t>(counter >> (8 * i));
  std::array<std::uint8_t, kBlockBytes> block{};
  crypto_generichash(block.data(), block.size(), msg, sizeof(msg), link_key_.data(), link_key_.size());
  return block;
}

std::uint64_t KeyStore::counter(KeyPurpose purpose) const { return counters_[purpose_slot(purpose)]; }

KeyStore derive_keys(const MasterSeed& master, std::string_view role) { return KeyStore(master, role); }

std::uint8_t KeyStream::next_byte() {
  if (pos_ == block_.size()) {
    block_ = store_.next_block(purpose_);
    pos_ = 0;
  }
  return block_[pos_++];
}

std::uint64_t KeyStream::next_u64() {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(next_byte()) << (8 * i);
  return v;
}

std::uint64_t KeyStream::below(std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t x = next_u64();
  while (x >= limit) x = next_u64();
  return x % bound;
}

nlohmann::json to_json(const KeyFile& file) {
  return {{"master_seed", file.master_seed.hex()},
          {"b", file.b},
          {"t", file.t},
          {"derivation_policy", file.derivation_policy}};
}

KeyFile key_file_from_json(const nlohmann::json& j) {
  KeyFile f;
  f.master_seed = MasterSeed::from_hex(j.at("master_seed").get<std::string>());
  f.b = j.at("b").get<int>();
  f.t = j.at("t").get<int>();
  f.derivation_policy = j.at("derivation_policy").get<std::string>();
  if (f.derivation_policy != kDerivationPolicy) throw std::invalid_argument("unknown key derivation policy");
  return f;
}

}  // namespace qsig::auth
