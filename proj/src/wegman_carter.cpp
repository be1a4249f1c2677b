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

#include <stdexcept>

#include "qsig/authcrypto.hpp"

namespace qsig::auth {

namespace {

// Low terms of the primitive reduction polynomials (the x^b term is implicit):
//   b = 16: x^16 + x^5 + x^3 + x^2 + 1
//   b = 32: x^32 + x^7 + x^5 + x^3 + x^2 + x + 1
//   b = 64: x^64 + x^4 + x^3 + x + 1
std::uint64_t reduction_low(int bits) {
  switch (bits) {
    case 16:
      return 0x2D;
    case 32:
      return 0xAF;
    case 64:
      return 0x1B;
    default:
      throw std::invalid_argument("MAC field size must be 16, 32 or 64 bits");
  }
}

std::uint64_t field_mask(int bits) { return bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1; }

}  // namespace

std::uint64_t gf2_mul(std::uint64_t a, std::uint64_t b, int bits) {
  const std::uint64_t poly = reduction_low(bits);
  const std::uint64_t mask = field_mask(bits);
  const std::uint64_t top = std::uint64_t{1} << (bits - 1);
  a &= mask;
  b &= mask;
  std::uint64_t r = 0;
  while (b != 0) {
    if (b & 1) r ^= a;
    b >>= 1;
    const bool carry = (a & top) != 0;
    a = (a << 1) & mask;
    if (carry) a ^= poly;
  }
  return r;
}

std::uint64_t gf2_pow(std::uint64_t a, std::uint64_t e, int bits) {
  std::uint64_t result = 1;
  while (e != 0) {
    if (e & 1) result = gf2_mul(result, a, bits);
    a = gf2_mul(a, a, bits);
    e >>= 1;
  }
  return result;
}

MacKey draw_mac_key(KeyStore& store, int bits) {
  const std::uint64_t mask = field_mask(bits);
  (void)reduction_low(bits);
  KeyStream stream(store, KeyPurpose::kMac);
  MacKey key;
  key.bits = bits;
  key.hash_key = stream.next_u64() & mask;
  key.pad = stream.next_u64() & mask;
  return key;
}

namespace {

std::uint64_t poly_hash(std::uint64_t hash_key, int bits, std::span<const std::uint8_t> message) {
  const std::size_t block_bytes = static_cast<std::size_t>(bits) / 8;
  std::uint64_t h = 0;
  for (std::size_t start = 0; start < message.size(); start += block_bytes) {
    std::uint64_t block = 0;
    for (std::size_t i = 0; i < block_bytes; ++i) {
      const std::size_t at = start + i;
      block = (block << 8) | (at < message.size() ? message[at] : 0);
    }
    h = gf2_mul(h ^ block, hash_key, bits);
  }
  return h;
}

}  // namespace

MacTag wc_tag(MacKey& key, std::span<const std::uint8_t> message) {
  if (key.spent) throw std::logic_error("Wegman-Carter pad reuse");
  key.spent = true;
  return MacTag{key.bits, poly_hash(key.hash_key, key.bits, message) ^ key.pad};
}

bool wc_check(const MacKey& key, std::span<const std::uint8_t> message, const MacTag& tag) {
  if (tag.bits != key.bits) return false;
  return (poly_hash(key.hash_key, key.bits, message) ^ key.pad) == tag.value;
}

}  // namespace qsig::auth
