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

#pragma once

// Key management plus the authentication and encryption primitives of the
// arbitrated protocol: a Wegman-Carter MAC for classical fields, the
// generalized-Pauli one-time pad, and a Clifford-code authenticator with
// trap qubits for quantum payloads.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qsig/qsim.hpp"
#include "qsig/rng.hpp"

namespace qsig::auth {

// ---------------------------------------------------------------------------
// Keys

enum class KeyPurpose : std::uint8_t { kQotp = 1, kMac = 2, kAuth = 3, kSig = 4 };

inline constexpr std::string_view kAliceLink = "alice-arbiter";
inline constexpr std::string_view kBobLink = "bob-arbiter";
inline constexpr std::string_view kDerivationPolicy = "blake2b-link-purpose-counter/v1";

struct MasterSeed {
  std::array<std::uint8_t, 32> bytes{};

  /// Expands a 64-bit seed into 32 bytes of seed material.
  static MasterSeed from_u64(std::uint64_t seed);
  static MasterSeed from_hex(std::string_view hex);
  std::string hex() const;
  bool operator==(const MasterSeed&) const = default;
};

/// Symmetric key material shared by one party and the arbitrator, standing
/// in for a QKD-established key. Subkeys are drawn in 64-byte blocks keyed
/// by (purpose, counter); a block is never handed out twice.
class KeyStore {
 public:
  static constexpr std::size_t kBlockBytes = 64;

  KeyStore(const MasterSeed& master, std::string_view role);

  const std::string& role() const { return role_; }
  const std::array<std::uint8_t, 32>& link_key() const { return link_key_; }

  /// Next unused block for `purpose`; advances that purpose's counter.
  std::array<std::uint8_t, kBlockBytes> next_block(KeyPurpose purpose);
  std::uint64_t counter(KeyPurpose purpose) const;

 private:
  std::string role_;
  std::array<std::uint8_t, 32> link_key_{};
  std::array<std::uint64_t, 5> counters_{};
};

KeyStore derive_keys(const MasterSeed& master, std::string_view role);

/// Byte stream over consecutive blocks of one purpose. Bytes left in the
/// last block when the stream is dropped are discarded.
class KeyStream {
 public:
  KeyStream(KeyStore& store, KeyPurpose purpose) : store_(store), purpose_(purpose) {}

  std::uint8_t next_byte();
  std::uint64_t next_u64();
  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  KeyStore& store_;
  KeyPurpose purpose_;
  std::array<std::uint8_t, KeyStore::kBlockBytes> block_{};
  std::size_t pos_ = KeyStore::kBlockBytes;
};

/// Key file: {"master_seed": hex, "b": ..., "t": ..., "derivation_policy": id}.
struct KeyFile {
  MasterSeed master_seed;
  int b = 16;
  int t = 4;
  std::string derivation_policy{kDerivationPolicy};
};

nlohmann::json to_json(const KeyFile& file);
KeyFile key_file_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Wegman-Carter MAC over GF(2^b), b in {16, 32, 64}

/// Multiplication in GF(2^b) with the library's fixed reduction polynomial.
std::uint64_t gf2_mul(std::uint64_t a, std::uint64_t b, int bits);
std::uint64_t gf2_pow(std::uint64_t a, std::uint64_t e, int bits);

struct MacTag {
  int bits = 16;
  std::uint64_t value = 0;
  bool operator==(const MacTag&) const = default;
};

struct MacKey {
  int bits = 16;
  std::uint64_t hash_key = 0;
  std::uint64_t pad = 0;
  bool spent = false;
};

MacKey draw_mac_key(KeyStore& store, int bits);

/// Polynomial hash of the message (packed big-endian into b-bit blocks,
/// zero-filled) masked with the pad. Callers use fixed-length framing.
/// Throws std::logic_error if this key's pad was already used.
MacTag wc_tag(MacKey& key, std::span<const std::uint8_t> message);
bool wc_check(const MacKey& key, std::span<const std::uint8_t> message, const MacTag& tag);

// ---------------------------------------------------------------------------
// Generalized-Pauli one-time pad

struct QotpKey {
  int d = 2;
  std::vector<std::pair<int, int>> digits;  // (x power, z power) per register
};

QotpKey draw_qotp_key(KeyStore& store, int d, int registers);

enum class Direction { kEncrypt, kDecrypt };

/// Encrypt applies X^a Z^b to each register; decrypt applies the inverse.
qsim::PureState qotp(const qsim::PureState& state, const QotpKey& key, Direction direction);

// ---------------------------------------------------------------------------
// Clifford-code authentication (qubits)

/// Largest register count sample_clifford accepts.
inline constexpr int kMaxCliffordQubits = 20;

/// Clifford that maps computational basis states to phased basis states:
/// |x> -> i^{e(y)} |y ^ post> with y = A (x ^ pre) and
/// e(y) = sum_j l_j y_j + 2 sum_{j<k} Q_jk y_j y_k (mod 4).
/// Bit j is bit j of the amplitude index (qubit m-1-j).
struct MonomialClifford {
  int bits = 0;
  std::vector<std::uint32_t> columns;     // A e_j; A invertible over GF(2)
  std::uint32_t pre = 0;
  std::uint32_t post = 0;
  std::vector<std::uint8_t> phase_power;  // l_j in Z_4
  std::vector<std::uint32_t> cz_rows;     // bit k of cz_rows[j] is Q_jk, k > j

  static MonomialClifford identity(int bits);
  /// Uniform over this subgroup modulo global phase.
  static MonomialClifford sample(int bits, Rng& rng);
};

/// left * H^{(x)h} * right, with the Hadamards on index bits 0..h-1. Every
/// Clifford has this form up to global phase. Applying it costs h + 2
/// passes over the state.
struct CliffordOp {
  MonomialClifford right;
  int hadamards = 0;
  MonomialClifford left;

  int qubits() const { return right.bits; }
  static CliffordOp identity(int m);

  /// Acts on all registers of `state`, which must have qubits() registers.
  qsim::PureState apply(const qsim::PureState& state) const;
  qsim::PureState apply_inverse(const qsim::PureState& state) const;
  /// Dense row-major 2^m x 2^m matrix; m is capped at 10.
  std::vector<qsim::Amplitude> to_matrix() const;
};

/// Uniformly random m-qubit Clifford up to global phase, 1 <= m <= 20.
/// The Hadamard count h is drawn with the probability of its double coset
/// in the Bruhat decomposition relative to the monomial subgroup; both
/// monomial factors are uniform.
CliffordOp sample_clifford(int m, Rng& rng);

struct AuthKey {
  int qubits = 0;
  std::uint64_t selector = 0;      // seeds the uniform Clifford
  std::vector<std::uint8_t> pad;   // 2 * qubits bits: x then z per qubit
  std::uint64_t key_id = 0;

  /// The Pauli from `pad` applied after the Clifford seeded by `selector`.
  CliffordOp clifford() const;
};

AuthKey draw_auth_key(KeyStore& store, int qubits);

struct AuthBlock {
  qsim::PureState payload;  // n + t registers, traps last
  int n = 0;
  int t = 0;
  std::uint64_t key_id = 0;
};

/// Appends t |0> traps and applies the keyed Clifford on all n + t qubits.
/// t = 0 is accepted but provides no authentication; a warning is logged
/// once per process.
AuthBlock qauth_encode(const qsim::PureState& state, const AuthKey& key, int t);
/// Same with an explicit Clifford on n + t qubits.
AuthBlock qauth_encode(const qsim::PureState& state, const CliffordOp& clifford, int t, std::uint64_t key_id);

struct QauthResult {
  bool accept = false;
  qsim::PureState stripped;
};

/// Undoes the Clifford, measures the traps, accepts iff all read 0.
/// `stripped` holds the first n registers conditioned on the trap outcome.
QauthResult qauth_verify(const AuthBlock& block, const AuthKey& key, Rng& rng);

}  // namespace qsig::auth
