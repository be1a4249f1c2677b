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

// Three-party arbitrated signature protocol on qubits. Alice signs with a
// key shared with the arbiter, Bob pads and re-authenticates under his own
// key, the arbiter checks both layers and the signature, and Bob accepts
// only an authenticated reply carrying r = 1.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qsig/authcrypto.hpp"
#include "qsig/mode.hpp"
#include "qsig/qsim.hpp"
#include "qsig/qubit_circuit.hpp"
#include "qsig/rng.hpp"

namespace qsig::arbitrated {

enum class Phase : std::uint8_t { kSigma = 1, kY = 2, kTReply = 3, kAbort = 4 };

enum class FailureStage : std::uint8_t {
  kNone = 0,
  kBobAuth = 1,        // MAC on the reply metadata rejected
  kArbAuthOuter = 2,   // Bob's authentication layer rejected by the arbiter
  kArbAuthInner = 3,   // Alice's authentication layer rejected by the arbiter
  kSigCheck = 4,       // signature did not match the plain copy (r = 0)
  kBobFinalAuth = 5,   // authentication layer on the reply rejected by Bob
  kAbort = 6,          // malformed message
};

std::string_view to_string(Phase phase);
std::string_view to_string(FailureStage stage);

// ---------------------------------------------------------------------------
// Keyed signing transformation

/// Keyed n-qubit circuit with max(n, 2) rounds of three layers: a T or
/// T-dagger per qubit, H or S*H per qubit, then either a nearest-neighbour
/// CNOT ladder (random directions) or a random Pauli per qubit. The T
/// layers keep Pauli conjugates of the circuit out of the Pauli group.
qsim::QubitCircuit signing_circuit(int n, std::uint64_t selector);

std::uint64_t draw_sig_selector(auth::KeyStore& store);

// ---------------------------------------------------------------------------
// Messages

struct SessionConfig {
  int n = 2;
  int t = 4;
  int b = 16;
  Mode mode = Mode::kReferee;
  std::uint64_t seed = 0;
};

/// Fixed-length classical header authenticated by the reply MAC.
struct Metadata {
  Phase phase = Phase::kTReply;
  int r = 0;
  FailureStage stage = FailureStage::kNone;
  int n = 0;
  int t = 0;

  std::vector<std::uint8_t> encode() const;
  /// nullopt unless exactly five bytes with valid enum values.
  static std::optional<Metadata> decode(std::span<const std::uint8_t> bytes);
};

/// SIGMA and Y carry a payload and no metadata. T_REPLY carries both;
/// ABORT carries metadata only. Metadata is always MAC-tagged.
struct ProtocolMessage {
  Phase phase = Phase::kSigma;
  std::optional<auth::AuthBlock> payload;
  std::vector<std::uint8_t> metadata;
  std::optional<auth::MacTag> tag;
  std::string sender;
  std::string receiver;
};

struct VerdictRecord {
  int r = 0;
  bool accepted = false;
  FailureStage failure_stage = FailureStage::kNone;
  std::optional<qsim::PureState> recovered_message;
  std::optional<double> recovered_fidelity;
};

nlohmann::ordered_json to_json(const VerdictRecord& verdict);

// ---------------------------------------------------------------------------
// Parties

/// Role name used for each party's measurement randomness.
inline constexpr std::string_view kAlice = "alice";
inline constexpr std::string_view kBob = "bob";
inline constexpr std::string_view kArbiter = "arbiter";

class Alice {
 public:
  Alice(const auth::MasterSeed& master, const SessionConfig& config);

  /// sigma = Aut_KA(Sig_KA(message) (x) copy). Both copies are consumed.
  ProtocolMessage sign(const qsim::PureState& message, const qsim::PureState& copy);

  const auth::KeyStore& keys() const { return keys_; }
  const Rng& rng() const { return rng_; }

 private:
  SessionConfig config_;
  auth::KeyStore keys_;
  Rng rng_;
};

class Bob {
 public:
  Bob(const auth::MasterSeed& master, const SessionConfig& config);

  /// Y = Aut_KB(pad_KB(sigma)). Throws std::invalid_argument on a
  /// malformed sigma.
  ProtocolMessage wrap(const ProtocolMessage& sigma);
  /// wrap with explicit pad and Clifford; draws no keys.
  ProtocolMessage wrap_with(const ProtocolMessage& sigma, const auth::QotpKey& pad,
                            const auth::CliffordOp& clifford) const;

  VerdictRecord finalize(const ProtocolMessage& reply);

  const auth::KeyStore& keys() const { return keys_; }
  const Rng& rng() const { return rng_; }

 private:
  SessionConfig config_;
  auth::KeyStore keys_;
  Rng rng_;
};

/// Which of Alice's keys the arbiter uses from a substituted store.
enum class KeyBinding { kSigOnly, kFull };

class Arbiter {
 public:
  Arbiter(const auth::MasterSeed& master, const SessionConfig& config);

  /// Replaces the arbiter's copy of Alice's key material with the store
  /// derived from `other`.
  void rebind_alice(const auth::MasterSeed& other, KeyBinding binding);

  /// Reply T = Aut_KB(plain (x) Sig_KA(plain)) with r in the metadata, or
  /// an ABORT naming the failed stage.
  ProtocolMessage adjudicate(const ProtocolMessage& y);

  const auth::KeyStore& alice_keys() const { return alice_auth_; }
  const auth::KeyStore& bob_keys() const { return bob_; }
  const Rng& rng() const { return rng_; }

 private:
  ProtocolMessage reply(Phase phase, int r, FailureStage stage, std::optional<auth::AuthBlock> payload);

  SessionConfig config_;
  auth::KeyStore alice_auth_;
  auth::KeyStore alice_sig_;
  auth::KeyStore bob_;
  Rng rng_;
};

/// Master seed of a session: every party's key store derives from it.
auth::MasterSeed session_master(std::uint64_t seed);

// ---------------------------------------------------------------------------
// Sessions

enum class Channel { kSigma, kY, kTReply };

std::string_view to_string(Channel channel);

/// Interposed on every channel hop; the identity hook forwards unchanged.
using AdversaryHook = std::function<ProtocolMessage(Channel, ProtocolMessage)>;

ProtocolMessage identity_hook(Channel channel, ProtocolMessage message);

struct TranscriptEvent {
  std::string event;
  std::string party;
  std::string digest;  // BLAKE2b-256 hex of payload amplitudes and metadata
  std::uint64_t draws = 0;
};

struct Transcript {
  std::vector<TranscriptEvent> events;
  VerdictRecord verdict;

  /// One JSON object per line; the last line holds the verdict.
  std::string to_jsonl() const;
};

std::string message_digest(const ProtocolMessage& message);

/// Hooks for a session beyond the channel adversary.
struct SessionOptions {
  std::optional<auth::MasterSeed> arbiter_alice_override;
  KeyBinding binding = KeyBinding::kSigOnly;
  bool digests = true;  // false leaves TranscriptEvent::digest empty
};

/// Signs `message` (two prepared copies), runs all three phases through
/// `hook`, and returns the transcript. In referee mode the verdict carries
/// the recovered message's fidelity with `message`.
Transcript run_session(const SessionConfig& config, const qsim::PureState& message,
                       const AdversaryHook& hook = identity_hook, const SessionOptions& options = {});

}  // namespace qsig::arbitrated
