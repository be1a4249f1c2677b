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

#include <bit>
#include <cstring>
#include <numeric>
#include <stdexcept>

#include "qsig/arbitrated.hpp"

namespace qsig::arbitrated {

namespace {

constexpr double kValidityThreshold = 1.0 - 1e-9;

std::vector<int> range(int first, int count) {
  std::vector<int> v(static_cast<std::size_t>(count));
  std::iota(v.begin(), v.end(), first);
  return v;
}

Rng party_rng(std::uint64_t seed, std::string_view role) { return Rng(derive_seed(seed, role)); }

}  // namespace

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::kSigma:
      return "SIGMA";
    case Phase::kY:
      return "Y";
    case Phase::kTReply:
      return "T_REPLY";
    case Phase::kAbort:
      return "ABORT";
  }
  return "?";
}

std::string_view to_string(FailureStage stage) {
  switch (stage) {
    case FailureStage::kNone:
      return "none";
    case FailureStage::kBobAuth:
      return "bob_auth";
    case FailureStage::kArbAuthOuter:
      return "arb_auth_outer";
    case FailureStage::kArbAuthInner:
      return "arb_auth_inner";
    case FailureStage::kSigCheck:
      return "sig_check";
    case FailureStage::kBobFinalAuth:
      return "bob_final_auth";
    case FailureStage::kAbort:
      return "abort";
  }
  return "?";
}

std::string_view to_string(Channel channel) {
  switch (channel) {
    case Channel::kSigma:
      return "sigma";
    case Channel::kY:
      return "y";
    case Channel::kTReply:
      return "t_reply";
  }
  return "?";
}

std::vector<std::uint8_t> Metadata::encode() const {
  return {static_cast<std::uint8_t>(phase), static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(stage),
          static_cast<std::uint8_t>(n), static_cast<std::uint8_t>(t)};
}

std::optional<Metadata> Metadata::decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != 5) return std::nullopt;
  if (bytes[0] < 1 || bytes[0] > 4 || bytes[1] > 1 || bytes[2] > 6) return std::nullopt;
  Metadata m;
  m.phase = static_cast<Phase>(bytes[0]);
  m.r = bytes[1];
  m.stage = static_cast<FailureStage>(bytes[2]);
  m.n = bytes[3];
  m.t = bytes[4];
  return m;
}

nlohmann::ordered_json to_json(const VerdictRecord& verdict) {
  nlohmann::ordered_json j;
  j["r"] = verdict.r;
  j["accepted"] = verdict.accepted;
  j["failure_stage"] = to_string(verdict.failure_stage);
  j["recovered_fidelity"] = verdict.recovered_fidelity ? nlohmann::ordered_json(*verdict.recovered_fidelity) : nlohmann::ordered_json();
  return j;
}

auth::MasterSeed session_master(std::uint64_t seed) { return auth::MasterSeed::from_u64(derive_seed(seed, "master")); }

// ---------------------------------------------------------------------------

Alice::Alice(const auth::MasterSeed& master, const SessionConfig& config)
    : config_(config), keys_(master, auth::kAliceLink), rng_(party_rng(config.seed, kAlice)) {}

ProtocolMessage Alice::sign(const qsim::PureState& message, const qsim::PureState& copy) {
  const int n = config_.n;
  if (message.dim() != 2 || copy.dim() != 2 || message.registers() != n || copy.registers() != n) {
    throw std::invalid_argument("message copies must both be n-qubit states");
  }
  const qsim::QubitCircuit sig = signing_circuit(n, draw_sig_selector(keys_));
  const qsim::PureState signed_pair = qsim::tensor(sig.apply(message), copy);
  const auth::AuthKey key = auth::draw_auth_key(keys_, 2 * n + config_.t);
  ProtocolMessage out;
  out.phase = Phase::kSigma;
  out.payload = auth::qauth_encode(signed_pair, key, config_.t);
  out.sender = kAlice;
  out.receiver = kBob;
  return out;
}

// ---------------------------------------------------------------------------

Bob::Bob(const auth::MasterSeed& master, const SessionConfig& config)
    : config_(config), keys_(master, auth::kBobLink), rng_(party_rng(config.seed, kBob)) {}

ProtocolMessage Bob::wrap(const ProtocolMessage& sigma) {
  const int width = 2 * config_.n + config_.t;
  auth::QotpKey pad = auth::draw_qotp_key(keys_, 2, width);
  const auth::AuthKey key = auth::draw_auth_key(keys_, width + config_.t);
  ProtocolMessage out = wrap_with(sigma, pad, key.clifford());
  out.payload->key_id = key.key_id;
  return out;
}

ProtocolMessage Bob::wrap_with(const ProtocolMessage& sigma, const auth::QotpKey& pad,
                               const auth::CliffordOp& clifford) const {
  const int n = config_.n;
  const int t = config_.t;
  if (sigma.phase != Phase::kSigma || !sigma.payload || sigma.payload->n != 2 * n || sigma.payload->t != t ||
      sigma.payload->payload.registers() != 2 * n + t || sigma.payload->payload.dim() != 2) {
    throw std::invalid_argument("malformed sigma message");
  }
  const qsim::PureState padded = auth::qotp(sigma.payload->payload, pad, auth::Direction::kEncrypt);
  ProtocolMessage out;
  out.phase = Phase::kY;
  out.payload = auth::qauth_encode(padded, clifford, t, 0);
  out.sender = kBob;
  out.receiver = kArbiter;
  return out;
}

VerdictRecord Bob::finalize(const ProtocolMessage& reply) {
  const int n = config_.n;
  const int t = config_.t;
  const auth::MacKey mac = auth::draw_mac_key(keys_, config_.b);
  VerdictRecord v;
  v.failure_stage = FailureStage::kAbort;

  const auto meta = Metadata::decode(reply.metadata);
  const bool mac_ok = meta && reply.tag && auth::wc_check(mac, reply.metadata, *reply.tag);
  const bool shape_ok = meta && meta->phase == reply.phase && meta->n == n && meta->t == t;

  if (reply.phase == Phase::kAbort) {
    if (mac_ok && shape_ok) v.failure_stage = meta->stage;
    return v;
  }
  if (reply.phase != Phase::kTReply || !reply.payload || reply.payload->n != 2 * n || reply.payload->t != t ||
      reply.payload->payload.registers() != 2 * n + t || reply.payload->payload.dim() != 2) {
    return v;
  }
  const auth::AuthKey key = auth::draw_auth_key(keys_, 2 * n + t);
  auth::QauthResult opened = auth::qauth_verify(*reply.payload, key, rng_);
  if (!opened.accept) {
    v.failure_stage = FailureStage::kBobFinalAuth;
    return v;
  }
  if (!mac_ok) {
    v.failure_stage = FailureStage::kBobAuth;
    return v;
  }
  if (!shape_ok) return v;
  v.r = meta->r;
  if (v.r != 1) {
    v.failure_stage = meta->stage == FailureStage::kNone ? FailureStage::kSigCheck : meta->stage;
    return v;
  }
  v.accepted = true;
  v.failure_stage = FailureStage::kNone;
  const std::vector<int> signed_block = range(n, n);
  v.recovered_message = qsim::measure_and_discard(opened.stripped, signed_block, rng_).post_state;
  return v;
}

// ---------------------------------------------------------------------------

Arbiter::Arbiter(const auth::MasterSeed& master, const SessionConfig& config)
    : config_(config),
      alice_auth_(master, auth::kAliceLink),
      alice_sig_(master, auth::kAliceLink),
      bob_(master, auth::kBobLink),
      rng_(party_rng(config.seed, kArbiter)) {}

void Arbiter::rebind_alice(const auth::MasterSeed& other, KeyBinding binding) {
  const auth::KeyStore substitute(other, auth::kAliceLink);
  alice_sig_ = substitute;
  if (binding == KeyBinding::kFull) alice_auth_ = substitute;
}

ProtocolMessage Arbiter::reply(Phase phase, int r, FailureStage stage, std::optional<auth::AuthBlock> payload) {
  auth::MacKey mac = auth::draw_mac_key(bob_, config_.b);
  ProtocolMessage out;
  out.phase = phase;
  out.payload = std::move(payload);
  out.metadata = Metadata{phase, r, stage, config_.n, config_.t}.encode();
  out.tag = auth::wc_tag(mac, out.metadata);
  out.sender = kArbiter;
  out.receiver = kBob;
  return out;
}

ProtocolMessage Arbiter::adjudicate(const ProtocolMessage& y) {
  const int n = config_.n;
  const int t = config_.t;
  const int sigma_width = 2 * n + t;
  if (y.phase != Phase::kY || !y.payload || y.payload->n != sigma_width || y.payload->t != t ||
      y.payload->payload.registers() != sigma_width + t || y.payload->payload.dim() != 2) {
    return reply(Phase::kAbort, 0, FailureStage::kAbort, std::nullopt);
  }

  const auth::AuthKey outer_key = auth::draw_auth_key(bob_, sigma_width + t);
  auth::QauthResult outer = auth::qauth_verify(*y.payload, outer_key, rng_);
  if (!outer.accept) return reply(Phase::kAbort, 0, FailureStage::kArbAuthOuter, std::nullopt);

  const auth::QotpKey pad = auth::draw_qotp_key(bob_, 2, sigma_width);
  const qsim::PureState sigma = auth::qotp(outer.stripped, pad, auth::Direction::kDecrypt);

  const auth::AuthKey inner_key = auth::draw_auth_key(alice_auth_, sigma_width);
  auth::QauthResult inner = auth::qauth_verify(auth::AuthBlock{sigma, 2 * n, t, inner_key.key_id}, inner_key, rng_);
  if (!inner.accept) return reply(Phase::kAbort, 0, FailureStage::kArbAuthInner, std::nullopt);

  const qsim::QubitCircuit sig = signing_circuit(n, draw_sig_selector(alice_sig_));
  qsim::PureState pair = sig.inverse().apply(inner.stripped);
  const std::vector<int> block_a = range(0, n);
  const std::vector<int> block_b = range(n, n);
  bool valid = false;
  if (config_.mode == Mode::kReferee) {
    valid = qsim::exchange_expectation(pair, block_a, block_b) >= kValidityThreshold;
  } else {
    qsim::MeasurementRecord m = qsim::symmetric_subspace_measure(pair, block_a, block_b, rng_);
    valid = m.outcome == qsim::kAccept;
    pair = std::move(m.post_state);
  }
  // [plain, Sig(plain)]
  const qsim::PureState resigned = sig.apply(pair, n);
  const auth::AuthKey reply_key = auth::draw_auth_key(bob_, 2 * n + t);
  const int r = valid ? 1 : 0;
  return reply(Phase::kTReply, r, valid ? FailureStage::kNone : FailureStage::kSigCheck,
               auth::qauth_encode(resigned, reply_key, t));
}

// ---------------------------------------------------------------------------

ProtocolMessage identity_hook(Channel, ProtocolMessage message) { return message; }

std::string message_digest(const ProtocolMessage& message) {
  crypto_generichash_state st;
  crypto_generichash_init(&st, nullptr, 0, crypto_generichash_BYTES);
  const auto feed_u64 = [&st](std::uint64_t v) {
    std::uint8_t bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<std::uint8_t>(v >> (8 * i));
    crypto_generichash_update(&st, bytes, sizeof(bytes));
  };
  feed_u64(static_cast<std::uint64_t>(message.phase));
  if (message.payload) {
    feed_u64(static_cast<std::uint64_t>(message.payload->payload.registers()));
    std::vector<std::uint8_t> bytes;
    bytes.reserve(16 * message.payload->payload.size());
    for (const qsim::Amplitude& a : message.payload->payload.amps()) {
      for (const double part : {a.real(), a.imag()}) {
        const auto v = std::bit_cast<std::uint64_t>(part);
        for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
      }
    }
    crypto_generichash_update(&st, bytes.data(), bytes.size());
  }
  feed_u64(message.metadata.size());
  crypto_generichash_update(&st, message.metadata.data(), message.metadata.size());
  if (message.tag) feed_u64(message.tag->value);
  std::array<std::uint8_t, crypto_generichash_BYTES> out{};
  crypto_generichash_final(&st, out.data(), out.size());
  std::string hex(2 * out.size() + 1, '\0');
  sodium_bin2hex(hex.data(), hex.size(), out.data(), out.size());
  hex.pop_back();
  return hex;
}

std::string Transcript::to_jsonl() const {
  std::string out;
  for (const TranscriptEvent& e : events) {
    nlohmann::ordered_json j;
    j["event"] = e.event;
    j["party"] = e.party;
    j["digest"] = e.digest;
    j["draws"] = e.draws;
    out += j.dump();
    out += '\n';
  }
  nlohmann::ordered_json last;
  last["verdict"] = to_json(verdict);
  out += last.dump();
  out += '\n';
  return out;
}

Transcript run_session(const SessionConfig& config, const qsim::PureState& message, const AdversaryHook& hook,
                       const SessionOptions& options) {
  if (config.n < 1 || config.t < 0) throw std::invalid_argument("session needs n >= 1 and t >= 0");
  if (sodium_init() < 0) throw std::runtime_error("libsodium failed to initialize");
  const auth::MasterSeed master = session_master(config.seed);
  Alice alice(master, config);
  Bob bob(master, config);
  Arbiter arbiter(master, config);
  if (options.arbiter_alice_override) arbiter.rebind_alice(*options.arbiter_alice_override, options.binding);

  Transcript tr;
  const auto log = [&tr, &options](std::string event, std::string_view party, const ProtocolMessage& m, std::uint64_t draws) {
    tr.events.push_back(TranscriptEvent{std::move(event), std::string(party), options.digests ? message_digest(m) : std::string(), draws});
  };

  ProtocolMessage sigma = alice.sign(message, message);
  log("alice_sign", kAlice, sigma, alice.rng().draws());
  sigma = hook(Channel::kSigma, std::move(sigma));
  log("channel_sigma", "channel", sigma, 0);

  ProtocolMessage y;
  try {
    y = bob.wrap(sigma);
  } catch (const std::invalid_argument&) {
    tr.verdict.failure_stage = FailureStage::kAbort;
    return tr;
  }
  log("bob_wrap", kBob, y, bob.rng().draws());
  y = hook(Channel::kY, std::move(y));
  log("channel_y", "channel", y, 0);

  ProtocolMessage t = arbiter.adjudicate(y);
  log("arbiter_adjudicate", kArbiter, t, arbiter.rng().draws());
  t = hook(Channel::kTReply, std::move(t));
  log("channel_t_reply", "channel", t, 0);

  tr.verdict = bob.finalize(t);
  if (config.mode == Mode::kReferee && tr.verdict.recovered_message) {
    tr.verdict.recovered_fidelity = qsim::fidelity(*tr.verdict.recovered_message, message);
  }
  tr.events.push_back(TranscriptEvent{"bob_finalize", std::string(kBob), "", bob.rng().draws()});
  return tr;
}

}  // namespace qsig::arbitrated
