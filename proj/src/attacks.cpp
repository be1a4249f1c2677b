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

#include "qsig/attacks.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "qsig/authcrypto.hpp"
#include "qsig/fieldcode.hpp"

namespace qsig::attacks {

namespace {

using arbitrated::Channel;
using arbitrated::ProtocolMessage;

struct TrialOutcome {
  bool accepted = false;
  std::string stage = "none";
  double value = std::numeric_limits<double>::quiet_NaN();
  bool flag = false;
};

std::uint64_t trial_seed(const Scenario& s, int index) {
  return derive_seed(s.seed, s.name, static_cast<std::uint64_t>(index));
}

// Non-identity Pauli on m qubits as (x, z) bits per qubit.
std::vector<std::pair<int, int>> random_pauli(int m, Rng& rng) {
  std::vector<std::pair<int, int>> p(static_cast<std::size_t>(m));
  bool identity = true;
  do {
    identity = true;
    for (auto& [x, z] : p) {
      x = rng.coin() ? 1 : 0;
      z = rng.coin() ? 1 : 0;
      identity = identity && x == 0 && z == 0;
    }
  } while (identity);
  return p;
}

qsim::PureState apply_pauli_string(qsim::PureState state, const std::vector<std::pair<int, int>>& p, int offset) {
  for (std::size_t q = 0; q < p.size(); ++q) {
    if (p[q].first != 0 || p[q].second != 0) {
      state = qsim::apply_pauli(state, offset + static_cast<int>(q), p[q].first, p[q].second);
    }
  }
  return state;
}

Channel parse_channel(std::string_view name) {
  if (name == "sigma") return Channel::kSigma;
  if (name == "y") return Channel::kY;
  if (name == "t_reply") return Channel::kTReply;
  throw std::invalid_argument("channel must be sigma, y or t_reply");
}

arbitrated::KeyBinding parse_binding(std::string_view name) {
  if (name == "sig_only") return arbitrated::KeyBinding::kSigOnly;
  if (name == "full") return arbitrated::KeyBinding::kFull;
  throw std::invalid_argument("swap must be sig_only or full");
}

arbitrated::SessionConfig session_config(const ScenarioParams& p, std::uint64_t seed) {
  return arbitrated::SessionConfig{p.n, p.t, p.b, p.mode, seed};
}

TrialOutcome from_verdict(const arbitrated::VerdictRecord& v) {
  TrialOutcome out;
  out.accepted = v.accepted;
  out.stage = std::string(arbitrated::to_string(v.failure_stage));
  if (v.recovered_fidelity) out.value = *v.recovered_fidelity;
  return out;
}

TrialOutcome from_verdict(const truesig::FourStepVerdict& v) {
  TrialOutcome out;
  out.accepted = v.overall;
  out.flag = v.step1_syndrome;
  if (!v.step1_syndrome) {
    out.stage = "step1_syndrome";
  } else if (!v.step2_decoded) {
    out.stage = "step2_decoded";
  } else if (!v.step3_entanglement) {
    out.stage = "step3_entanglement";
  } else if (!v.step4_equality) {
    out.stage = "step4_equality";
  }
  return out;
}

TrialOutcome run_trial(const Scenario& s, int index) {
  const ScenarioParams& p = s.params;
  arbitrated::SessionOptions options;
  options.digests = false;
  const std::uint64_t seed = trial_seed(s, index);
  Rng rng(derive_seed(seed, "message"));

  if (s.name == "honest_arbitrated") {
    const qsim::PureState msg = qsim::sample_random_pure(2, p.n, rng);
    return from_verdict(arbitrated::run_session(session_config(p, seed), msg, arbitrated::identity_hook, options).verdict);
  }
  if (s.name == "eve_pauli_tamper") {
    const qsim::PureState msg = qsim::sample_random_pure(2, p.n, rng);
    const auto hook = eve_pauli_hook(parse_channel(p.channel), derive_seed(seed, "eve"));
    return from_verdict(arbitrated::run_session(session_config(p, seed), msg, hook, options).verdict);
  }
  if (s.name == "bob_pauli_forgery") {
    const qsim::PureState msg = qsim::sample_random_pure(2, p.n, rng);
    const auto hook = bob_pauli_forgery_hook(p.n, derive_seed(seed, "bob"));
    return from_verdict(arbitrated::run_session(session_config(p, seed), msg, hook, options).verdict);
  }
  if (s.name == "wrong_key_binding") {
    const qsim::PureState msg = qsim::sample_random_pure(2, p.n, rng);
    options.arbiter_alice_override = auth::MasterSeed::from_u64(derive_seed(seed, "substitute"));
    options.binding = parse_binding(p.swap);
    return from_verdict(
        arbitrated::run_session(session_config(p, seed), msg, arbitrated::identity_hook, options).verdict);
  }
  if (s.name == "honest_truesig" || s.name == "truesig_forgery" || s.name == "truesig_random_substitution") {
    const truesig::TrueSigKeys keys = truesig::keygen(p.d, p.k, derive_seed(seed, "keys"));
    const qsim::PureState psi = qsim::sample_random_pure(p.d, 1, rng);
    Rng verifier(derive_seed(seed, "verifier"));
    truesig::SignedBundle bundle = truesig::sign(keys, psi.amps(), psi);
    if (s.name == "honest_truesig") return from_verdict(truesig::verify(keys.verifying, bundle, p.mode, verifier));
    if (s.name == "truesig_forgery") {
      const qsim::PureState psi_prime = qsim::sample_random_pure(p.d, 1, rng);
      const truesig::SignedBundle forged = truesig_forger(keys.verifying, bundle, psi_prime);
      TrialOutcome out = from_verdict(truesig::verify(keys.verifying, forged, p.mode, verifier));
      out.value = qsim::fidelity(forged.s_state, truesig::sign(keys, psi_prime.amps(), psi_prime).s_state);
      return out;
    }
    bundle.s_state = qsim::sample_random_pure(p.d, 2 * p.k - 1, rng);
    return from_verdict(truesig::verify(keys.verifying, bundle, p.mode, verifier));
  }
  if (s.name == "mac_forgery") {
    auth::KeyStore store(auth::MasterSeed::from_u64(seed), "mac-forgery");
    auth::MacKey key = auth::draw_mac_key(store, p.b);
    const int r = index % 2 == 0 ? 1 : 0;
    arbitrated::Metadata meta{arbitrated::Phase::kTReply, r, arbitrated::FailureStage::kNone, p.n, p.t};
    const auth::MacTag honest = auth::wc_tag(key, meta.encode());
    meta.r = 1 - r;
    const std::uint64_t mask = p.b == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << p.b) - 1;
    const auth::MacTag forged{p.b, honest.value ^ (rng.next_u64() & mask)};
    TrialOutcome out;
    out.accepted = auth::wc_check(key, meta.encode(), forged);
    out.stage = out.accepted ? "none" : "bob_auth";
    return out;
  }
  if (s.name == "qotp_mixing") {
    const qsim::PureState psi = qsim::sample_random_pure(p.d, 1, rng);
    const std::vector<qsim::Amplitude> rho = qotp_key_average(psi);
    double deviation = 0.0;
    for (int i = 0; i < p.d; ++i) {
      for (int j = 0; j < p.d; ++j) {
        const qsim::Amplitude target = i == j ? 1.0 / p.d : 0.0;
        deviation = std::max(deviation, std::abs(rho[static_cast<std::size_t>(i * p.d + j)] - target));
      }
    }
    TrialOutcome out;
    out.accepted = deviation <= qsim::kTolerance;
    out.stage = out.accepted ? "none" : "not_mixed";
    out.value = deviation;
    return out;
  }
  throw std::invalid_argument("unknown scenario: " + s.name);
}

std::vector<TrialOutcome> run_trials(const Scenario& s) {
  std::vector<TrialOutcome> results(static_cast<std::size_t>(s.trials));
  const int workers = std::clamp(s.threads, 1, s.trials);
  if (workers == 1) {
    for (int i = 0; i < s.trials; ++i) results[static_cast<std::size_t>(i)] = run_trial(s, i);
    return results;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < s.trials; i = next++) {
        try {
          results[static_cast<std::size_t>(i)] = run_trial(s, i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = s.trials;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

nlohmann::ordered_json params_echo(const Scenario& s) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  const ScenarioParams& p = s.params;
  for (const ScenarioInfo& info : scenario_catalog()) {
    if (info.name != s.name) continue;
    for (std::string_view key : info.params) {
      if (key == "d") j["d"] = p.d;
      if (key == "k") j["k"] = p.k;
      if (key == "n") j["n"] = p.n;
      if (key == "t") j["t"] = p.t;
      if (key == "b") j["b"] = p.b;
      if (key == "mode") j["mode"] = to_string(p.mode);
      if (key == "channel") j["channel"] = p.channel;
      if (key == "swap") j["swap"] = p.swap;
    }
  }
  return j;
}

}  // namespace

const std::vector<ScenarioInfo>& scenario_catalog() {
  static const std::vector<ScenarioInfo> catalog = {
      {"honest_arbitrated", "honest arbitrated sessions; every one must accept", {"n", "t", "b", "mode"}},
      {"eve_pauli_tamper", "random Pauli on one channel hop of the arbitrated protocol",
       {"n", "t", "b", "mode", "channel"}},
      {"bob_pauli_forgery", "receiver applies the same Pauli to signature and plain blocks of sigma",
       {"n", "t", "b", "mode"}},
      {"wrong_key_binding", "arbiter adjudicates with a substituted copy of Alice's key",
       {"n", "t", "b", "mode", "swap"}},
      {"honest_truesig", "honest signatures of the receiver-verifiable analog", {"d", "k", "mode"}},
      {"truesig_forgery", "receiver-side forgery using only the verification key", {"d", "k", "mode"}},
      {"truesig_random_substitution", "signature state replaced by a Haar-random state", {"d", "k", "mode"}},
      {"mac_forgery", "flipped verdict bit with a guessed tag offset", {"b"}},
      {"qotp_mixing", "exhaustive pad-key average of a random single-register state", {"d"}},
  };
  return catalog;
}

void validate(const Scenario& s) {
  const auto& catalog = scenario_catalog();
  if (std::none_of(catalog.begin(), catalog.end(), [&](const ScenarioInfo& i) { return i.name == s.name; })) {
    throw std::invalid_argument("unknown scenario: " + s.name);
  }
  if (s.trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (s.threads < 1) throw std::invalid_argument("threads must be at least 1");
  const ScenarioParams& p = s.params;
  const bool arbitrated_scenario = s.name == "honest_arbitrated" || s.name == "eve_pauli_tamper" ||
                                   s.name == "bob_pauli_forgery" || s.name == "wrong_key_binding";
  const bool truesig_scenario = s.name.find("truesig") != std::string::npos;
  if (arbitrated_scenario || s.name == "mac_forgery") {
    if (p.b != 16 && p.b != 32 && p.b != 64) throw std::invalid_argument("b must be 16, 32 or 64");
  }
  if (arbitrated_scenario) {
    if (p.n < 1 || p.t < 0) throw std::invalid_argument("n must be at least 1 and t non-negative");
    if (2 * p.n + 2 * p.t > auth::kMaxCliffordQubits) {
      throw std::invalid_argument("2n + 2t must not exceed " + std::to_string(auth::kMaxCliffordQubits));
    }
    parse_channel(p.channel);
    parse_binding(p.swap);
  }
  if (truesig_scenario) {
    if (!fieldcode::is_prime(p.d)) throw std::invalid_argument("d must be prime");
    if (p.k < 2) throw std::invalid_argument("k must be at least 2");
    if (p.d < 2 * p.k) throw std::invalid_argument("d must be at least 2k");
    qsim::state_size(p.d, 2 * p.k - 1);
  }
  if (s.name == "qotp_mixing" && p.d < 2) throw std::invalid_argument("d must be at least 2");
}

double binomial_sigma(double p, int trials) { return std::sqrt(p * (1.0 - p) / trials); }

Expectation expectation_for(const Scenario& s) {
  Expectation e;
  const auto at_most = [&](double nominal, bool statistical, std::string metric = "accept_rate") {
    e.regime = Expectation::Regime::kAtMost;
    e.metric = std::move(metric);
    e.nominal = nominal;
    e.statistical = statistical;
    e.sigma = statistical ? binomial_sigma(nominal, s.trials) : 0.0;
    e.bound = nominal + 3.0 * e.sigma;
  };
  const ScenarioParams& p = s.params;
  if (s.name == "eve_pauli_tamper" || s.name == "bob_pauli_forgery") {
    at_most(std::ldexp(1.0, -p.t), true);
  } else if (s.name == "wrong_key_binding") {
    at_most(0.01, false);
  } else if (s.name == "truesig_random_substitution") {
    at_most(std::pow(static_cast<double>(p.d), -(p.k - 1)), true, "step1_pass_rate");
  } else if (s.name == "mac_forgery") {
    at_most(std::ldexp(1.0, -p.b), true);
  }
  return e;
}

Report run_scenario(const Scenario& scenario) {
  validate(scenario);
  const auto start = std::chrono::steady_clock::now();
  const std::vector<TrialOutcome> outcomes = run_trials(scenario);

  Report r;
  r.scenario = scenario;
  r.expected = expectation_for(scenario);
  int flagged = 0;
  double min_value = std::numeric_limits<double>::infinity();
  double max_value = -std::numeric_limits<double>::infinity();
  for (const TrialOutcome& o : outcomes) {
    r.verdicts.push_back(TrialVerdict{o.accepted, o.stage});
    if (o.accepted) {
      ++r.accept_count;
    } else {
      ++r.failure_stages[o.stage];
    }
    if (o.flag) ++flagged;
    if (!std::isnan(o.value)) {
      min_value = std::min(min_value, o.value);
      max_value = std::max(max_value, o.value);
    }
  }
  r.accept_rate = static_cast<double>(r.accept_count) / scenario.trials;
  const bool have_values = min_value <= max_value;

  const std::string& name = scenario.name;
  if (name == "honest_arbitrated" && have_values) r.extras["min_recovered_fidelity"] = min_value;
  if (name == "truesig_forgery") r.extras["min_forged_fidelity"] = min_value;
  if (name == "truesig_random_substitution") {
    r.extras["step1_pass_count"] = flagged;
    r.extras["step1_pass_rate"] = static_cast<double>(flagged) / scenario.trials;
  }
  if (name == "qotp_mixing") r.extras["max_deviation"] = max_value;

  r.observed = r.expected.metric == "step1_pass_rate" ? static_cast<double>(flagged) / scenario.trials : r.accept_rate;
  if (r.expected.regime == Expectation::Regime::kAcceptAll) {
    r.pass = r.accept_count == scenario.trials;
  } else {
    r.pass = r.observed <= r.expected.bound;
  }
  r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["artifact_version"] = kArtifactVersion;
  nlohmann::ordered_json s;
  s["name"] = scenario.name;
  s["params"] = params_echo(scenario);
  s["trials"] = scenario.trials;
  s["seed"] = scenario.seed;
  j["scenario"] = std::move(s);
  j["accept_count"] = accept_count;
  j["accept_rate"] = accept_rate;
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (const auto& [stage, count] : failure_stages) hist[stage] = count;
  j["failure_stages"] = std::move(hist);
  nlohmann::ordered_json e;
  e["regime"] = expected.regime == Expectation::Regime::kAcceptAll ? "accept_all" : "at_most";
  e["metric"] = expected.metric;
  e["nominal"] = expected.nominal;
  e["sigma"] = expected.sigma;
  e["bound"] = expected.bound;
  j["expected"] = std::move(e);
  j["observed"] = observed;
  j["pass"] = pass;
  nlohmann::ordered_json trials = nlohmann::ordered_json::array();
  for (const TrialVerdict& v : verdicts) trials.push_back({v.accepted, v.stage});
  j["trials"] = std::move(trials);
  j["extras"] = extras;
  return j;
}

// ---------------------------------------------------------------------------

const std::vector<AdversaryInfo>& adversary_catalog() {
  static const std::vector<AdversaryInfo> catalog = {
      {"identity", "none", "forwards every message unchanged"},
      {"eve_pauli_tamper", "none", "random non-identity Pauli on one channel hop"},
      {"bob_pauli_forgery", "K_B", "same random Pauli on the signature and plain blocks of sigma"},
      {"truesig_forger", "verification key", "decode, replace the message register, re-encode"},
  };
  return catalog;
}

arbitrated::AdversaryHook eve_pauli_hook(Channel target, std::uint64_t seed) {
  return [target, rng = Rng(seed)](Channel at, ProtocolMessage m) mutable {
    if (at != target || !m.payload) return m;
    const auto p = random_pauli(m.payload->payload.registers(), rng);
    m.payload->payload = apply_pauli_string(std::move(m.payload->payload), p, 0);
    return m;
  };
}

arbitrated::AdversaryHook bob_pauli_forgery_hook(int n, std::uint64_t seed) {
  return [n, rng = Rng(seed)](Channel at, ProtocolMessage m) mutable {
    if (at != Channel::kSigma || !m.payload) return m;
    const auto q = random_pauli(n, rng);
    m.payload->payload = apply_pauli_string(std::move(m.payload->payload), q, 0);
    m.payload->payload = apply_pauli_string(std::move(m.payload->payload), q, n);
    return m;
  };
}

truesig::SignedBundle truesig_forger(const truesig::VerificationKey& key, const truesig::SignedBundle& bundle,
                                     const qsim::PureState& replacement) {
  return truesig::forge(key, bundle, replacement.amps(), replacement);
}

std::vector<qsim::Amplitude> qotp_key_average(const qsim::PureState& psi) {
  const int d = psi.dim();
  const int n = psi.registers();
  const std::size_t dim = psi.size();
  const std::size_t keys = qsim::state_size(d, 2 * n);
  std::vector<qsim::Amplitude> rho(dim * dim);
  for (std::size_t idx = 0; idx < keys; ++idx) {
    const std::vector<int> digits = qsim::digits_of(idx, d, 2 * n);
    auth::QotpKey key;
    key.d = d;
    for (int r = 0; r < n; ++r) {
      key.digits.emplace_back(digits[static_cast<std::size_t>(2 * r)], digits[static_cast<std::size_t>(2 * r + 1)]);
    }
    const qsim::PureState out = auth::qotp(psi, key, auth::Direction::kEncrypt);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) rho[i * dim + j] += out[i] * std::conj(out[j]);
    }
  }
  for (auto& v : rho) v /= static_cast<double>(keys);
  return rho;
}

}  // namespace qsig::attacks
