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

// Named Monte Carlo experiments over both signature schemes. Every trial
// draws its randomness from a seed derived from (scenario seed, name,
// trial index), so reports are reproducible regardless of threading.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qsig/arbitrated.hpp"
#include "qsig/mode.hpp"
#include "qsig/qsim.hpp"
#include "qsig/truesig.hpp"

namespace qsig::attacks {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kArtifactVersion = "0.1.0";

struct ScenarioParams {
  int d = 5;
  int k = 2;
  int n = 2;
  int t = 4;
  int b = 16;
  Mode mode = Mode::kReferee;
  std::string channel = "sigma";   // eve_pauli_tamper: sigma | y | t_reply
  std::string swap = "sig_only";   // wrong_key_binding: sig_only | full
};

struct Scenario {
  std::string name;
  ScenarioParams params;
  int trials = 1000;
  std::uint64_t seed = 0;
  int threads = 1;  // does not affect results
};

struct ScenarioInfo {
  std::string_view name;
  std::string_view description;
  std::vector<std::string_view> params;  // parameters echoed in the report
};

const std::vector<ScenarioInfo>& scenario_catalog();

/// Throws std::invalid_argument on an unknown name or invalid parameters.
void validate(const Scenario& scenario);

/// How a report is judged. kAcceptAll: the metric must equal 1. kAtMost:
/// metric <= bound, with bound = nominal + 3 sqrt(nominal (1 - nominal) / N)
/// when `statistical`, else bound = nominal.
struct Expectation {
  enum class Regime { kAcceptAll, kAtMost };
  Regime regime = Regime::kAcceptAll;
  std::string metric = "accept_rate";
  double nominal = 1.0;
  bool statistical = false;
  double sigma = 0.0;
  double bound = 1.0;
};

/// Expected regime of a scenario for the given trial count.
Expectation expectation_for(const Scenario& scenario);

/// sqrt(p (1 - p) / trials).
double binomial_sigma(double p, int trials);

struct TrialVerdict {
  bool accepted = false;
  std::string stage;  // "none" when accepted
};

struct Report {
  Scenario scenario;
  std::vector<TrialVerdict> verdicts;
  int accept_count = 0;
  double accept_rate = 0.0;
  std::map<std::string, int> failure_stages;
  Expectation expected;
  double observed = 0.0;  // value of expected.metric
  bool pass = false;
  nlohmann::ordered_json extras = nlohmann::ordered_json::object();
  double wall_time_seconds = 0.0;  // not serialized

  /// Stable key order; identical for identical (scenario, seed).
  nlohmann::ordered_json to_json() const;
};

Report run_scenario(const Scenario& scenario);

// ---------------------------------------------------------------------------
// Adversaries

struct AdversaryInfo {
  std::string_view name;
  std::string_view reads;  // key material the adversary may use
  std::string_view description;
};

const std::vector<AdversaryInfo>& adversary_catalog();

/// Applies a uniformly random non-identity Pauli to every register of the
/// payload crossing `target`. Reads no keys.
arbitrated::AdversaryHook eve_pauli_hook(arbitrated::Channel target, std::uint64_t seed);

/// Applies one random non-identity n-qubit Pauli Q to both the signature
/// block [0, n) and the plain block [n, 2n) of sigma.
arbitrated::AdversaryHook bob_pauli_forgery_hook(int n, std::uint64_t seed);

/// Receiver-side forgery on the true-signature analog; sees only the
/// verification key.
truesig::SignedBundle truesig_forger(const truesig::VerificationKey& key, const truesig::SignedBundle& bundle,
                                     const qsim::PureState& replacement);

// ---------------------------------------------------------------------------

/// (1 / d^{2n}) sum over all pad keys of qotp(psi) qotp(psi)^dagger, as a
/// row-major d^n x d^n density matrix.
std::vector<qsim::Amplitude> qotp_key_average(const qsim::PureState& psi);

}  // namespace qsig::attacks
