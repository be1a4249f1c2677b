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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qsig/attacks.hpp"
#include "qsig/authcrypto.hpp"
#include "qsig/truesig.hpp"
#include "test_util.hpp"

namespace qsig::attacks {
namespace {

using qsig::testing::kTol;
using qsim::Amplitude;
using qsim::PureState;

Scenario make(const std::string& name, int trials, std::uint64_t seed) {
  Scenario s;
  s.name = name;
  s.trials = trials;
  s.seed = seed;
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Reproducibility

TEST(Golden, EveTamperReportMatchesFixture) {
  Scenario s = make("eve_pauli_tamper", 40, 42);
  s.params.t = 2;
  s.params.channel = "y";
  const std::string expected = read_file(std::string(QSIG_FIXTURE_DIR) + "/eve_pauli_tamper_golden.json");
  ASSERT_FALSE(expected.empty());
  EXPECT_EQ(run_scenario(s).to_json().dump(2) + "\n", expected);
}

TEST(Golden, TruesigForgeryReportMatchesFixture) {
  Scenario s = make("truesig_forgery", 10, 7);
  s.params.d = 7;
  s.params.k = 3;
  s.params.mode = Mode::kProtocol;
  const std::string expected = read_file(std::string(QSIG_FIXTURE_DIR) + "/truesig_forgery_golden.json");
  ASSERT_FALSE(expected.empty());
  EXPECT_EQ(run_scenario(s).to_json().dump(2) + "\n", expected);
}

TEST(Reproducibility, ThreadCountDoesNotChangeReport) {
  for (const char* name : {"eve_pauli_tamper", "bob_pauli_forgery", "truesig_random_substitution", "mac_forgery"}) {
    Scenario s = make(name, 60, 5);
    s.params.t = 2;
    const std::string one = run_scenario(s).to_json().dump();
    s.threads = 3;
    EXPECT_EQ(run_scenario(s).to_json().dump(), one) << name;
  }
}

TEST(Reproducibility, SeedChangesVerdicts) {
  Scenario a = make("eve_pauli_tamper", 200, 1);
  a.params.t = 1;
  Scenario b = a;
  b.seed = 2;
  const Report ra = run_scenario(a);
  const Report rb = run_scenario(b);
  bool differ = false;
  for (std::size_t i = 0; i < ra.verdicts.size(); ++i) {
    differ = differ || ra.verdicts[i].accepted != rb.verdicts[i].accepted || ra.verdicts[i].stage != rb.verdicts[i].stage;
  }
  EXPECT_TRUE(differ);
}

// ---------------------------------------------------------------------------
// Report bookkeeping

TEST(Report, CountsAreConsistent) {
  Scenario s = make("eve_pauli_tamper", 300, 9);
  s.params.t = 1;
  const Report r = run_scenario(s);
  ASSERT_EQ(r.verdicts.size(), 300u);
  int accepted = 0;
  std::map<std::string, int> stages;
  for (const TrialVerdict& v : r.verdicts) {
    if (v.accepted) {
      ++accepted;
      EXPECT_EQ(v.stage, "none");
    } else {
      ++stages[v.stage];
    }
  }
  EXPECT_EQ(r.accept_count, accepted);
  EXPECT_EQ(r.accept_rate, static_cast<double>(accepted) / 300);
  EXPECT_EQ(r.failure_stages, stages);
  EXPECT_EQ(r.observed, r.accept_rate);
  EXPECT_EQ(r.pass, r.observed <= r.expected.bound);
}

TEST(Report, JsonKeyOrder) {
  const Report r = run_scenario(make("honest_truesig", 5, 1));
  const nlohmann::ordered_json j = r.to_json();
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  const std::vector<std::string> expected{"schema_version", "artifact_version", "scenario", "accept_count",
                                          "accept_rate",    "failure_stages",   "expected", "observed",
                                          "pass",           "trials",           "extras"};
  EXPECT_EQ(keys, expected);
  EXPECT_EQ(j.at("schema_version"), kSchemaVersion);
  EXPECT_EQ(j.at("artifact_version"), std::string(kArtifactVersion));
  EXPECT_FALSE(j.contains("wall_time"));
}

// ---------------------------------------------------------------------------
// Expectations

TEST(Expectation, Regimes) {
  Scenario eve = make("eve_pauli_tamper", 2000, 0);
  const Expectation e = expectation_for(eve);
  EXPECT_EQ(e.regime, Expectation::Regime::kAtMost);
  EXPECT_DOUBLE_EQ(e.nominal, 1.0 / 16);
  EXPECT_NEAR(e.bound, 1.0 / 16 + 3 * std::sqrt((1.0 / 16) * (15.0 / 16) / 2000), 1e-15);

  const Expectation h = expectation_for(make("honest_arbitrated", 10, 0));
  EXPECT_EQ(h.regime, Expectation::Regime::kAcceptAll);
  EXPECT_EQ(h.bound, 1.0);

  Scenario sub = make("truesig_random_substitution", 1000, 0);
  sub.params.d = 7;
  const Expectation s = expectation_for(sub);
  EXPECT_EQ(s.metric, "step1_pass_rate");
  EXPECT_DOUBLE_EQ(s.nominal, 1.0 / 7);

  Scenario mac = make("mac_forgery", 100000, 0);
  mac.params.b = 32;
  EXPECT_DOUBLE_EQ(expectation_for(mac).nominal, std::ldexp(1.0, -32));
}

TEST(Expectation, BinomialSigma) {
  EXPECT_DOUBLE_EQ(binomial_sigma(0.5, 100), 0.05);
  EXPECT_EQ(binomial_sigma(1.0, 100), 0.0);
}

// ---------------------------------------------------------------------------
// Validation

TEST(Validate, RejectsBadScenarios) {
  EXPECT_THROW(validate(make("nope", 10, 0)), std::invalid_argument);
  EXPECT_THROW(validate(make("honest_truesig", 0, 0)), std::invalid_argument);

  Scenario s = make("truesig_forgery", 10, 0);
  s.params.d = 4;
  EXPECT_THROW(validate(s), std::invalid_argument);
  s.params.d = 5;
  s.params.k = 3;
  EXPECT_THROW(validate(s), std::invalid_argument);
  s.params.k = 1;
  EXPECT_THROW(validate(s), std::invalid_argument);

  Scenario a = make("eve_pauli_tamper", 10, 0);
  a.params.channel = "bogus";
  EXPECT_THROW(validate(a), std::invalid_argument);
  a.params.channel = "sigma";
  a.params.b = 8;
  EXPECT_THROW(validate(a), std::invalid_argument);
  a.params.b = 16;
  a.params.n = 3;
  a.params.t = 8;
  EXPECT_THROW(validate(a), std::invalid_argument);

  Scenario w = make("wrong_key_binding", 10, 0);
  w.params.swap = "half";
  EXPECT_THROW(validate(w), std::invalid_argument);
  EXPECT_THROW(run_scenario(w), std::invalid_argument);

  Scenario threads = make("honest_truesig", 10, 0);
  threads.threads = 0;
  EXPECT_THROW(validate(threads), std::invalid_argument);
}

TEST(Validate, AcceptsDefaults) {
  for (const ScenarioInfo& info : scenario_catalog()) EXPECT_NO_THROW(validate(make(std::string(info.name), 1, 0)));
}

// ---------------------------------------------------------------------------
// Catalogs

TEST(Catalog, ScenarioNames) {
  std::set<std::string> names;
  for (const ScenarioInfo& info : scenario_catalog()) {
    names.insert(std::string(info.name));
    EXPECT_FALSE(info.description.empty());
  }
  const std::set<std::string> expected{"honest_arbitrated", "eve_pauli_tamper", "bob_pauli_forgery",
                                       "wrong_key_binding", "honest_truesig", "truesig_forgery",
                                       "truesig_random_substitution", "mac_forgery", "qotp_mixing"};
  EXPECT_EQ(names, expected);
}

TEST(Catalog, AdversaryKeyAccess) {
  std::map<std::string, std::string> reads;
  for (const AdversaryInfo& a : adversary_catalog()) reads[std::string(a.name)] = std::string(a.reads);
  EXPECT_EQ(reads.at("identity"), "none");
  EXPECT_EQ(reads.at("eve_pauli_tamper"), "none");
  EXPECT_EQ(reads.at("bob_pauli_forgery"), "K_B");
  EXPECT_EQ(reads.at("truesig_forger"), "verification key");
}

// ---------------------------------------------------------------------------
// Scenario outcomes

TEST(Scenarios, HonestArbitratedAcceptsAll) {
  const Report r = run_scenario(make("honest_arbitrated", 500, 1));
  EXPECT_EQ(r.accept_rate, 1.0);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.extras.at("min_recovered_fidelity").get<double>(), 1.0, kTol);
}

TEST(Scenarios, HonestTruesigAcceptsAll) {
  for (Mode mode : {Mode::kReferee, Mode::kProtocol}) {
    Scenario s = make("honest_truesig", 200, 2);
    s.params.mode = mode;
    const Report r = run_scenario(s);
    EXPECT_EQ(r.accept_rate, 1.0);
    EXPECT_TRUE(r.pass);
  }
}

TEST(Scenarios, TruesigForgeryAcceptsAll) {
  Scenario s = make("truesig_forgery", 500, 3);
  const Report r = run_scenario(s);
  EXPECT_EQ(r.accept_rate, 1.0);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.extras.at("min_forged_fidelity").get<double>(), 1.0, kTol);
}

TEST(Scenarios, EveTamperBoundedOnEveryChannel) {
  for (const char* channel : {"sigma", "y", "t_reply"}) {
    Scenario s = make("eve_pauli_tamper", 2000, 4);
    s.params.channel = channel;
    const Report r = run_scenario(s);
    EXPECT_LE(r.accept_rate, r.expected.bound) << channel;
    EXPECT_TRUE(r.pass) << channel;
  }
}

TEST(Scenarios, BobPauliForgeryRejected) {
  const Report r = run_scenario(make("bob_pauli_forgery", 2000, 5));
  EXPECT_GE(1.0 - r.accept_rate, 1.0 - std::ldexp(1.0, -4) - 3 * binomial_sigma(std::ldexp(1.0, -4), 2000));
  EXPECT_TRUE(r.pass);
}

TEST(Scenarios, WrongKeyBindingRejected) {
  for (const char* swap : {"sig_only", "full"}) {
    Scenario s = make("wrong_key_binding", 200, 6);
    s.params.swap = swap;
    const Report r = run_scenario(s);
    EXPECT_LE(r.accept_rate, 0.01) << swap;
  }
}

TEST(Scenarios, RandomSubstitutionPassesSyndromeRarely) {
  Scenario s = make("truesig_random_substitution", 1000, 7);
  const Report r = run_scenario(s);
  EXPECT_LE(r.observed, r.expected.bound);
  EXPECT_TRUE(r.pass);
}

TEST(Scenarios, MacForgeryRejected) {
  const Report r = run_scenario(make("mac_forgery", 20000, 8));
  EXPECT_LE(r.accept_rate, r.expected.bound);
  EXPECT_EQ(r.failure_stages.at("bob_auth"), 20000 - r.accept_count);
}

TEST(Scenarios, QotpMixingExact) {
  Scenario s = make("qotp_mixing", 50, 9);
  s.params.d = 3;
  const Report r = run_scenario(s);
  EXPECT_EQ(r.accept_rate, 1.0);
  EXPECT_LE(r.extras.at("max_deviation").get<double>(), kTol);
}

// ---------------------------------------------------------------------------
// Adversary hooks

TEST(Hooks, EveLeavesOtherChannelsAlone) {
  const arbitrated::AdversaryHook hook = eve_pauli_hook(arbitrated::Channel::kY, 1);
  arbitrated::ProtocolMessage m;
  m.phase = arbitrated::Phase::kSigma;
  Rng rng(1);
  m.payload = auth::AuthBlock{qsim::sample_random_pure(2, 4, rng), 2, 1, 0};
  const arbitrated::ProtocolMessage out = hook(arbitrated::Channel::kSigma, m);
  EXPECT_TRUE(qsig::testing::states_near(out.payload->payload, m.payload->payload));
  const arbitrated::ProtocolMessage hit = hook(arbitrated::Channel::kY, m);
  EXPECT_LT(qsim::fidelity(hit.payload->payload, m.payload->payload), 1.0);
}

TEST(Hooks, BobForgeryAppliesSamePauliToBothBlocks) {
  Rng rng(2);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const PureState a = qsim::sample_random_pure(2, 2, rng);
    arbitrated::ProtocolMessage m;
    m.phase = arbitrated::Phase::kSigma;
    m.payload = auth::AuthBlock{qsim::tensor(qsim::tensor(a, a), PureState::zero(2, 2)), 2, 1, 0};
    const PureState out = bob_pauli_forgery_hook(2, seed)(arbitrated::Channel::kSigma, m).payload->payload;
    // Output is Q a (x) Q a (x) |00>: the symmetric-subspace weight is 1.
    const std::vector<int> block_a{0, 1};
    const std::vector<int> block_b{2, 3};
    EXPECT_NEAR(qsim::exchange_expectation(out, block_a, block_b), 1.0, kTol);
    EXPECT_LT(qsim::fidelity(out, m.payload->payload), 1.0 - 1e-6);
  }
}

TEST(Hooks, TruesigForgerUsesVerificationKeyOnly) {
  Rng rng(3);
  const truesig::TrueSigKeys keys = truesig::keygen(7, 2, 3);
  const PureState psi = qsim::sample_random_pure(7, 1, rng);
  const PureState psi_prime = qsim::sample_random_pure(7, 1, rng);
  const truesig::SignedBundle b = truesig::sign(keys, psi.amps(), psi);
  const truesig::VerificationKey vk = keys.verifying;
  const truesig::SignedBundle forged = truesig_forger(vk, b, psi_prime);
  EXPECT_NEAR(qsim::fidelity(forged.s_state, truesig::sign(keys, psi_prime.amps(), psi_prime).s_state), 1.0, kTol);
  EXPECT_TRUE(truesig::verify(vk, forged, Mode::kReferee, rng).overall);
}

// ---------------------------------------------------------------------------
// Pad averaging

TEST(QotpAverage, MaximallyMixed) {
  Rng rng(4);
  for (int d : {2, 3, 5}) {
    const PureState psi = qsim::sample_random_pure(d, 2, rng);
    const std::vector<Amplitude> rho = qotp_key_average(psi);
    const std::size_t n = static_cast<std::size_t>(d * d);
    ASSERT_EQ(rho.size(), n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(std::abs(rho[i * n + j] - Amplitude(i == j ? 1.0 / n : 0.0)), 0.0, kTol);
    }
  }
}

}  // namespace
}  // namespace qsig::attacks
