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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "qsig/attacks.hpp"
#include "qsig/authcrypto.hpp"
#include "qsig/fieldcode.hpp"
#include "qsig/qsim.hpp"
#include "qsig/rng.hpp"
#include "qsig/truesig.hpp"

namespace {

using namespace qsig;
using qsim::Amplitude;
using qsim::PureState;

constexpr double kTol = 1e-9;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

struct Code {
  int d;
  int k;
};

const Code kCodes[] = {{5, 2}, {7, 2}, {7, 3}};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

attacks::Scenario scenario(const std::string& name, int trials, std::uint64_t seed) {
  attacks::Scenario s;
  s.name = name;
  s.trials = trials;
  s.seed = seed;
  return s;
}

std::vector<Amplitude> random_psi(int d, Rng& rng) {
  const PureState s = qsim::sample_random_pure(d, 1, rng);
  return {s.amps().begin(), s.amps().end()};
}

PureState one_register(int d, const std::vector<Amplitude>& psi) { return qsim::make_state(d, 1, psi); }

// ---------------------------------------------------------------------------

Outcome forgery_reproduction() {
  Outcome o;
  for (const Code& c : kCodes) {
    for (Mode mode : {Mode::kReferee, Mode::kProtocol}) {
      attacks::Scenario s = scenario("truesig_forgery", 500, 1);
      s.params.d = c.d;
      s.params.k = c.k;
      s.params.mode = mode;
      const auto start = std::chrono::steady_clock::now();
      const attacks::Report r = attacks::run_scenario(s);
      const double elapsed = seconds_since(start);
      const std::string tag = fmt::format("d={} k={} {}", c.d, c.k, to_string(mode));
      o.require(r.accept_rate == 1.0, tag + fmt::format(" accept_rate {}", r.accept_rate));
      if (mode == Mode::kReferee) {
        const double min_fid = r.extras.at("min_forged_fidelity").get<double>();
        o.require(min_fid >= 1 - kTol, tag + fmt::format(" min fidelity {}", min_fid));
      }
      o.require(elapsed < 60.0, tag + fmt::format(" took {:.1f} s", elapsed));
    }
  }
  // Six distinct evaluation points do not exist in Z_5.
  attacks::Scenario s = scenario("truesig_forgery", 500, 1);
  s.params.d = 5;
  s.params.k = 3;
  bool rejected = false;
  try {
    attacks::validate(s);
  } catch (const std::invalid_argument&) {
    rejected = true;
  }
  o.require(rejected, "d=5 k=3 was not rejected");
  if (o.pass) o.detail = "accept_rate 1.0 for (5,2) (7,2) (7,3) in both modes; (5,3) rejected as 2k > d";
  return o;
}

Outcome forged_signature_identity() {
  Outcome o;
  Rng rng(2);
  double worst = 1.0;
  int pairs = 0;
  for (const Code& c : kCodes) {
    for (int i = 0; i < 100; ++i) {
      const truesig::TrueSigKeys keys = truesig::keygen(c.d, c.k, 200 + static_cast<std::uint64_t>(i));
      const std::vector<Amplitude> psi = random_psi(c.d, rng);
      const std::vector<Amplitude> psi_prime = random_psi(c.d, rng);
      const truesig::SignedBundle signed_bundle = truesig::sign(keys, psi, one_register(c.d, psi));
      const truesig::SignedBundle forged =
          truesig::forge(keys.verifying, signed_bundle, psi_prime, one_register(c.d, psi_prime));
      const truesig::SignedBundle honest = truesig::sign(keys, psi_prime, one_register(c.d, psi_prime));
      worst = std::min(worst, qsim::fidelity(forged.s_state, honest.s_state));
      ++pairs;
    }
  }
  o.require(worst >= 1 - kTol, fmt::format("min fidelity {}", worst));
  o.detail = fmt::format("min fidelity {:.15f} over {} pairs", worst, pairs);
  return o;
}

// Decoded amplitudes from a direct sum over (x_0, z) in Z_d x Z_d^{k-1}:
// psi(x_0) d^{-(k-1)/2} at label (x_0, z, z).
std::vector<Amplitude> decoded_by_reparametrized_sum(int d, int k, const std::vector<Amplitude>& psi) {
  const int regs = 2 * k - 1;
  std::vector<Amplitude> amps(qsim::state_size(d, regs));
  const double scale = std::pow(static_cast<double>(d), -(k - 1) / 2.0);
  const std::size_t tail = qsim::state_size(d, k - 1);
  for (int x0 = 0; x0 < d; ++x0) {
    for (std::size_t z = 0; z < tail; ++z) {
      const std::size_t index = (static_cast<std::size_t>(x0) * tail + z) * tail + z;
      amps[index] = scale * psi[static_cast<std::size_t>(x0)];
    }
  }
  return amps;
}

Outcome decode_oracle_equivalence() {
  Outcome o;
  Rng rng(3);
  double worst = 0.0;
  for (const Code& c : kCodes) {
    for (int i = 0; i < 50; ++i) {
      const truesig::TrueSigKeys keys = truesig::keygen(c.d, c.k, 300 + static_cast<std::uint64_t>(i));
      const std::vector<Amplitude> psi = random_psi(c.d, rng);
      const PureState decoded =
          truesig::decode(keys.verifying, truesig::sign(keys, psi, one_register(c.d, psi)).s_state);
      const std::vector<Amplitude> expected = decoded_by_reparametrized_sum(c.d, c.k, psi);
      for (std::size_t j = 0; j < expected.size(); ++j) worst = std::max(worst, std::abs(decoded[j] - expected[j]));
    }
  }
  o.require(worst <= kTol, fmt::format("max elementwise error {}", worst));
  o.detail = fmt::format("max elementwise error {:.3g} over 150 messages; (5,3) has no keys", worst);
  return o;
}

Outcome arbitrated_completeness() {
  Outcome o;
  attacks::Scenario s = scenario("honest_arbitrated", 500, 4);
  s.params.n = 2;
  s.params.t = 4;
  const attacks::Report r = attacks::run_scenario(s);
  const double min_fid = r.extras.at("min_recovered_fidelity").get<double>();
  o.require(r.accept_rate == 1.0, fmt::format("accept_rate {}", r.accept_rate));
  o.require(min_fid >= 1 - kTol, fmt::format("min recovered fidelity {}", min_fid));
  o.detail = fmt::format("accept_rate {} min recovered fidelity {:.15f}", r.accept_rate, min_fid);
  return o;
}

// Twirling a non-identity Pauli by a uniform Clifford yields a uniform
// non-identity Pauli; the trap check passes iff its X part misses every trap.
double clifford_code_oracle(int m, int traps, int samples, Rng& rng) {
  int passed = 0;
  for (int i = 0; i < samples; ++i) {
    std::vector<int> p(static_cast<std::size_t>(m));
    do {
      for (int& q : p) q = static_cast<int>(rng.below(4));
    } while (std::all_of(p.begin(), p.end(), [](int q) { return q == 0; }));
    bool trap_ok = true;
    for (int q = m - traps; q < m; ++q) trap_ok = trap_ok && (p[static_cast<std::size_t>(q)] == 0 || p[static_cast<std::size_t>(q)] == 3);
    passed += trap_ok ? 1 : 0;
  }
  return static_cast<double>(passed) / samples;
}

Outcome tamper_detection() {
  Outcome o;
  const int trials = 2000;
  double rate[7] = {};
  for (int t : {2, 4, 6}) {
    attacks::Scenario s = scenario("eve_pauli_tamper", trials, 5);
    s.params.t = t;
    rate[t] = attacks::run_scenario(s).accept_rate;
  }
  const double p4 = std::ldexp(1.0, -4);
  const double bound = p4 + 3 * attacks::binomial_sigma(p4, trials);
  o.require(rate[4] <= bound, fmt::format("t=4 accept_rate {} > {}", rate[4], bound));
  o.require(rate[6] <= rate[2], fmt::format("t=6 rate {} > t=2 rate {}", rate[6], rate[2]));

  // Sigma carries 2n + t = 8 qubits for n = 2, t = 4.
  Rng rng(55);
  const int samples = 200000;
  const double oracle = clifford_code_oracle(8, 4, samples, rng);
  const double oracle_bound = p4 + 3 * attacks::binomial_sigma(p4, samples);
  o.require(oracle <= oracle_bound, fmt::format("oracle pass rate {} > {}", oracle, oracle_bound));
  o.require(rate[4] <= oracle + 3 * attacks::binomial_sigma(std::max(oracle, 1.0 / trials), trials),
            fmt::format("t=4 rate {} above oracle {}", rate[4], oracle));
  o.detail = fmt::format("t=2 {:.4f} t=4 {:.4f} (bound {:.4f}, oracle {:.4f}) t=6 {:.4f}", rate[2], rate[4], bound,
                         oracle, rate[6]);
  return o;
}

Outcome contrast() {
  Outcome o;
  const int trials = 2000;
  const std::uint64_t seed = 6;
  attacks::Scenario forgery = scenario("truesig_forgery", trials, seed);
  attacks::Scenario pauli = scenario("bob_pauli_forgery", trials, seed);
  pauli.params.t = 4;
  const double forged = attacks::run_scenario(forgery).accept_rate;
  const double rejected_side = attacks::run_scenario(pauli).accept_rate;
  const double p = std::ldexp(1.0, -4);
  const double bound = p + 3 * attacks::binomial_sigma(p, trials);
  o.require(forged == 1.0, fmt::format("truesig forgery rate {}", forged));
  o.require(rejected_side <= bound, fmt::format("bob pauli forgery rate {} > {}", rejected_side, bound));
  o.detail = fmt::format("truesig_forgery {:.4f} vs bob_pauli_forgery {:.4f} (bound {:.4f})", forged, rejected_side,
                         bound);
  return o;
}

Outcome mac_bound() {
  Outcome o;
  const int trials = 100000;
  attacks::Scenario s = scenario("mac_forgery", trials, 7);
  s.params.b = 16;
  const auto start = std::chrono::steady_clock::now();
  const attacks::Report r = attacks::run_scenario(s);
  const double elapsed = seconds_since(start);
  const double p = std::ldexp(1.0, -16);
  const double bound = p + 3 * attacks::binomial_sigma(p, trials);
  o.require(r.accept_rate <= bound, fmt::format("accept_rate {} > {}", r.accept_rate, bound));
  o.require(elapsed < 30.0, fmt::format("took {:.1f} s", elapsed));
  o.detail = fmt::format("accept_rate {} (bound {:.3g}) in {:.2f} s", r.accept_rate, bound, elapsed);
  return o;
}

Outcome qotp_mixing() {
  Outcome o;
  Rng rng(8);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const PureState psi = qsim::sample_random_pure(2, 1, rng);
    Amplitude rho[2][2] = {};
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const auth::QotpKey key{2, {{a, b}}};
        const PureState out = auth::qotp(psi, key, auth::Direction::kEncrypt);
        for (int r = 0; r < 2; ++r) {
          for (int c = 0; c < 2; ++c) rho[r][c] += out[static_cast<std::size_t>(r)] * std::conj(out[static_cast<std::size_t>(c)]) / 4.0;
        }
      }
    }
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) worst = std::max(worst, std::abs(rho[r][c] - Amplitude(r == c ? 0.5 : 0.0)));
    }
  }
  o.require(worst <= kTol, fmt::format("max deviation {}", worst));
  o.detail = fmt::format("max deviation from I/2 {:.3g} over 100 states", worst);
  return o;
}

Outcome determinism() {
  Outcome o;
  int checked = 0;
  for (const attacks::ScenarioInfo& info : attacks::scenario_catalog()) {
    attacks::Scenario s = scenario(std::string(info.name), 40, 9);
    const std::string first = attacks::run_scenario(s).to_json().dump(2);
    const std::string second = attacks::run_scenario(s).to_json().dump(2);
    s.threads = 3;
    const std::string threaded = attacks::run_scenario(s).to_json().dump(2);
    o.require(first == second, std::string(info.name) + " differs on rerun");
    o.require(first == threaded, std::string(info.name) + " differs across thread counts");
    ++checked;
  }
  o.detail = fmt::format("{} scenarios byte-identical on rerun and with 3 threads", checked);
  return o;
}

void for_each_subset(int n, int r, int start, std::vector<int>& chosen, const std::function<void()>& visit) {
  if (static_cast<int>(chosen.size()) == r) {
    visit();
    return;
  }
  for (int v = start; v <= n; ++v) {
    chosen.push_back(v);
    for_each_subset(n, r, v + 1, chosen, visit);
    chosen.pop_back();
  }
}

Outcome fieldcode_exhaustive() {
  Outcome o;
  int instances = 0;
  for (int d : {5, 7, 11}) {
    for (int k : {2, 3}) {
      if (2 * k > d) continue;
      std::vector<int> nonzero;
      for_each_subset(d - 1, 2 * k - 1, 1, nonzero, [&] {
        std::vector<int> betas{0};
        betas.insert(betas.end(), nonzero.begin(), nonzero.end());
        const fieldcode::FunctionalMatrix f = fieldcode::gen_functionals(d, k, betas);
        const std::string tag = fmt::format("d={} k={} betas #{}", d, k, instances);
        ++instances;
        o.require(fieldcode::check_mds(f), tag + " not MDS");
        std::vector<int> in_subset;
        for (int i = 1; i <= k; ++i) in_subset.push_back(i);
        const fieldcode::DecodeBijection u = fieldcode::decode_bijection(f, in_subset);
        const fieldcode::ParityConstraintSet parity = fieldcode::parity_constraints(f);
        const std::size_t points = qsim::state_size(d, k);
        std::vector<bool> hit(points, false);
        bool bijective = true;
        bool annihilated = true;
        for (std::size_t n = 0; n < points; ++n) {
          const std::vector<int> y = qsim::digits_of(n, d, k);
          const fieldcode::Vec image = u.forward(y);
          const std::size_t idx = qsim::index_of(image, d);
          bijective = bijective && !hit[idx] && u.inverse(image) == y;
          hit[idx] = true;

          const std::vector<int> x = y;
          const fieldcode::Vec all = f.evaluate(x);
          const std::vector<int> codeword(all.begin() + 1, all.end());
          for (const fieldcode::Vec& c : parity.vectors) {
            long long s = 0;
            for (std::size_t i = 0; i < codeword.size(); ++i) s += static_cast<long long>(c[i]) * codeword[i];
            annihilated = annihilated && s % d == 0;
          }
        }
        o.require(bijective, tag + " decode not bijective");
        o.require(annihilated, tag + " parity misses a codeword");
      });
    }
  }
  o.detail = fmt::format("{} Vandermonde instances over d in (5, 7, 11), k in (2, 3)", instances);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"forgery_reproduction", forgery_reproduction},
      {"forged_signature_identity", forged_signature_identity},
      {"decode_oracle_equivalence", decode_oracle_equivalence},
      {"arbitrated_completeness", arbitrated_completeness},
      {"tamper_detection", tamper_detection},
      {"contrast", contrast},
      {"mac_bound", mac_bound},
      {"qotp_mixing", qotp_mixing},
      {"determinism", determinism},
      {"fieldcode_exhaustive", fieldcode_exhaustive},
  };
  int failed = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %2d %-26s %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str(),
                seconds_since(start));
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
