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

#include "qsig/truesig.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace qsig::truesig {

namespace {

constexpr double kFidelityThreshold = 1.0 - qsim::kTolerance;

std::vector<int> range(int first, int count) {
  std::vector<int> v(static_cast<std::size_t>(count));
  std::iota(v.begin(), v.end(), first);
  return v;
}

qsim::PureState message_state(int d, std::span<const qsim::Amplitude> psi) {
  if (psi.size() != static_cast<std::size_t>(d)) throw std::invalid_argument("message wave function must have length d");
  double norm2 = 0.0;
  for (const auto& a : psi) norm2 += std::norm(a);
  if (std::abs(std::sqrt(norm2) - 1.0) > qsim::kTolerance) throw std::invalid_argument("message wave function is not normalized");
  return qsim::PureState::adopt(d, 1, std::vector<qsim::Amplitude>(psi.begin(), psi.end()));
}

void check_copy(int d, const qsim::PureState& copy) {
  if (copy.dim() != d || copy.registers() != 1) throw std::invalid_argument("message copy must be one register of dimension d");
}

void check_bundle(const VerificationKey& key, const SignedBundle& b) {
  const int d = key.dim();
  const int k = key.k();
  if (b.s_state.dim() != d || b.s_state.registers() != 2 * k - 1) throw std::invalid_argument("signature state shape mismatch");
  if (b.omega_pair.dim() != d || b.omega_pair.registers() != 2) throw std::invalid_argument("omega pair shape mismatch");
  check_copy(d, b.p_copy);
}

qsim::PureState fourier_pair(const qsim::PureState& state, int a, int b, bool adjoint) {
  const qsim::GateMatrix f = adjoint ? qsim::gates::fourier(state.dim()).dagger() : qsim::gates::fourier(state.dim());
  const int ta[] = {a};
  const int tb[] = {b};
  return qsim::apply_gate(qsim::apply_gate(state, f, ta), f, tb);
}

TrueSigKeys assemble(fieldcode::FunctionalMatrix f) {
  const std::vector<int> subset = range(1, f.k);
  fieldcode::DecodeBijection u = fieldcode::decode_bijection(f, subset);
  fieldcode::ParityConstraintSet parity = fieldcode::parity_constraints(f);
  return TrueSigKeys{std::move(f), VerificationKey{std::move(u), std::move(parity)}};
}

}  // namespace

qsim::PureState canonical_pair(int d) {
  std::vector<qsim::Amplitude> amps(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
  const double a = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) amps[static_cast<std::size_t>(j) * static_cast<std::size_t>(d + 1)] = a;
  return qsim::PureState::adopt(d, 2, std::move(amps));
}

TrueSigKeys keygen(int d, int k, std::uint64_t seed) {
  if (!fieldcode::is_prime(d)) throw std::invalid_argument("d must be prime");
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (d < 2 * k) throw std::invalid_argument("d must be at least 2k to supply 2k distinct evaluation points");
  Rng rng(seed);
  std::vector<int> pool = range(1, d - 1);
  std::vector<int> betas{0};
  for (int i = 0; i < 2 * k - 1; ++i) {
    const auto j = static_cast<std::size_t>(i) + rng.below(pool.size() - static_cast<std::size_t>(i));
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    betas.push_back(pool[static_cast<std::size_t>(i)]);
  }
  return assemble(fieldcode::gen_functionals(d, k, betas));
}

TrueSigKeys keys_from_betas(int d, int k, std::span<const int> betas) {
  return assemble(fieldcode::gen_functionals(d, k, betas));
}

SignedBundle sign(const TrueSigKeys& keys, std::span<const qsim::Amplitude> psi, const qsim::PureState& psi_copy) {
  const fieldcode::FunctionalMatrix& f = keys.signing;
  const int d = f.d;
  const int k = f.k;
  const qsim::PureState message = message_state(d, psi);
  check_copy(d, psi_copy);

  std::vector<qsim::Amplitude> amps(qsim::state_size(d, 2 * k - 1));
  const double scale = std::pow(static_cast<double>(d), -0.5 * (k - 1));
  const std::size_t points = qsim::state_size(d, k);
  for (std::size_t idx = 0; idx < points; ++idx) {
    const std::vector<int> x = qsim::digits_of(idx, d, k);
    const fieldcode::Vec y = f.evaluate(x);
    const std::size_t label = qsim::index_of(std::span<const int>(y).subspan(1), d);
    amps[label] += message[static_cast<std::size_t>(x[0])] * scale;
  }
  return SignedBundle{qsim::PureState::adopt(d, 2 * k - 1, std::move(amps)), canonical_pair(d), psi_copy};
}

qsim::PureState decode(const VerificationKey& key, const qsim::PureState& s_state) {
  if (s_state.dim() != key.dim() || s_state.registers() != 2 * key.k() - 1) {
    throw std::invalid_argument("signature state shape mismatch");
  }
  return qsim::apply_classical_bijection(s_state, key.decode.table(), range(0, key.k()));
}

qsim::PureState undecode(const VerificationKey& key, const qsim::PureState& decoded) {
  if (decoded.dim() != key.dim() || decoded.registers() != 2 * key.k() - 1) {
    throw std::invalid_argument("decoded state shape mismatch");
  }
  return qsim::apply_classical_bijection(decoded, key.decode.table().inverted(), range(0, key.k()));
}

FourStepVerdict verify(const VerificationKey& key, const SignedBundle& bundle, Mode mode, Rng& rng) {
  check_bundle(key, bundle);
  const int k = key.k();
  const int regs = 2 * k - 1;
  FourStepVerdict v;
  v.mode = mode;

  // Step 1: every parity constraint reads 0.
  qsim::PureState state = bundle.s_state;
  const std::vector<int> all = range(0, regs);
  v.step1_syndrome = true;
  for (const fieldcode::Vec& c : key.parity.vectors) {
    qsim::MeasurementRecord m = qsim::parity_measure(state, c, all, rng);
    v.step1_syndrome = v.step1_syndrome && m.outcome == 0;
    state = std::move(m.post_state);
  }

  // Step 2.
  state = decode(key, state);
  v.step2_decoded = true;

  // Step 3: pairs (j, k + j - 1) against the canonical pair.
  const qsim::PureState omega = canonical_pair(key.dim());
  v.step3_entanglement = true;
  for (int j = 1; j < k; ++j) {
    const int a = j;
    const int b = k + j - 1;
    if (mode == Mode::kReferee) {
      const int pair[] = {a, b};
      v.step3_entanglement = v.step3_entanglement && qsim::subsystem_fidelity(state, pair, omega) >= kFidelityThreshold;
    } else {
      const int targets[] = {a, b};
      const int difference[] = {1, -1};
      const int sum[] = {1, 1};
      qsim::MeasurementRecord m1 = qsim::parity_measure(state, difference, targets, rng);
      qsim::MeasurementRecord m2 = qsim::parity_measure(fourier_pair(m1.post_state, a, b, false), sum, targets, rng);
      state = fourier_pair(m2.post_state, a, b, true);
      v.step3_entanglement = v.step3_entanglement && m1.outcome == 0 && m2.outcome == 0;
    }
  }

  // Step 4: message register against p_copy, pair (1, k) against omega_pair.
  if (mode == Mode::kReferee) {
    const int message_reg[] = {0};
    const int pair[] = {1, k};
    v.step4_equality = qsim::subsystem_fidelity(state, message_reg, bundle.p_copy) >= kFidelityThreshold &&
                       qsim::subsystem_fidelity(state, pair, bundle.omega_pair) >= kFidelityThreshold;
  } else {
    // Registers outside {0, 1, k} are no longer tested; measuring them out
    // leaves the statistics of the remaining tests unchanged.
    std::vector<int> unused;
    for (int r = 2; r < regs; ++r) {
      if (r != k) unused.push_back(r);
    }
    if (!unused.empty()) state = qsim::measure_and_discard(state, unused, rng).post_state;
    // [message, pair a, pair b, p_copy]
    const int m_reg[] = {0};
    const int copy_reg[] = {3};
    qsim::MeasurementRecord t1 = qsim::swap_test(qsim::tensor(state, bundle.p_copy), m_reg, copy_reg, rng);
    const int spent[] = {0, 3};
    state = qsim::measure_and_discard(t1.post_state, spent, rng).post_state;
    // [pair a, pair b, omega a, omega b]
    const int block_a[] = {0, 1};
    const int block_b[] = {2, 3};
    qsim::MeasurementRecord t2 = qsim::swap_test(qsim::tensor(state, bundle.omega_pair), block_a, block_b, rng);
    v.step4_equality = t1.outcome == qsim::kAccept && t2.outcome == qsim::kAccept;
  }

  v.overall = v.step1_syndrome && v.step2_decoded && v.step3_entanglement && v.step4_equality;
  return v;
}

SignedBundle forge(const VerificationKey& key, const SignedBundle& bundle, std::span<const qsim::Amplitude> psi_prime,
                   const qsim::PureState& psi_prime_copy) {
  check_bundle(key, bundle);
  const qsim::PureState replacement = message_state(key.dim(), psi_prime);
  check_copy(key.dim(), psi_prime_copy);
  const auto split = qsim::split_leading(decode(key, bundle.s_state), 1);
  if (!split) throw std::invalid_argument("decoded message register is entangled with the rest");
  const qsim::PureState forged = undecode(key, qsim::tensor(replacement, split->second));
  return SignedBundle{forged, bundle.omega_pair, psi_prime_copy};
}

nlohmann::json to_json(const SignedBundle& bundle, int k) {
  const auto amps = [](const qsim::PureState& s) { return qsim::to_json(s).at("amps"); };
  return {{"d", bundle.s_state.dim()},
          {"k", k},
          {"s_state", amps(bundle.s_state)},
          {"omega", amps(bundle.omega_pair)},
          {"p_copy", amps(bundle.p_copy)}};
}

SignedBundle bundle_from_json(const nlohmann::json& j) {
  const int d = j.at("d").get<int>();
  const int k = j.at("k").get<int>();
  const auto state = [d](const nlohmann::json& amps, int n) {
    return qsim::state_from_json({{"d", d}, {"n", n}, {"amps", amps}});
  };
  return SignedBundle{state(j.at("s_state"), 2 * k - 1), state(j.at("omega"), 2), state(j.at("p_copy"), 1)};
}

}  // namespace qsig::truesig
