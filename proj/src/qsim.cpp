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

#include "qsig/qsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qsig::qsim {

namespace {

std::atomic<std::size_t> g_max_amplitudes{std::size_t{1} << 20};

double norm_sq(std::span<const Amplitude> v) {
  double s = 0.0;
  for (const auto& a : v) s += std::norm(a);
  return s;
}

std::vector<std::size_t> strides_for(int d, int n) {
  std::vector<std::size_t> s(static_cast<std::size_t>(n));
  std::size_t acc = 1;
  for (int i = n - 1; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = acc;
    acc *= static_cast<std::size_t>(d);
  }
  return s;
}

void check_targets(const PureState& state, std::span<const int> targets, const char* what) {
  std::vector<bool> seen(static_cast<std::size_t>(state.registers()), false);
  for (int t : targets) {
    if (t < 0 || t >= state.registers()) {
      throw std::invalid_argument(std::string(what) + ": target register out of range");
    }
    if (seen[static_cast<std::size_t>(t)]) {
      throw std::invalid_argument(std::string(what) + ": repeated target register");
    }
    seen[static_cast<std::size_t>(t)] = true;
  }
}

void check_blocks(const PureState& state, std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw std::invalid_argument("exchange blocks differ in length");
  std::vector<int> all(a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  check_targets(state, all, "exchange blocks");
}

// Offsets of every label of `targets` (big-endian over the targets) within
// the full index space.
std::vector<std::size_t> target_offsets(int d, std::span<const std::size_t> strides,
                                        std::span<const int> targets) {
  std::size_t count = 1;
  for (std::size_t j = 0; j < targets.size(); ++j) count *= static_cast<std::size_t>(d);
  std::vector<std::size_t> off(count, 0);
  for (std::size_t label = 0; label < count; ++label) {
    std::size_t rem = label;
    std::size_t o = 0;
    for (std::size_t j = targets.size(); j-- > 0;) {
      o += (rem % static_cast<std::size_t>(d)) * strides[static_cast<std::size_t>(targets[j])];
      rem /= static_cast<std::size_t>(d);
    }
    off[label] = o;
  }
  return off;
}

std::size_t label_on(std::size_t index, int d, std::span<const std::size_t> strides,
                     std::span<const int> targets) {
  std::size_t label = 0;
  for (int t : targets) {
    label = label * static_cast<std::size_t>(d) +
            (index / strides[static_cast<std::size_t>(t)]) % static_cast<std::size_t>(d);
  }
  return label;
}

std::vector<int> complement_of(int n, std::span<const int> regs) {
  std::vector<bool> in(static_cast<std::size_t>(n), false);
  for (int r : regs) in[static_cast<std::size_t>(r)] = true;
  std::vector<int> rest;
  for (int i = 0; i < n; ++i) {
    if (!in[static_cast<std::size_t>(i)]) rest.push_back(i);
  }
  return rest;
}

void canonicalize_phase(std::vector<Amplitude>& v) {
  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double m = std::abs(v[i]);
    if (m > best_mag + 1e-12) {
      best_mag = m;
      best = i;
    }
  }
  if (best_mag <= 0.0) return;
  const Amplitude rot = std::conj(v[best]) / best_mag;
  for (auto& a : v) a *= rot;
  v[best] = Amplitude(std::real(v[best]), 0.0);
}

std::size_t sample_index(std::span<const double> weights, Rng& rng) {
  const double u = rng.uniform();
  double cum = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_nonzero = i;
    cum += weights[i];
    if (u < cum) return i;
  }
  return last_nonzero;
}

MeasurementRecord exchange_projection(const PureState& state, std::span<const int> block_a,
                                      std::span<const int> block_b, Rng& rng) {
  check_blocks(state, block_a, block_b);
  std::vector<int> order(static_cast<std::size_t>(state.registers()));
  for (int i = 0; i < state.registers(); ++i) order[static_cast<std::size_t>(i)] = i;
  for (std::size_t j = 0; j < block_a.size(); ++j) {
    order[static_cast<std::size_t>(block_a[j])] = block_b[j];
    order[static_cast<std::size_t>(block_b[j])] = block_a[j];
  }
  const PureState swapped = permute_registers(state, order);
  std::vector<Amplitude> sym(state.size());
  std::vector<Amplitude> anti(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    sym[i] = (state[i] + swapped[i]) * 0.5;
    anti[i] = (state[i] - swapped[i]) * 0.5;
  }
  const double p_accept = std::clamp(norm_sq(sym), 0.0, 1.0);
  const bool accept = rng.uniform() < p_accept;
  auto& kept = accept ? sym : anti;
  const double p = accept ? p_accept : 1.0 - p_accept;
  const double scale = 1.0 / std::sqrt(norm_sq(kept));
  for (auto& a : kept) a *= scale;
  return MeasurementRecord{accept ? kAccept : kReject, p,
                           PureState::adopt(state.dim(), state.registers(), std::move(kept))};
}

}  // namespace

std::size_t max_amplitudes() { return g_max_amplitudes.load(); }
void set_max_amplitudes(std::size_t cap) { g_max_amplitudes.store(cap); }

std::size_t state_size(int d, int n) {
  if (d < 2) throw std::invalid_argument("qudit dimension must be at least 2");
  if (n < 0) throw std::invalid_argument("register count must be non-negative");
  std::size_t size = 1;
  const std::size_t cap = max_amplitudes();
  for (int i = 0; i < n; ++i) {
    if (size > cap / static_cast<std::size_t>(d)) {
      throw std::length_error("state of " + std::to_string(n) + " registers of dimension " +
                              std::to_string(d) + " exceeds the amplitude cap");
    }
    size *= static_cast<std::size_t>(d);
  }
  return size;
}

double PureState::norm() const { return std::sqrt(norm_sq(amps_)); }

PureState PureState::basis(int d, std::span<const int> labels) {
  const int n = static_cast<int>(labels.size());
  std::vector<Amplitude> amps(state_size(d, n), Amplitude{0.0, 0.0});
  for (int v : labels) {
    if (v < 0 || v >= d) throw std::invalid_argument("basis label out of range");
  }
  amps[index_of(labels, d)] = 1.0;
  return PureState(d, n, std::move(amps));
}

PureState PureState::zero(int d, int n) {
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  return basis(d, labels);
}

PureState PureState::adopt(int d, int n, std::vector<Amplitude> amps) {
  if (amps.size() != state_size(d, n)) throw std::invalid_argument("amplitude count is not d^n");
  if (std::abs(std::sqrt(norm_sq(amps)) - 1.0) > kTolerance) {
    throw std::invalid_argument("adopted amplitudes are not normalized");
  }
  return PureState(d, n, std::move(amps));
}

PureState make_state(int d, int n, std::vector<Amplitude> amps) {
  if (amps.size() != state_size(d, n)) throw std::invalid_argument("amplitude count is not d^n");
  const double norm = std::sqrt(norm_sq(amps));
  if (!(norm > 0.0) || !std::isfinite(norm)) throw std::invalid_argument("zero or non-finite state vector");
  for (auto& a : amps) a /= norm;
  return PureState::adopt(d, n, std::move(amps));
}

std::vector<int> digits_of(std::size_t index, int d, int n) {
  std::vector<int> digits(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    digits[static_cast<std::size_t>(i)] = static_cast<int>(index % static_cast<std::size_t>(d));
    index /= static_cast<std::size_t>(d);
  }
  return digits;
}

std::size_t index_of(std::span<const int> digits, int d) {
  std::size_t idx = 0;
  for (int v : digits) idx = idx * static_cast<std::size_t>(d) + static_cast<std::size_t>(v);
  return idx;
}

// ---------------------------------------------------------------------------

GateMatrix::GateMatrix(int d, int arity, std::vector<Amplitude> entries)
    : GateMatrix(Trusted{}, d, arity, std::move(entries)) {
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < rows_; ++c) {
      Amplitude s{0.0, 0.0};
      for (std::size_t k = 0; k < rows_; ++k) s += std::conj(at(k, r)) * at(k, c);
      const Amplitude expect = r == c ? Amplitude{1.0, 0.0} : Amplitude{0.0, 0.0};
      if (std::abs(s - expect) > kTolerance) throw std::invalid_argument("gate matrix is not unitary");
    }
  }
}

GateMatrix::GateMatrix(Trusted, int d, int arity, std::vector<Amplitude> entries)
    : d_(d), arity_(arity), rows_(state_size(d, arity)), entries_(std::move(entries)) {
  if (arity < 1) throw std::invalid_argument("gate arity must be positive");
  if (entries_.size() != rows_ * rows_) throw std::invalid_argument("gate entry count is not (d^m)^2");
}

GateMatrix GateMatrix::dagger() const {
  std::vector<Amplitude> out(entries_.size());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < rows_; ++c) out[c * rows_ + r] = std::conj(at(r, c));
  }
  return GateMatrix(Trusted{}, d_, arity_, std::move(out));
}

GateMatrix GateMatrix::operator*(const GateMatrix& rhs) const {
  if (rhs.d_ != d_ || rhs.arity_ != arity_) throw std::invalid_argument("gate shapes differ");
  std::vector<Amplitude> out(entries_.size(), Amplitude{0.0, 0.0});
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < rows_; ++k) {
      const Amplitude a = at(r, k);
      if (a == Amplitude{0.0, 0.0}) continue;
      for (std::size_t c = 0; c < rows_; ++c) out[r * rows_ + c] += a * rhs.at(k, c);
    }
  }
  return GateMatrix(d_, arity_, std::move(out));
}

namespace gates {

namespace {
Amplitude root_of_unity(int d, long long power) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(power % d) / d;
  return {std::cos(angle), std::sin(angle)};
}
}  // namespace

GateMatrix identity(int d, int arity) {
  const std::size_t n = state_size(d, arity);
  std::vector<Amplitude> e(n * n, Amplitude{0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
  return GateMatrix(d, arity, std::move(e));
}

GateMatrix shift(int d) {
  const auto n = static_cast<std::size_t>(d);
  std::vector<Amplitude> e(n * n, Amplitude{0.0, 0.0});
  for (std::size_t v = 0; v < n; ++v) e[((v + 1) % n) * n + v] = 1.0;
  return GateMatrix(d, 1, std::move(e));
}

GateMatrix clock(int d) {
  const auto n = static_cast<std::size_t>(d);
  std::vector<Amplitude> e(n * n, Amplitude{0.0, 0.0});
  for (std::size_t v = 0; v < n; ++v) e[v * n + v] = root_of_unity(d, static_cast<long long>(v));
  return GateMatrix(d, 1, std::move(e));
}

GateMatrix fourier(int d) {
  const auto n = static_cast<std::size_t>(d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<Amplitude> e(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      e[k * n + j] = root_of_unity(d, static_cast<long long>(j * k)) * scale;
    }
  }
  return GateMatrix(d, 1, std::move(e));
}

GateMatrix hadamard() {
  const double h = 1.0 / std::numbers::sqrt2;
  return GateMatrix(2, 1, {h, h, h, -h});
}

GateMatrix phase_s() { return GateMatrix(2, 1, {1.0, 0.0, 0.0, Amplitude{0.0, 1.0}}); }

GateMatrix phase_t() {
  return GateMatrix(2, 1, {1.0, 0.0, 0.0, std::polar(1.0, std::numbers::pi / 4.0)});
}

GateMatrix controlled_add(int d) {
  const auto n = static_cast<std::size_t>(d);
  const std::size_t rows = n * n;
  std::vector<Amplitude> e(rows * rows, Amplitude{0.0, 0.0});
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) e[(a * n + (a + b) % n) * rows + (a * n + b)] = 1.0;
  }
  return GateMatrix(d, 2, std::move(e));
}

}  // namespace gates

PureState apply_gate(const PureState& state, const GateMatrix& gate, std::span<const int> targets) {
  if (gate.dim() != state.dim()) throw std::invalid_argument("gate dimension differs from state");
  if (static_cast<std::size_t>(gate.arity()) != targets.size()) {
    throw std::invalid_argument("gate arity differs from target count");
  }
  check_targets(state, targets, "apply_gate");
  const int d = state.dim();
  const auto strides = strides_for(d, state.registers());
  const auto offsets = target_offsets(d, strides, targets);
  const std::size_t block = offsets.size();

  std::vector<Amplitude> out(state.size());
  std::vector<Amplitude> gathered(block);
  for (std::size_t idx = 0; idx < state.size(); ++idx) {
    if (label_on(idx, d, strides, targets) != 0) continue;
    for (std::size_t c = 0; c < block; ++c) gathered[c] = state[idx + offsets[c]];
    for (std::size_t r = 0; r < block; ++r) {
      Amplitude s{0.0, 0.0};
      for (std::size_t c = 0; c < block; ++c) s += gate.at(r, c) * gathered[c];
      out[idx + offsets[r]] = s;
    }
  }
  return PureState::adopt(d, state.registers(), std::move(out));
}

// ---------------------------------------------------------------------------

ClassicalBijection::ClassicalBijection(int d, int arity, std::vector<std::uint32_t> forward,
                                       std::vector<std::uint32_t> inverse)
    : d_(d), arity_(arity), forward_(std::move(forward)), inverse_(std::move(inverse)) {
  const std::size_t n = state_size(d, arity);
  if (forward_.size() != n || inverse_.size() != n) {
    throw std::invalid_argument("bijection tables must have d^m entries");
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (inverse_[x] >= n || forward_[inverse_[x]] != x || forward_[x] >= n ||
        inverse_[forward_[x]] != x) {
      throw std::invalid_argument("tables do not describe a bijection and its inverse");
    }
  }
}

ClassicalBijection ClassicalBijection::from_function(
    int d, int arity, const std::function<std::vector<int>(std::span<const int>)>& f) {
  const std::size_t n = state_size(d, arity);
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> fwd(n);
  std::vector<std::uint32_t> inv(n, kUnset);
  for (std::size_t x = 0; x < n; ++x) {
    const auto in = digits_of(x, d, arity);
    const auto out = f(in);
    if (out.size() != static_cast<std::size_t>(arity)) throw std::invalid_argument("bijection output has wrong arity");
    for (int v : out) {
      if (v < 0 || v >= d) throw std::invalid_argument("bijection output label out of range");
    }
    const auto y = static_cast<std::uint32_t>(index_of(out, d));
    if (inv[y] != kUnset) throw std::invalid_argument("function is not injective");
    fwd[x] = y;
    inv[y] = static_cast<std::uint32_t>(x);
  }
  return ClassicalBijection(d, arity, std::move(fwd), std::move(inv));
}

ClassicalBijection ClassicalBijection::identity(int d, int arity) {
  const std::size_t n = state_size(d, arity);
  std::vector<std::uint32_t> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<std::uint32_t>(i);
  return ClassicalBijection(d, arity, t, t);
}

ClassicalBijection ClassicalBijection::inverted() const {
  return ClassicalBijection(d_, arity_, inverse_, forward_);
}

PureState apply_classical_bijection(const PureState& state, const ClassicalBijection& f,
                                    std::span<const int> targets) {
  if (f.dim() != state.dim()) throw std::invalid_argument("bijection dimension differs from state");
  if (static_cast<std::size_t>(f.arity()) != targets.size()) {
    throw std::invalid_argument("bijection arity differs from target count");
  }
  check_targets(state, targets, "apply_classical_bijection");
  const int d = state.dim();
  const auto strides = strides_for(d, state.registers());
  const auto offsets = target_offsets(d, strides, targets);
  std::vector<Amplitude> out(state.size());
  for (std::size_t idx = 0; idx < state.size(); ++idx) {
    const std::size_t label = label_on(idx, d, strides, targets);
    const std::size_t base = idx - offsets[label];
    out[base + offsets[f.forward(static_cast<std::uint32_t>(label))]] = state[idx];
  }
  return PureState::adopt(d, state.registers(), std::move(out));
}

PureState apply_pauli(const PureState& state, int target, int x_power, int z_power) {
  const int targets[] = {target};
  check_targets(state, targets, "apply_pauli");
  const int d = state.dim();
  const auto strides = strides_for(d, state.registers());
  const std::size_t stride = strides[static_cast<std::size_t>(target)];
  const int a = ((x_power % d) + d) % d;
  const int b = ((z_power % d) + d) % d;
  std::vector<Amplitude> phases(static_cast<std::size_t>(d));
  for (int v = 0; v < d; ++v) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>((b * v) % d) / d;
    phases[static_cast<std::size_t>(v)] = (b * v) % d == 0 ? Amplitude{1.0, 0.0}
                                                           : Amplitude{std::cos(angle), std::sin(angle)};
  }
  std::vector<Amplitude> out(state.size());
  for (std::size_t idx = 0; idx < state.size(); ++idx) {
    const int v = static_cast<int>((idx / stride) % static_cast<std::size_t>(d));
    const int w = (v + a) % d;
    const std::size_t dest = idx + (static_cast<std::size_t>(w) - static_cast<std::size_t>(v)) * stride;
    out[dest] = phases[static_cast<std::size_t>(v)] * state[idx];
  }
  return PureState::adopt(d, state.registers(), std::move(out));
}

// ---------------------------------------------------------------------------

PureState tensor(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("tensor of states with different dimensions");
  const std::size_t size = state_size(a.dim(), a.registers() + b.registers());
  std::vector<Amplitude> out(size);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  }
  return PureState::adopt(a.dim(), a.registers() + b.registers(), std::move(out));
}

PureState permute_registers(const PureState& state, std::span<const int> order) {
  const int n = state.registers();
  if (order.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("order length differs from register count");
  check_targets(state, order, "permute_registers");
  const int d = state.dim();
  const auto strides = strides_for(d, n);
  // Old register order[i] moves to new position i.
  std::vector<std::size_t> dest_stride(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) dest_stride[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = strides[static_cast<std::size_t>(i)];
  std::vector<Amplitude> out(state.size());
  for (std::size_t idx = 0; idx < state.size(); ++idx) {
    std::size_t rem = idx;
    std::size_t dest = 0;
    for (int r = n - 1; r >= 0; --r) {
      dest += (rem % static_cast<std::size_t>(d)) * dest_stride[static_cast<std::size_t>(r)];
      rem /= static_cast<std::size_t>(d);
    }
    out[dest] = state[idx];
  }
  return PureState::adopt(d, n, std::move(out));
}

std::optional<std::pair<PureState, PureState>> split_leading(const PureState& state, int leading,
                                                             double tol) {
  if (leading < 0 || leading > state.registers()) throw std::invalid_argument("leading register count out of range");
  const int d = state.dim();
  const std::size_t rows = state_size(d, leading);
  const std::size_t cols = state.size() / rows;
  auto row = [&](std::size_t i) { return state.amps().subspan(i * cols, cols); };

  std::size_t best = 0;
  double best_norm = -1.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const double n2 = norm_sq(row(i));
    if (n2 > best_norm) {
      best_norm = n2;
      best = i;
    }
  }
  std::vector<Amplitude> rest(row(best).begin(), row(best).end());
  const double rn = std::sqrt(best_norm);
  for (auto& a : rest) a /= rn;

  std::vector<Amplitude> lead(rows);
  double residual = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const auto r = row(i);
    Amplitude coef{0.0, 0.0};
    for (std::size_t j = 0; j < cols; ++j) coef += std::conj(rest[j]) * r[j];
    lead[i] = coef;
    for (std::size_t j = 0; j < cols; ++j) residual += std::norm(r[j] - coef * rest[j]);
  }
  if (residual > tol) return std::nullopt;
  canonicalize_phase(lead);
  canonicalize_phase(rest);
  return std::make_pair(make_state(d, leading, std::move(lead)),
                        make_state(d, state.registers() - leading, std::move(rest)));
}

// ---------------------------------------------------------------------------

double fidelity(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim() || a.registers() != b.registers()) throw std::invalid_argument("fidelity of states with different shapes");
  Amplitude s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return std::norm(s);
}

double subsystem_fidelity(const PureState& state, std::span<const int> regs, const PureState& ref) {
  if (ref.dim() != state.dim() || static_cast<std::size_t>(ref.registers()) != regs.size()) {
    throw std::invalid_argument("reference shape does not match the subsystem");
  }
  check_targets(state, regs, "subsystem_fidelity");
  const int d = state.dim();
  const auto strides = strides_for(d, state.registers());
  const auto rest_regs = complement_of(state.registers(), regs);
  std::vector<Amplitude> projected(state.size() / ref.size(), Amplitude{0.0, 0.0});
  for (std::size_t idx = 0; idx < state.size(); ++idx) {
    const std::size_t sub = label_on(idx, d, strides, regs);
    const std::size_t rest = label_on(idx, d, strides, rest_regs);
    projected[rest] += std::conj(ref[sub]) * state[idx];
  }
  return norm_sq(projected);
}

double exchange_expectation(const PureState& state, std::span<const int> block_a,
                            std::span<const int> block_b) {
  check_blocks(state, block_a, block_b);
  std::vector<int> order(static_cast<std::size_t>(state.registers()));
  for (int i = 0; i < state.registers(); ++i) order[static_cast<std::size_t>(i)] = i;
  for (std::size_t j = 0; j < block_a.size(); ++j) {
    order[static_cast<std::size_t>(block_a[j])] = block_b[j];
    order[static_cast<std::size_t>(block_b[j])] = block_a[j];
  }
  const PureState swapped = permute_registers(state, order);
  Amplitude s{0.0, 0.0};
  for (std::size_t i = 0; i < state.size(); ++i) s += std::conj(state[i]) * swapped[i];
  return std::real(s);
}

MeasurementRecord swap_test(const PureState& state, std::span<const int> block_a,
                            std::span<const int> block_b, Rng& rng) {
  // Ancilla in |+>, controlled exchange, Hadamard, measure ancilla: the
  // data register is left in (1 +- S)/2 |psi>, normalized.
  return exchange_projection(state, block_a, block_b, rng);
}

MeasurementRecord symmetric_subspace_measure(const PureState& state, std::span<const int> block_a,
                                             std::span<const int> block_b, Rng& rng) {
  return exchange_projection(state, block_a, block_b, rng);
}

MeasurementRecord parity_measure(const PureState& state, std::span<const int> coeffs,
                                 std::span<const int> targets, Rng& rng) {
  if (coeffs.size() != targets.size()) throw std::invalid_argument("parity coefficient count differs from target count");
  check_targets(state, targets, "parity_measure");
  const int d = state.dim();
  const auto strides = strides_for(d, state.registers());
  std::vector<int> c(coeffs.size());
  for (std::size_t j = 0; j < coeffs.size(); ++j) c[j] = ((coeffs[j] % d) + d) % d;

  std::vector<int> sector(state.size());
  std::vector<double> weights(static_cast<std::size_t>(d), 0.0);
  for (std::size_t idx = 0; idx < state.size(); ++idx) {
    long long s = 0;
    for (std::size_t j = 0; j < targets.size(); ++j) {
      s += static_cast<long long>(c[j]) *
           static_cast<long long>((idx / strides[static_cast<std::size_t>(targets[j])]) % static_cast<std::size_t>(d));
    }
    const int sec = static_cast<int>(s % d);
    sector[idx] = sec;
    weights[static_cast<std::size_t>(sec)] += std::norm(state[idx]);
  }
  const auto outcome = static_cast<int>(sample_index(weights, rng));
  const double p = weights[static_cast<std::size_t>(outcome)];
  const double scale = 1.0 / std::sqrt(p);
  std::vector<Amplitude> out(state.size(), Amplitude{0.0, 0.0});
  for (std::size_t idx = 0; idx < state.size(); ++idx) {
    if (sector[idx] == outcome) out[idx] = state[idx] * scale;
  }
  return MeasurementRecord{outcome, std::min(p, 1.0), PureState::adopt(d, state.registers(), std::move(out))};
}

MeasurementRecord measure_and_discard(const PureState& state, std::span<const int> regs, Rng& rng) {
  check_targets(state, regs, "measure_and_discard");
  const int d = state.dim();
  const auto strides = strides_for(d, state.registers());
  const auto rest_regs = complement_of(state.registers(), regs);
  const std::size_t sub_count = state_size(d, static_cast<int>(regs.size()));
  std::vector<double> weights(sub_count, 0.0);
  for (std::size_t idx = 0; idx < state.size(); ++idx) {
    weights[label_on(idx, d, strides, regs)] += std::norm(state[idx]);
  }
  const std::size_t outcome = sample_index(weights, rng);
  const double p = weights[outcome];
  const double scale = 1.0 / std::sqrt(p);
  std::vector<Amplitude> out(state.size() / sub_count);
  for (std::size_t idx = 0; idx < state.size(); ++idx) {
    if (label_on(idx, d, strides, regs) == outcome) {
      out[label_on(idx, d, strides, rest_regs)] = state[idx] * scale;
    }
  }
  return MeasurementRecord{static_cast<int>(outcome), std::min(p, 1.0),
                           PureState::adopt(d, static_cast<int>(rest_regs.size()), std::move(out))};
}

PureState sample_random_pure(int d, int n, Rng& rng) {
  std::vector<Amplitude> amps(state_size(d, n));
  for (auto& a : amps) {
    const double re = rng.normal();
    const double im = rng.normal();
    a = Amplitude{re, im};
  }
  return make_state(d, n, std::move(amps));
}

nlohmann::json to_json(const PureState& state) {
  nlohmann::json amps = nlohmann::json::array();
  for (const auto& a : state.amps()) amps.push_back({a.real(), a.imag()});
  return {{"d", state.dim()}, {"n", state.registers()}, {"amps", std::move(amps)}};
}

PureState state_from_json(const nlohmann::json& j) {
  const int d = j.at("d").get<int>();
  const int n = j.at("n").get<int>();
  std::vector<Amplitude> amps;
  for (const auto& pair : j.at("amps")) amps.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
  return make_state(d, n, std::move(amps));
}

}  // namespace qsig::qsim
