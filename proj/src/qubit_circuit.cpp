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

#include "qsig/qubit_circuit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace qsig::qsim {

namespace {

bool is_two_qubit(QubitGate g) {
  return g == QubitGate::kCnot || g == QubitGate::kCz || g == QubitGate::kSwap;
}

QubitGate adjoint(QubitGate g) {
  switch (g) {
    case QubitGate::kS:
      return QubitGate::kSdg;
    case QubitGate::kSdg:
      return QubitGate::kS;
    case QubitGate::kT:
      return QubitGate::kTdg;
    case QubitGate::kTdg:
      return QubitGate::kT;
    default:
      return g;  // self-inverse
  }
}

// Index with a zero bit inserted at `bit`.
inline std::size_t insert_zero(std::size_t k, std::size_t bit) {
  const std::size_t low = k & ((std::size_t{1} << bit) - 1);
  return ((k >> bit) << (bit + 1)) | low;
}

template <typename F>
void for_each_pair(std::size_t size, std::size_t bit, F&& f) {
  const std::size_t mask = std::size_t{1} << bit;
  for (std::size_t hi = 0; hi < size; hi += 2 * mask) {
    for (std::size_t lo = 0; lo < mask; ++lo) f(hi + lo, hi + lo + mask);
  }
}

template <typename F>
void for_each_set(std::size_t size, std::size_t bit, F&& f) {
  const std::size_t mask = std::size_t{1} << bit;
  for (std::size_t hi = 0; hi < size; hi += 2 * mask) {
    for (std::size_t lo = 0; lo < mask; ++lo) f(hi + lo + mask);
  }
}

// Calls f(i) for every index i with both bits clear.
template <typename F>
void for_each_quad(std::size_t size, std::size_t bit_a, std::size_t bit_b, F&& f) {
  const std::size_t lo = std::min(bit_a, bit_b);
  const std::size_t hi = std::max(bit_a, bit_b);
  const std::size_t quarter = size >> 2;
  for (std::size_t k = 0; k < quarter; ++k) f(insert_zero(insert_zero(k, lo), hi));
}

void apply_phase_on_set(std::vector<Amplitude>& a, std::size_t bit, Amplitude phase) {
  for_each_set(a.size(), bit, [&](std::size_t i) { a[i] *= phase; });
}

void run_op(std::vector<Amplitude>& a, int n, const QubitOp& op, std::span<const int> registers) {
  const auto bit_of = [&](int q) {
    return static_cast<std::size_t>(n - 1 - registers[static_cast<std::size_t>(q)]);
  };
  const std::size_t size = a.size();
  static const Amplitude kI{0.0, 1.0};
  static const Amplitude kT = std::polar(1.0, std::numbers::pi / 4.0);
  switch (op.gate) {
    case QubitGate::kX:
      for_each_pair(size, bit_of(op.q0), [&](std::size_t i, std::size_t j) { std::swap(a[i], a[j]); });
      break;
    case QubitGate::kY:
      for_each_pair(size, bit_of(op.q0), [&](std::size_t i, std::size_t j) {
        const Amplitude a0 = a[i];
        a[i] = -kI * a[j];
        a[j] = kI * a0;
      });
      break;
    case QubitGate::kZ:
      apply_phase_on_set(a, bit_of(op.q0), -1.0);
      break;
    case QubitGate::kH: {
      const double h = 1.0 / std::numbers::sqrt2;
      for_each_pair(size, bit_of(op.q0), [&](std::size_t i, std::size_t j) {
        const Amplitude a0 = a[i];
        const Amplitude a1 = a[j];
        a[i] = (a0 + a1) * h;
        a[j] = (a0 - a1) * h;
      });
      break;
    }
    case QubitGate::kS:
      apply_phase_on_set(a, bit_of(op.q0), kI);
      break;
    case QubitGate::kSdg:
      apply_phase_on_set(a, bit_of(op.q0), -kI);
      break;
    case QubitGate::kT:
      apply_phase_on_set(a, bit_of(op.q0), kT);
      break;
    case QubitGate::kTdg:
      apply_phase_on_set(a, bit_of(op.q0), std::conj(kT));
      break;
    case QubitGate::kCnot: {
      const std::size_t c = std::size_t{1} << bit_of(op.q0);
      const std::size_t t = std::size_t{1} << bit_of(op.q1);
      for_each_quad(size, bit_of(op.q0), bit_of(op.q1), [&](std::size_t i) { std::swap(a[i | c], a[i | c | t]); });
      break;
    }
    case QubitGate::kCz: {
      const std::size_t both = (std::size_t{1} << bit_of(op.q0)) | (std::size_t{1} << bit_of(op.q1));
      for_each_quad(size, bit_of(op.q0), bit_of(op.q1), [&](std::size_t i) { a[i | both] = -a[i | both]; });
      break;
    }
    case QubitGate::kSwap: {
      const std::size_t ma = std::size_t{1} << bit_of(op.q0);
      const std::size_t mb = std::size_t{1} << bit_of(op.q1);
      for_each_quad(size, bit_of(op.q0), bit_of(op.q1), [&](std::size_t i) { std::swap(a[i | ma], a[i | mb]); });
      break;
    }
  }
}

}  // namespace

QubitCircuit::QubitCircuit(int qubits) : qubits_(qubits) {
  if (qubits < 1) throw std::invalid_argument("circuit needs at least one qubit");
}

QubitCircuit& QubitCircuit::add(QubitGate gate, int q0, int q1) {
  if (q0 < 0 || q0 >= qubits_) throw std::invalid_argument("gate qubit out of range");
  if (is_two_qubit(gate)) {
    if (q1 < 0 || q1 >= qubits_ || q1 == q0) throw std::invalid_argument("bad second qubit for two-qubit gate");
  } else {
    q1 = -1;
  }
  ops_.push_back(QubitOp{gate, q0, q1});
  return *this;
}

QubitCircuit& QubitCircuit::append(const QubitCircuit& other) {
  if (other.qubits_ != qubits_) throw std::invalid_argument("appending a circuit of different width");
  ops_.insert(ops_.end(), other.ops_.begin(), other.ops_.end());
  return *this;
}

QubitCircuit QubitCircuit::inverse() const {
  QubitCircuit inv(qubits_);
  inv.ops_.reserve(ops_.size());
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) inv.ops_.push_back(QubitOp{adjoint(it->gate), it->q0, it->q1});
  return inv;
}

bool QubitCircuit::is_clifford() const {
  for (const auto& op : ops_) {
    if (op.gate == QubitGate::kT || op.gate == QubitGate::kTdg) return false;
  }
  return true;
}

void run_in_place(std::vector<Amplitude>& amps, int n, const QubitCircuit& circuit,
                  std::span<const int> registers) {
  for (const auto& op : circuit.ops()) run_op(amps, n, op, registers);
}

PureState QubitCircuit::apply(const PureState& state, std::span<const int> registers) const {
  if (state.dim() != 2) throw std::invalid_argument("qubit circuit applied to a non-qubit state");
  if (registers.size() != static_cast<std::size_t>(qubits_)) throw std::invalid_argument("register map size differs from circuit width");
  std::vector<bool> seen(static_cast<std::size_t>(state.registers()), false);
  for (int r : registers) {
    if (r < 0 || r >= state.registers() || seen[static_cast<std::size_t>(r)]) {
      throw std::invalid_argument("bad register map for qubit circuit");
    }
    seen[static_cast<std::size_t>(r)] = true;
  }
  std::vector<Amplitude> amps(state.amps().begin(), state.amps().end());
  run_in_place(amps, state.registers(), *this, registers);
  return PureState::adopt(2, state.registers(), std::move(amps));
}

PureState QubitCircuit::apply(const PureState& state, int offset) const {
  std::vector<int> regs(static_cast<std::size_t>(qubits_));
  for (int j = 0; j < qubits_; ++j) regs[static_cast<std::size_t>(j)] = offset + j;
  return apply(state, regs);
}

std::vector<Amplitude> QubitCircuit::to_matrix() const {
  if (qubits_ > 10) throw std::length_error("matrix realization is capped at 10 qubits");
  const std::size_t dim = std::size_t{1} << qubits_;
  std::vector<Amplitude> m(dim * dim);
  std::vector<int> regs(static_cast<std::size_t>(qubits_));
  for (int j = 0; j < qubits_; ++j) regs[static_cast<std::size_t>(j)] = j;
  for (std::size_t col = 0; col < dim; ++col) {
    std::vector<Amplitude> v(dim, Amplitude{0.0, 0.0});
    v[col] = 1.0;
    run_in_place(v, qubits_, *this, regs);
    for (std::size_t row = 0; row < dim; ++row) m[row * dim + col] = v[row];
  }
  return m;
}

}  // namespace qsig::qsim
