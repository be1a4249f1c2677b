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

// Minimal dense pure-state simulator for n registers of equal dimension d.
//
// Layout: amplitude index = sum_i label_i * d^(n-1-i), i.e. register 0 is
// the most significant digit. States are values; every operation returns a
// new state and leaves its inputs untouched.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qsig/rng.hpp"

namespace qsig::qsim {

using Amplitude = std::complex<double>;

/// Absolute tolerance for norms, unitarity and fidelity comparisons.
inline constexpr double kTolerance = 1e-9;

/// Upper bound on d^n for any state. Default 2^20.
std::size_t max_amplitudes();
void set_max_amplitudes(std::size_t cap);

/// d^n with overflow and cap checking.
std::size_t state_size(int d, int n);

class PureState {
 public:
  int dim() const { return d_; }
  int registers() const { return n_; }
  std::size_t size() const { return amps_.size(); }
  std::span<const Amplitude> amps() const { return amps_; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }
  double norm() const;

  /// Computational basis state |labels[0], ..., labels[n-1]>.
  static PureState basis(int d, std::span<const int> labels);
  static PureState zero(int d, int n);

  /// Takes ownership of amplitudes that the caller guarantees are
  /// normalized. Shape is checked; the norm is checked to kTolerance.
  static PureState adopt(int d, int n, std::vector<Amplitude> amps);

 private:
  PureState(int d, int n, std::vector<Amplitude> amps) : d_(d), n_(n), amps_(std::move(amps)) {}

  int d_;
  int n_;
  std::vector<Amplitude> amps_;
};

/// Normalizes `amps`. Throws std::invalid_argument on a length mismatch or a
/// zero vector.
PureState make_state(int d, int n, std::vector<Amplitude> amps);

/// Label digits of `index` for a d^n layout.
std::vector<int> digits_of(std::size_t index, int d, int n);
std::size_t index_of(std::span<const int> digits, int d);

// ---------------------------------------------------------------------------
// Gates

class GateMatrix {
 public:
  /// Row-major d^m x d^m entries. Throws std::invalid_argument unless the
  /// matrix is unitary to kTolerance per entry.
  GateMatrix(int d, int arity, std::vector<Amplitude> entries);

  int dim() const { return d_; }
  int arity() const { return arity_; }
  std::size_t rows() const { return rows_; }
  const Amplitude& at(std::size_t r, std::size_t c) const { return entries_[r * rows_ + c]; }
  std::span<const Amplitude> entries() const { return entries_; }

  GateMatrix dagger() const;
  GateMatrix operator*(const GateMatrix& rhs) const;

 private:
  struct Trusted {};
  GateMatrix(Trusted, int d, int arity, std::vector<Amplitude> entries);

  int d_;
  int arity_;
  std::size_t rows_;
  std::vector<Amplitude> entries_;
};

namespace gates {
GateMatrix identity(int d, int arity = 1);
/// Generalized X: |v> -> |v + 1 mod d>.
GateMatrix shift(int d);
/// Generalized Z: |v> -> w^v |v>, w = exp(2 pi i / d).
GateMatrix clock(int d);
/// Quantum Fourier transform on one register: F|j> = d^-1/2 sum_k w^{jk} |k>.
GateMatrix fourier(int d);
GateMatrix hadamard();
GateMatrix phase_s();
GateMatrix phase_t();
/// Control is the first target, data the second: |a, b> -> |a, b + a mod d>.
GateMatrix controlled_add(int d);
}  // namespace gates

/// Applies `gate` on `targets` (gate register j acts on state register
/// targets[j]). Throws std::invalid_argument for repeated or out-of-range
/// targets, or an arity/dimension mismatch.
PureState apply_gate(const PureState& state, const GateMatrix& gate, std::span<const int> targets);

/// A bijection on Z_d^m given by forward and inverse lookup tables over
/// big-endian labels.
class ClassicalBijection {
 public:
  /// Validates the tables (range and forward(inverse(x)) == x for all x).
  ClassicalBijection(int d, int arity, std::vector<std::uint32_t> forward,
                     std::vector<std::uint32_t> inverse);

  /// Tabulates `f` and computes its inverse; throws if `f` is not bijective.
  static ClassicalBijection from_function(int d, int arity,
                                          const std::function<std::vector<int>(std::span<const int>)>& f);
  static ClassicalBijection identity(int d, int arity);

  int dim() const { return d_; }
  int arity() const { return arity_; }
  std::uint32_t forward(std::uint32_t label) const { return forward_[label]; }
  std::uint32_t inverse(std::uint32_t label) const { return inverse_[label]; }
  std::span<const std::uint32_t> forward_table() const { return forward_; }
  ClassicalBijection inverted() const;

 private:
  int d_;
  int arity_;
  std::vector<std::uint32_t> forward_;
  std::vector<std::uint32_t> inverse_;
};

/// Moves the amplitude of label v on `targets` to label f(v).
PureState apply_classical_bijection(const PureState& state, const ClassicalBijection& f,
                                    std::span<const int> targets);

/// X^a Z^b on one register (generalized Pauli).
PureState apply_pauli(const PureState& state, int target, int x_power, int z_power);

// ---------------------------------------------------------------------------
// Structure

PureState tensor(const PureState& a, const PureState& b);

/// New register i is old register order[i]; `order` must be a permutation.
PureState permute_registers(const PureState& state, std::span<const int> order);

/// If the first `leading` registers factor out as a pure product (residual
/// below `tol`), returns (leading factor, remainder). Each factor is phase
/// canonicalized: its largest-magnitude amplitude (first on ties) is real
/// and positive.
std::optional<std::pair<PureState, PureState>> split_leading(const PureState& state, int leading,
                                                             double tol = kTolerance);

// ---------------------------------------------------------------------------
// Measurement and comparison

inline constexpr int kAccept = 0;
inline constexpr int kReject = 1;

struct MeasurementRecord {
  int outcome;
  double probability;
  PureState post_state;
};

/// |<a|b>|^2.
double fidelity(const PureState& a, const PureState& b);

/// <ref| rho_regs |ref>: fidelity of the reduced state on `regs` with the
/// pure reference. Equals fidelity() when regs cover the whole state.
double subsystem_fidelity(const PureState& state, std::span<const int> regs, const PureState& ref);

/// Re <psi| S |psi> for the exchange S of block a with block b; equals
/// |<phi|chi>|^2 when the blocks hold pure factors phi and chi.
double exchange_expectation(const PureState& state, std::span<const int> block_a,
                            std::span<const int> block_b);

/// Swap test between blocks a and b. Accept (outcome kAccept) with
/// probability (1 + Re<S>)/2; post_state is the data state conditioned on
/// the ancilla outcome, ancilla discarded.
MeasurementRecord swap_test(const PureState& state, std::span<const int> block_a,
                            std::span<const int> block_b, Rng& rng);

/// Projective measurement {P_sym, P_anti} for exchange of blocks a and b.
MeasurementRecord symmetric_subspace_measure(const PureState& state, std::span<const int> block_a,
                                             std::span<const int> block_b, Rng& rng);

/// Nondestructive measurement of sum_i coeffs[i] * v_{targets[i]} mod d.
MeasurementRecord parity_measure(const PureState& state, std::span<const int> coeffs,
                                 std::span<const int> targets, Rng& rng);

/// Computational-basis measurement of `regs`, which are then removed.
/// outcome is the big-endian label of the measured registers; post_state
/// holds the remaining registers in their original order.
MeasurementRecord measure_and_discard(const PureState& state, std::span<const int> regs, Rng& rng);

/// Haar-random state: i.i.d. complex normal amplitudes, normalized.
PureState sample_random_pure(int d, int n, Rng& rng);

// ---------------------------------------------------------------------------
// Debug dump: {"d": d, "n": n, "amps": [[re, im], ...]}

nlohmann::json to_json(const PureState& state);
PureState state_from_json(const nlohmann::json& j);

}  // namespace qsig::qsim
