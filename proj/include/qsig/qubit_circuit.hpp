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

#include <cstdint>
#include <span>
#include <vector>

#include "qsig/qsim.hpp"

namespace qsig::qsim {

enum class QubitGate : std::uint8_t { kX, kY, kZ, kH, kS, kSdg, kT, kTdg, kCnot, kCz, kSwap };

struct QubitOp {
  QubitGate gate;
  int q0;
  int q1 = -1;  // second qubit for two-qubit gates (CNOT: q0 control, q1 target)

  bool operator==(const QubitOp&) const = default;
};

/// A gate sequence over qubits 0..m-1, executed in place with dedicated
/// kernels instead of dense matrices. Only meaningful on d = 2 states.
class QubitCircuit {
 public:
  explicit QubitCircuit(int qubits);

  int qubits() const { return qubits_; }
  std::span<const QubitOp> ops() const { return ops_; }
  std::size_t size() const { return ops_.size(); }

  QubitCircuit& add(QubitGate gate, int q0, int q1 = -1);
  QubitCircuit& append(const QubitCircuit& other);

  /// Reversed sequence of adjoint gates.
  QubitCircuit inverse() const;

  /// True when every gate is in the Clifford set (no T or T-dagger).
  bool is_clifford() const;

  /// Runs the circuit with circuit qubit j acting on state register
  /// offset + j.
  PureState apply(const PureState& state, int offset = 0) const;
  /// Runs the circuit with circuit qubit j acting on registers[j].
  PureState apply(const PureState& state, std::span<const int> registers) const;

  /// Dense 2^m x 2^m row-major matrix; m is capped at 10.
  std::vector<Amplitude> to_matrix() const;

 private:
  int qubits_;
  std::vector<QubitOp> ops_;
};

/// Runs `circuit` in place on raw amplitudes of an n-qubit register file.
void run_in_place(std::vector<Amplitude>& amps, int n, const QubitCircuit& circuit,
                  std::span<const int> registers);

}  // namespace qsig::qsim
