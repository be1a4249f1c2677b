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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "qsig/qsim.hpp"

namespace qsig::testing {

using qsim::Amplitude;
using qsim::PureState;

inline constexpr double kTol = 1e-9;

inline ::testing::AssertionResult states_near(const PureState& a, const PureState& b, double tol = kTol) {
  if (a.dim() != b.dim() || a.registers() != b.registers()) {
    return ::testing::AssertionFailure() << "shape (" << a.dim() << ", " << a.registers() << ") vs (" << b.dim()
                                         << ", " << b.registers() << ")";
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tol) {
      return ::testing::AssertionFailure() << "amplitude " << i << ": " << a[i] << " vs " << b[i];
    }
  }
  return ::testing::AssertionSuccess();
}

/// Dense square matrix helpers over row-major vectors.
inline std::vector<Amplitude> matmul(const std::vector<Amplitude>& a, const std::vector<Amplitude>& b, std::size_t n) {
  std::vector<Amplitude> c(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Amplitude aik = a[i * n + k];
      if (aik == Amplitude{}) continue;
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] += aik * b[k * n + j];
    }
  }
  return c;
}

inline std::vector<Amplitude> adjoint(const std::vector<Amplitude>& a, std::size_t n) {
  std::vector<Amplitude> c(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) c[j * n + i] = std::conj(a[i * n + j]);
  }
  return c;
}

inline std::vector<Amplitude> kron(const std::vector<Amplitude>& a, std::size_t na, const std::vector<Amplitude>& b,
                                   std::size_t nb) {
  const std::size_t n = na * nb;
  std::vector<Amplitude> c(n * n);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < na; ++j) {
      for (std::size_t k = 0; k < nb; ++k) {
        for (std::size_t l = 0; l < nb; ++l) c[(i * nb + k) * n + (j * nb + l)] = a[i * na + j] * b[k * nb + l];
      }
    }
  }
  return c;
}

/// Single-qubit Pauli 0..3 = I, X, Y, Z.
inline std::vector<Amplitude> pauli1(int p) {
  const Amplitude i{0, 1};
  switch (p) {
    case 1:
      return {0, 1, 1, 0};
    case 2:
      return {0, -i, i, 0};
    case 3:
      return {1, 0, 0, -1};
    default:
      return {1, 0, 0, 1};
  }
}

/// Tensor product of single-qubit Paulis; qubit 0 is the most significant
/// factor.
inline std::vector<Amplitude> pauli_string(const std::vector<int>& paulis) {
  std::vector<Amplitude> m{1};
  std::size_t dim = 1;
  for (int p : paulis) {
    m = kron(m, dim, pauli1(p), 2);
    dim *= 2;
  }
  return m;
}

/// |tr(A^dagger B)| / n; 1 iff A and B agree up to a phase when both are
/// unitary.
inline double phase_overlap(const std::vector<Amplitude>& a, const std::vector<Amplitude>& b, std::size_t n) {
  Amplitude tr{};
  for (std::size_t i = 0; i < n * n; ++i) tr += std::conj(a[i]) * b[i];
  return std::abs(tr) / static_cast<double>(n);
}

}  // namespace qsig::testing
