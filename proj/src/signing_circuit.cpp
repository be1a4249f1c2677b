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

#include <algorithm>
#include <stdexcept>

#include "qsig/arbitrated.hpp"

namespace qsig::arbitrated {

using qsim::QubitCircuit;
using qsim::QubitGate;

QubitCircuit signing_circuit(int n, std::uint64_t selector) {
  if (n < 1) throw std::invalid_argument("signing circuit needs at least one qubit");
  Rng rng(selector);
  QubitCircuit c(n);
  const int rounds = std::max(n, 2);
  for (int round = 0; round < rounds; ++round) {
    for (int q = 0; q < n; ++q) c.add(rng.coin() ? QubitGate::kT : QubitGate::kTdg, q);
    for (int q = 0; q < n; ++q) {
      c.add(QubitGate::kH, q);
      if (rng.coin()) c.add(QubitGate::kS, q);
    }
    if (n >= 2 && rng.coin()) {
      for (int q = 0; q + 1 < n; ++q) {
        if (rng.coin()) {
          c.add(QubitGate::kCnot, q, q + 1);
        } else {
          c.add(QubitGate::kCnot, q + 1, q);
        }
      }
    } else {
      static constexpr QubitGate kPaulis[] = {QubitGate::kX, QubitGate::kY, QubitGate::kZ};
      for (int q = 0; q < n; ++q) {
        const auto p = rng.below(4);
        if (p != 0) c.add(kPaulis[p - 1], q);
      }
    }
  }
  return c;
}

std::uint64_t draw_sig_selector(auth::KeyStore& store) {
  auth::KeyStream stream(store, auth::KeyPurpose::kSig);
  return stream.next_u64();
}

}  // namespace qsig::arbitrated
