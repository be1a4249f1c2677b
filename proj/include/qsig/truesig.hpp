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

// Receiver-verifiable signature analog over Z_d. The signer encodes the
// message amplitude on a superposition of codewords of a 2k-functional MDS
// code; the verifier's decode bijection splits the message register off
// from k-1 maximally entangled pairs. Anyone holding the verification key
// can therefore swap in a different message, which forge() does.

#include <complex>
#include <cstdint>
#include <span>

#include <nlohmann/json.hpp>

#include "qsig/fieldcode.hpp"
#include "qsig/mode.hpp"
#include "qsig/qsim.hpp"
#include "qsig/rng.hpp"

namespace qsig::truesig {

/// Public side: the decode bijection and the code's parity checks.
struct VerificationKey {
  fieldcode::DecodeBijection decode;
  fieldcode::ParityConstraintSet parity;

  int dim() const { return decode.dim(); }
  int k() const { return decode.k(); }
};

struct TrueSigKeys {
  fieldcode::FunctionalMatrix signing;
  VerificationKey verifying;
};

/// Registers 0..2k-2 of s_state hold y_1..y_{2k-1}.
struct SignedBundle {
  qsim::PureState s_state;
  qsim::PureState omega_pair;
  qsim::PureState p_copy;
};

struct FourStepVerdict {
  bool step1_syndrome = false;
  bool step2_decoded = false;
  bool step3_entanglement = false;
  bool step4_equality = false;
  bool overall = false;
  Mode mode = Mode::kReferee;
};

/// d^{-1/2} sum_j |j>|j>.
qsim::PureState canonical_pair(int d);

/// Throws std::invalid_argument unless d is prime, k >= 2 and d >= 2k.
/// betas[0] = 0; the other 2k-1 are distinct nonzero values drawn by seed.
TrueSigKeys keygen(int d, int k, std::uint64_t seed);

/// Keys for explicit evaluation points (betas[0] must be 0).
TrueSigKeys keys_from_betas(int d, int k, std::span<const int> betas);

/// psi is the length-d wave function of the message. Throws
/// std::invalid_argument if it is not normalized to 1e-9 or if psi_copy is
/// not a single register of dimension d.
SignedBundle sign(const TrueSigKeys& keys, std::span<const qsim::Amplitude> psi, const qsim::PureState& psi_copy);

/// Applies the decode bijection to registers 0..k-1. Afterwards register 0
/// holds the message and registers (j, k+j-1) hold pair j, j = 1..k-1.
qsim::PureState decode(const VerificationKey& key, const qsim::PureState& s_state);
qsim::PureState undecode(const VerificationKey& key, const qsim::PureState& decoded);

FourStepVerdict verify(const VerificationKey& key, const SignedBundle& bundle, Mode mode, Rng& rng);

/// Decodes, replaces the message register with psi_prime and re-encodes
/// with the inverse bijection; omega_pair is kept. Uses only the
/// verification key. Throws std::invalid_argument if the decoded message
/// register is not a product factor.
SignedBundle forge(const VerificationKey& key, const SignedBundle& bundle, std::span<const qsim::Amplitude> psi_prime,
                   const qsim::PureState& psi_prime_copy);

/// {"d", "k", "s_state", "omega", "p_copy"} with amplitude lists.
nlohmann::json to_json(const SignedBundle& bundle, int k);
SignedBundle bundle_from_json(const nlohmann::json& j);

}  // namespace qsig::truesig
