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

#include <stdexcept>

#include "qsig/authcrypto.hpp"

namespace qsig::auth {

QotpKey draw_qotp_key(KeyStore& store, int d, int registers) {
  KeyStream stream(store, KeyPurpose::kQotp);
  QotpKey key;
  key.d = d;
  key.digits.reserve(static_cast<std::size_t>(registers));
  for (int i = 0; i < registers; ++i) {
    const int a = static_cast<int>(stream.below(static_cast<std::uint64_t>(d)));
    const int b = static_cast<int>(stream.below(static_cast<std::uint64_t>(d)));
    key.digits.emplace_back(a, b);
  }
  return key;
}

qsim::PureState qotp(const qsim::PureState& state, const QotpKey& key, Direction direction) {
  if (key.digits.size() != static_cast<std::size_t>(state.registers())) {
    throw std::invalid_argument("one-time pad key length differs from register count");
  }
  if (key.d != state.dim()) throw std::invalid_argument("one-time pad key dimension differs from state");
  qsim::PureState out = state;
  for (int r = 0; r < state.registers(); ++r) {
    const auto [a, b] = key.digits[static_cast<std::size_t>(r)];
    if (direction == Direction::kEncrypt) {
      out = qsim::apply_pauli(out, r, a, b);  // X^a Z^b
    } else {
      // (X^a Z^b)^-1 = Z^-b X^-a
      out = qsim::apply_pauli(out, r, -a, 0);
      out = qsim::apply_pauli(out, r, 0, -b);
    }
  }
  return out;
}

}  // namespace qsig::auth
