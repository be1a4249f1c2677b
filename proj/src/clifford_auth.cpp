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

#include <array>
#include <cmath>
#include <complex>
#include <iostream>
#include <mutex>
#include <stdexcept>

#include "qsig/authcrypto.hpp"

namespace qsig::auth {

namespace {

using qsim::Amplitude;

constexpr int kChunkBits = 8;
constexpr std::uint32_t kChunkMask = (1U << kChunkBits) - 1;

void check_width(int m) {
  if (m < 1 || m > kMaxCliffordQubits) {
    throw std::invalid_argument("Clifford width must be between 1 and " + std::to_string(kMaxCliffordQubits));
  }
}

bool invertible(std::vector<std::uint32_t> columns) {
  const auto m = columns.size();
  for (std::size_t bit = 0; bit < m; ++bit) {
    std::size_t pivot = bit;
    while (pivot < m && ((columns[pivot] >> bit) & 1U) == 0) ++pivot;
    if (pivot == m) return false;
    std::swap(columns[bit], columns[pivot]);
    for (std::size_t j = 0; j < m; ++j) {
      if (j != bit && ((columns[j] >> bit) & 1U) != 0) columns[j] ^= columns[bit];
    }
  }
  return true;
}

int parity(std::uint32_t v) {
  v ^= v >> 16;
  v ^= v >> 8;
  v ^= v >> 4;
  return static_cast<int>((0x6996U >> (v & 15U)) & 1U);
}

Amplitude i_power(int e) {
  static constexpr std::array<Amplitude, 4> kPowers{Amplitude(1, 0), Amplitude(0, 1), Amplitude(-1, 0), Amplitude(0, -1)};
  return kPowers[static_cast<std::size_t>(e & 3)];
}

// Per-chunk lookup tables for y = A x and e(y).
class MonomialTables {
 public:
  explicit MonomialTables(const MonomialClifford& c) : chunks_((c.bits + kChunkBits - 1) / kChunkBits) {
    for (int ch = 0; ch < chunks_; ++ch) {
      const int lo = ch * kChunkBits;
      const int width = std::min(kChunkBits, c.bits - lo);
      const std::uint32_t above = lo + width >= 32 ? 0U : ~((1U << (lo + width)) - 1U);
      for (std::uint32_t v = 0; v < (1U << width); ++v) {
        std::uint32_t img = 0;
        int lin_quad = 0;
        std::uint32_t cross = 0;
        for (int b = 0; b < width; ++b) {
          if (((v >> b) & 1U) == 0) continue;
          const auto j = static_cast<std::size_t>(lo + b);
          img ^= c.columns[j];
          lin_quad += c.phase_power[j];
          lin_quad += 2 * __builtin_popcount(c.cz_rows[j] & (v << lo));
          cross ^= c.cz_rows[j] & above;
        }
        image_[ch][v] = img;
        lin_quad_[ch][v] = static_cast<std::uint8_t>(lin_quad & 3);
        cross_[ch][v] = cross;
      }
    }
  }

  std::uint32_t image(std::uint32_t x) const {
    std::uint32_t y = 0;
    for (int ch = 0; ch < chunks_; ++ch) y ^= image_[ch][(x >> (ch * kChunkBits)) & kChunkMask];
    return y;
  }

  int phase(std::uint32_t y) const {
    int e = 0;
    std::uint32_t cross = 0;
    for (int ch = 0; ch < chunks_; ++ch) {
      const std::uint32_t v = (y >> (ch * kChunkBits)) & kChunkMask;
      e += lin_quad_[ch][v];
      cross ^= cross_[ch][v];
    }
    return (e + 2 * parity(cross & y)) & 3;
  }

 private:
  int chunks_;
  std::array<std::array<std::uint32_t, 1U << kChunkBits>, 3> image_{};
  std::array<std::array<std::uint8_t, 1U << kChunkBits>, 3> lin_quad_{};
  std::array<std::array<std::uint32_t, 1U << kChunkBits>, 3> cross_{};
};

// out[y ^ post] = scale i^{e(y)} in[x], y = A (x ^ pre).
std::vector<Amplitude> monomial_forward(const MonomialClifford& c, std::span<const Amplitude> in, double scale) {
  const MonomialTables tables(c);
  std::vector<Amplitude> out(in.size());
  for (std::uint32_t x = 0; x < in.size(); ++x) {
    const std::uint32_t y = tables.image(x ^ c.pre);
    out[y ^ c.post] = in[x] * i_power(tables.phase(y)) * scale;
  }
  return out;
}

// Adjoint of monomial_forward: out[x] = scale i^{-e(y)} in[y ^ post].
std::vector<Amplitude> monomial_adjoint(const MonomialClifford& c, std::span<const Amplitude> in, double scale) {
  const MonomialTables tables(c);
  std::vector<Amplitude> out(in.size());
  for (std::uint32_t x = 0; x < in.size(); ++x) {
    const std::uint32_t y = tables.image(x ^ c.pre);
    out[x] = in[y ^ c.post] * i_power(-tables.phase(y)) * scale;
  }
  return out;
}

// Unnormalized Hadamard butterflies on index bits 0..h-1.
void hadamard_layer(std::vector<Amplitude>& amps, int h) {
  for (int b = 0; b < h; ++b) {
    const std::size_t stride = std::size_t{1} << b;
    for (std::size_t base = 0; base < amps.size(); base += 2 * stride) {
      for (std::size_t i = base; i < base + stride; ++i) {
        const Amplitude a = amps[i];
        const Amplitude c = amps[i + stride];
        amps[i] = a + c;
        amps[i + stride] = a - c;
      }
    }
  }
}

void check_state(const CliffordOp& op, const qsim::PureState& state) {
  if (state.dim() != 2 || state.registers() != op.qubits()) {
    throw std::invalid_argument("Clifford width differs from the state's qubit count");
  }
}

// Number of Lagrangians meeting a fixed Lagrangian in dimension m - h, for
// h = 0..m: [m choose h]_2 * 2^{h (h + 1) / 2}.
std::vector<double> hadamard_weights(int m) {
  std::vector<double> w;
  for (int h = 0; h <= m; ++h) {
    double binom = 1.0;
    for (int i = 0; i < h; ++i) binom *= (std::ldexp(1.0, m - i) - 1.0) / (std::ldexp(1.0, i + 1) - 1.0);
    w.push_back(binom * std::ldexp(1.0, h * (h + 1) / 2));
  }
  return w;
}

}  // namespace

MonomialClifford MonomialClifford::identity(int bits) {
  check_width(bits);
  MonomialClifford c;
  c.bits = bits;
  for (int j = 0; j < bits; ++j) c.columns.push_back(1U << j);
  c.phase_power.assign(static_cast<std::size_t>(bits), 0);
  c.cz_rows.assign(static_cast<std::size_t>(bits), 0);
  return c;
}

MonomialClifford MonomialClifford::sample(int bits, Rng& rng) {
  check_width(bits);
  const std::uint32_t all = (1U << bits) - 1U;
  MonomialClifford c;
  c.bits = bits;
  c.columns.resize(static_cast<std::size_t>(bits));
  do {
    for (auto& col : c.columns) col = static_cast<std::uint32_t>(rng.next_u64()) & all;
  } while (!invertible(c.columns));
  c.pre = static_cast<std::uint32_t>(rng.next_u64()) & all;
  c.post = static_cast<std::uint32_t>(rng.next_u64()) & all;
  for (int j = 0; j < bits; ++j) {
    c.phase_power.push_back(static_cast<std::uint8_t>(rng.below(4)));
    const std::uint32_t above = all & ~((2U << j) - 1U);
    c.cz_rows.push_back(static_cast<std::uint32_t>(rng.next_u64()) & above);
  }
  return c;
}

CliffordOp CliffordOp::identity(int m) {
  return CliffordOp{MonomialClifford::identity(m), 0, MonomialClifford::identity(m)};
}

qsim::PureState CliffordOp::apply(const qsim::PureState& state) const {
  check_state(*this, state);
  std::vector<Amplitude> amps = monomial_forward(right, state.amps(), 1.0);
  hadamard_layer(amps, hadamards);
  amps = monomial_forward(left, amps, std::pow(2.0, -0.5 * hadamards));
  return qsim::PureState::adopt(2, qubits(), std::move(amps));
}

qsim::PureState CliffordOp::apply_inverse(const qsim::PureState& state) const {
  check_state(*this, state);
  std::vector<Amplitude> amps = monomial_adjoint(left, state.amps(), 1.0);
  hadamard_layer(amps, hadamards);
  amps = monomial_adjoint(right, amps, std::pow(2.0, -0.5 * hadamards));
  return qsim::PureState::adopt(2, qubits(), std::move(amps));
}

std::vector<Amplitude> CliffordOp::to_matrix() const {
  const int m = qubits();
  if (m > 10) throw std::invalid_argument("dense Clifford matrices are limited to 10 qubits");
  const std::size_t dim = std::size_t{1} << m;
  std::vector<Amplitude> matrix(dim * dim);
  for (std::size_t col = 0; col < dim; ++col) {
    std::vector<Amplitude> e(dim);
    e[col] = 1.0;
    std::vector<Amplitude> v = monomial_forward(right, e, 1.0);
    hadamard_layer(v, hadamards);
    v = monomial_forward(left, v, std::pow(2.0, -0.5 * hadamards));
    for (std::size_t row = 0; row < dim; ++row) matrix[row * dim + col] = v[row];
  }
  return matrix;
}

CliffordOp sample_clifford(int m, Rng& rng) {
  check_width(m);
  const std::vector<double> weights = hadamard_weights(m);
  double total = 0.0;
  for (double w : weights) total += w;
  double u = rng.uniform() * total;
  int h = m;
  for (int i = 0; i <= m; ++i) {
    if (u < weights[static_cast<std::size_t>(i)]) {
      h = i;
      break;
    }
    u -= weights[static_cast<std::size_t>(i)];
  }
  CliffordOp op;
  op.right = MonomialClifford::sample(m, rng);
  op.hadamards = h;
  op.left = MonomialClifford::sample(m, rng);
  return op;
}

CliffordOp AuthKey::clifford() const {
  check_width(qubits);
  if (pad.size() != 2 * static_cast<std::size_t>(qubits)) throw std::invalid_argument("authentication pad has wrong length");
  Rng rng(selector);
  CliffordOp op = sample_clifford(qubits, rng);
  // X^x Z^z on qubit q after the Clifford; qubit q is index bit m-1-q. The
  // sign Z picks up from the existing post mask is a global phase.
  for (int q = 0; q < qubits; ++q) {
    const auto bit = static_cast<std::size_t>(qubits - 1 - q);
    if (pad[static_cast<std::size_t>(q)] != 0) op.left.post ^= 1U << bit;
    if (pad[static_cast<std::size_t>(qubits + q)] != 0) op.left.phase_power[bit] = (op.left.phase_power[bit] + 2) & 3;
  }
  return op;
}

AuthKey draw_auth_key(KeyStore& store, int qubits) {
  check_width(qubits);
  AuthKey key;
  key.qubits = qubits;
  key.key_id = store.counter(KeyPurpose::kAuth);
  KeyStream stream(store, KeyPurpose::kAuth);
  key.selector = stream.next_u64();
  key.pad.resize(2 * static_cast<std::size_t>(qubits));
  for (auto& b : key.pad) b = stream.next_byte() & 1U;
  return key;
}

AuthBlock qauth_encode(const qsim::PureState& state, const AuthKey& key, int t) {
  if (key.qubits != state.registers() + t) throw std::invalid_argument("authentication key width differs from n + t");
  return qauth_encode(state, key.clifford(), t, key.key_id);
}

AuthBlock qauth_encode(const qsim::PureState& state, const CliffordOp& clifford, int t, std::uint64_t key_id) {
  if (state.dim() != 2) throw std::invalid_argument("Clifford authentication needs qubit registers");
  if (t < 0) throw std::invalid_argument("trap count must be non-negative");
  const int n = state.registers();
  if (clifford.qubits() != n + t) throw std::invalid_argument("Clifford width differs from n + t");
  if (t == 0) {
    static std::once_flag warned;
    std::call_once(warned, [] {
      std::clog << "warning: quantum authentication with t = 0 trap qubits detects nothing\n";
    });
  }
  const qsim::PureState padded = qsim::tensor(state, qsim::PureState::zero(2, t));
  return AuthBlock{clifford.apply(padded), n, t, key_id};
}

QauthResult qauth_verify(const AuthBlock& block, const AuthKey& key, Rng& rng) {
  if (block.payload.registers() != block.n + block.t || block.payload.dim() != 2) {
    throw std::invalid_argument("authentication block shape mismatch");
  }
  if (key.qubits != block.n + block.t) throw std::invalid_argument("authentication key width differs from block");
  const qsim::PureState decoded = key.clifford().apply_inverse(block.payload);
  std::vector<int> traps;
  for (int r = block.n; r < block.n + block.t; ++r) traps.push_back(r);
  auto m = qsim::measure_and_discard(decoded, traps, rng);
  return QauthResult{m.outcome == 0, std::move(m.post_state)};
}

}  // namespace qsig::auth
