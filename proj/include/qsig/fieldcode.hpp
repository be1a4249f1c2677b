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

// Prime-field linear algebra behind the receiver-verifiable signature
// analog: Vandermonde functionals with the MDS property, the decode
// bijection built from a k x k solve, and the parity constraints of the
// resulting code.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "qsig/qsim.hpp"

namespace qsig::fieldcode {

using Vec = std::vector<int>;
using Mat = std::vector<Vec>;

bool is_prime(int n);
int mod(long long a, int p);
int mod_pow(long long base, long long exp, int p);
/// Throws std::domain_error for a == 0 mod p.
int mod_inverse(int a, int p);

int determinant_mod(Mat m, int p);
std::optional<Mat> inverse_mod(Mat m, int p);
Vec mat_vec_mod(const Mat& m, std::span<const int> v, int p);

/// 2k linear functionals on Z_d^k. rows[i] computes y_i(x) = <rows[i], x>.
struct FunctionalMatrix {
  int d = 0;
  int k = 0;
  Vec betas;  // evaluation points, empty when built from raw rows
  Mat rows;

  /// (y_0(x), ..., y_{2k-1}(x)).
  Vec evaluate(std::span<const int> x) const;
};

/// Vandermonde rows (beta_i^0, ..., beta_i^{k-1}) for 2k distinct betas with
/// betas[0] = 0, so row 0 is e_0. Throws std::invalid_argument when d is not
/// prime, the betas are not 2k distinct elements of Z_d, or betas[0] != 0.
FunctionalMatrix gen_functionals(int d, int k, std::span<const int> betas);

/// Every k-row submatrix invertible mod d (exhaustive over C(2k, k)).
bool check_mds(const FunctionalMatrix& f);

/// Basis permutation U on Z_d^k: (y_{r_1}, ..., y_{r_k}) -> (x_0, y_c...)
/// where c runs over the complement of the input subset within 1..2k-1 in
/// ascending order. Linear over Z_d; also tabulated for the simulator.
class DecodeBijection {
 public:
  int dim() const { return d_; }
  int k() const { return k_; }
  std::span<const int> in_subset() const { return in_subset_; }
  std::span<const int> complement() const { return complement_; }

  Vec forward(std::span<const int> y_in) const;
  Vec inverse(std::span<const int> out) const;
  const qsim::ClassicalBijection& table() const { return table_; }

 private:
  friend DecodeBijection decode_bijection(const FunctionalMatrix&, std::span<const int>);
  DecodeBijection(int d, int k, Vec in_subset, Vec complement, Mat forward, Mat inverse);

  int d_;
  int k_;
  Vec in_subset_;
  Vec complement_;
  Mat forward_;  // output functionals composed with the k x k solve
  Mat inverse_;
  qsim::ClassicalBijection table_;
};

/// Throws std::invalid_argument if the subset is not k distinct indices in
/// 1..2k-1 or if f is not MDS.
DecodeBijection decode_bijection(const FunctionalMatrix& f, std::span<const int> in_subset);

/// k-1 independent vectors c in Z_d^{2k-1} with sum_i c_i y_{i+1}(x) = 0.
struct ParityConstraintSet {
  int d = 0;
  Mat vectors;

  bool satisfied_by(std::span<const int> codeword) const;
};

ParityConstraintSet parity_constraints(const FunctionalMatrix& f);

/// Serialized key material: {"d", "k", "betas", "in_subset"}.
struct KeyMaterial {
  int d = 0;
  int k = 0;
  Vec betas;
  Vec in_subset;
};

nlohmann::json to_json(const KeyMaterial& key);
KeyMaterial key_from_json(const nlohmann::json& j);

}  // namespace qsig::fieldcode
