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

#include "qsig/fieldcode.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace qsig::fieldcode {

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref_mod(Mat& m, int p) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size();
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && m[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[pivot], m[r]);
    const int inv = mod_inverse(m[r][c], p);
    for (auto& v : m[r]) v = mod(static_cast<long long>(v) * inv, p);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const int factor = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) {
        m[i][j] = mod(m[i][j] - static_cast<long long>(factor) * m[r][j], p);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

// Calls f(subset) for every size-k subset of {0..n-1} in lexicographic order.
template <typename F>
void for_each_subset(int n, int k, F&& f) {
  Vec idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    f(static_cast<const Vec&>(idx));
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

Mat select_rows(const FunctionalMatrix& f, std::span<const int> which) {
  Mat m;
  for (int i : which) m.push_back(f.rows[static_cast<std::size_t>(i)]);
  return m;
}

}  // namespace

bool is_prime(int n) {
  if (n < 2) return false;
  for (int q = 2; q * q <= n; ++q) {
    if (n % q == 0) return false;
  }
  return true;
}

int mod(long long a, int p) {
  const long long r = a % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

int mod_pow(long long base, long long exp, int p) {
  long long result = 1 % p;
  long long b = mod(base, p);
  while (exp > 0) {
    if (exp & 1) result = result * b % p;
    b = b * b % p;
    exp >>= 1;
  }
  return static_cast<int>(result);
}

int mod_inverse(int a, int p) {
  a = mod(a, p);
  if (a == 0) throw std::domain_error("zero has no inverse mod p");
  return mod_pow(a, p - 2, p);
}

int determinant_mod(Mat m, int p) {
  const std::size_t n = m.size();
  long long det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && mod(m[pivot][c], p) == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != c) {
      std::swap(m[pivot], m[c]);
      det = -det;
    }
    const int pv = mod(m[c][c], p);
    det = mod(det * pv, p);
    const int inv = mod_inverse(pv, p);
    for (std::size_t r = c + 1; r < n; ++r) {
      const int factor = mod(static_cast<long long>(m[r][c]) * inv, p);
      if (factor == 0) continue;
      for (std::size_t j = c; j < n; ++j) m[r][j] = mod(m[r][j] - static_cast<long long>(factor) * m[c][j], p);
    }
  }
  return mod(det, p);
}

std::optional<Mat> inverse_mod(Mat m, int p) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    m[i].resize(2 * n, 0);
    m[i][n + i] = 1;
  }
  const auto pivots = rref_mod(m, p);
  if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
  Mat inv(n, Vec(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = m[i][n + j];
  }
  return inv;
}

Vec mat_vec_mod(const Mat& m, std::span<const int> v, int p) {
  Vec out(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    long long s = 0;
    for (std::size_t j = 0; j < v.size(); ++j) s += static_cast<long long>(m[i][j]) * v[j];
    out[i] = mod(s, p);
  }
  return out;
}

Vec FunctionalMatrix::evaluate(std::span<const int> x) const {
  return mat_vec_mod(rows, x, d);
}

FunctionalMatrix gen_functionals(int d, int k, std::span<const int> betas) {
  if (!is_prime(d)) throw std::invalid_argument("modulus " + std::to_string(d) + " is not prime");
  if (k < 1) throw std::invalid_argument("k must be positive");
  if (betas.size() != static_cast<std::size_t>(2 * k)) throw std::invalid_argument("need exactly 2k evaluation points");
  if (betas[0] != 0) throw std::invalid_argument("betas[0] must be 0");
  std::vector<bool> used(static_cast<std::size_t>(d), false);
  for (int b : betas) {
    if (b < 0 || b >= d) throw std::invalid_argument("evaluation point outside Z_d");
    if (used[static_cast<std::size_t>(b)]) throw std::invalid_argument("duplicate betas");
    used[static_cast<std::size_t>(b)] = true;
  }
  FunctionalMatrix f;
  f.d = d;
  f.k = k;
  f.betas.assign(betas.begin(), betas.end());
  for (int b : betas) {
    Vec row(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) row[static_cast<std::size_t>(j)] = mod_pow(b, j, d);
    f.rows.push_back(std::move(row));
  }
  return f;
}

bool check_mds(const FunctionalMatrix& f) {
  if (f.rows.size() != static_cast<std::size_t>(2 * f.k)) return false;
  bool ok = true;
  for_each_subset(2 * f.k, f.k, [&](const Vec& subset) {
    if (ok && determinant_mod(select_rows(f, subset), f.d) == 0) ok = false;
  });
  return ok;
}

DecodeBijection::DecodeBijection(int d, int k, Vec in_subset, Vec complement, Mat forward, Mat inverse)
    : d_(d),
      k_(k),
      in_subset_(std::move(in_subset)),
      complement_(std::move(complement)),
      forward_(std::move(forward)),
      inverse_(std::move(inverse)),
      table_(qsim::ClassicalBijection::from_function(
          d, k, [this](std::span<const int> v) { return this->forward(v); })) {}

Vec DecodeBijection::forward(std::span<const int> y_in) const {
  if (y_in.size() != static_cast<std::size_t>(k_)) throw std::invalid_argument("decode input must have k values");
  return mat_vec_mod(forward_, y_in, d_);
}

Vec DecodeBijection::inverse(std::span<const int> out) const {
  if (out.size() != static_cast<std::size_t>(k_)) throw std::invalid_argument("decode output must have k values");
  return mat_vec_mod(inverse_, out, d_);
}

DecodeBijection decode_bijection(const FunctionalMatrix& f, std::span<const int> in_subset) {
  const int k = f.k;
  if (in_subset.size() != static_cast<std::size_t>(k)) throw std::invalid_argument("input subset must have k indices");
  std::vector<bool> in(static_cast<std::size_t>(2 * k), false);
  for (int r : in_subset) {
    if (r < 1 || r > 2 * k - 1) throw std::invalid_argument("input subset indices must lie in 1..2k-1");
    if (in[static_cast<std::size_t>(r)]) throw std::invalid_argument("input subset has repeated indices");
    in[static_cast<std::size_t>(r)] = true;
  }
  if (!check_mds(f)) throw std::invalid_argument("functionals are not MDS");

  Vec complement;
  for (int i = 1; i < 2 * k; ++i) {
    if (!in[static_cast<std::size_t>(i)]) complement.push_back(i);
  }
  Vec out_rows{0};
  out_rows.insert(out_rows.end(), complement.begin(), complement.end());

  // T: solve rows[in_subset] x = y_in.
  const auto transition = inverse_mod(select_rows(f, in_subset), f.d);
  const auto out_solve = inverse_mod(select_rows(f, out_rows), f.d);
  if (!transition || !out_solve) throw std::logic_error("singular submatrix in an MDS matrix");

  const Mat out_f = select_rows(f, out_rows);
  const Mat in_f = select_rows(f, in_subset);
  auto compose = [&](const Mat& a, const Mat& b) {
    Mat c(static_cast<std::size_t>(k), Vec(static_cast<std::size_t>(k), 0));
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        long long s = 0;
        for (int l = 0; l < k; ++l) {
          s += static_cast<long long>(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)]) *
               b[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)];
        }
        c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = mod(s, f.d);
      }
    }
    return c;
  };
  return DecodeBijection(f.d, k, Vec(in_subset.begin(), in_subset.end()), std::move(complement),
                         compose(out_f, *transition), compose(in_f, *out_solve));
}

bool ParityConstraintSet::satisfied_by(std::span<const int> codeword) const {
  for (const auto& c : vectors) {
    long long s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) s += static_cast<long long>(c[i]) * codeword[i];
    if (mod(s, d) != 0) return false;
  }
  return true;
}

ParityConstraintSet parity_constraints(const FunctionalMatrix& f) {
  // Null space of the transpose of rows 1..2k-1.
  const auto k = static_cast<std::size_t>(f.k);
  const std::size_t width = 2 * k - 1;
  Mat a(k, Vec(width));
  for (std::size_t i = 0; i < width; ++i) {
    for (std::size_t j = 0; j < k; ++j) a[j][i] = f.rows[i + 1][j];
  }
  const auto pivots = rref_mod(a, f.d);
  ParityConstraintSet set;
  set.d = f.d;
  std::vector<bool> is_pivot(width, false);
  for (auto p : pivots) is_pivot[p] = true;
  for (std::size_t free = 0; free < width; ++free) {
    if (is_pivot[free]) continue;
    Vec c(width, 0);
    c[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) c[pivots[r]] = mod(-static_cast<long long>(a[r][free]), f.d);
    set.vectors.push_back(std::move(c));
  }
  return set;
}

nlohmann::json to_json(const KeyMaterial& key) {
  return {{"d", key.d}, {"k", key.k}, {"betas", key.betas}, {"in_subset", key.in_subset}};
}

KeyMaterial key_from_json(const nlohmann::json& j) {
  KeyMaterial key;
  key.d = j.at("d").get<int>();
  key.k = j.at("k").get<int>();
  key.betas = j.at("betas").get<Vec>();
  key.in_subset = j.at("in_subset").get<Vec>();
  return key;
}

}  // namespace qsig::fieldcode
