// Copyright 2026 The qtpd Authors
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

#ifndef QTPD_CMATRIX_HPP
#define QTPD_CMATRIX_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace qtpd {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Dense row-major complex matrix. Deliberately minimal: the decomposition
/// pipeline works on matrices of dimension at most a few hundred, so the
/// naive O(n^3) product is never the bottleneck.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols) {}
  CMatrix(std::size_t rows, std::size_t cols, CVector entries);

  static CMatrix identity(std::size_t n);
  static CMatrix zero(std::size_t rows, std::size_t cols);
  /// Column vector wrapping an amplitude array.
  static CMatrix column(const CVector& v);
  /// Rank-one |v><w|.
  static CMatrix outer(const CVector& v, const CVector& w);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return a_[r * cols_ + c];
  }

  const CVector& data() const { return a_; }
  CVector& data() { return a_; }

  CMatrix adjoint() const;
  CMatrix transpose() const;
  CMatrix conjugate() const;
  Complex trace() const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(Complex z);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(Complex z, CMatrix m) { return m *= z; }
  friend CMatrix operator*(CMatrix m, Complex z) { return m *= z; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);

  /// Matrix-vector product; v.size() must equal cols().
  CVector apply(const CVector& v) const;

  /// Index (row-major) of the entry with the largest modulus; ties resolved
  /// by the first occurrence, so the phase gauge derived from it is stable.
  std::size_t argmax_abs() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  CVector a_;
};

/// Bipartite qubit split (n_a + n_b qubits).  The convention d_A <= d_B is
/// enforced at construction; helpers expose the subsystem dimensions.
struct BipartiteSplit {
  std::size_t n_a = 0;
  std::size_t n_b = 0;

  BipartiteSplit() = default;
  BipartiteSplit(std::size_t na, std::size_t nb);

  std::size_t d_a() const { return std::size_t{1} << n_a; }
  std::size_t d_b() const { return std::size_t{1} << n_b; }
  std::size_t d() const { return d_a() * d_b(); }
  std::size_t n() const { return n_a + n_b; }
};

}  // namespace qtpd

#endif  // QTPD_CMATRIX_HPP
