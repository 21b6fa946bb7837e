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

#include "qtpd/cmatrix.hpp"

#include <stdexcept>

namespace qtpd {

CMatrix::CMatrix(std::size_t rows, std::size_t cols, CVector entries)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
  if (a_.size() != rows_ * cols_) {
    throw std::invalid_argument("CMatrix: entry count does not match shape");
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::zero(std::size_t rows, std::size_t cols) {
  return CMatrix(rows, cols);
}

CMatrix CMatrix::column(const CVector& v) {
  CMatrix m(v.size(), 1, v);
  return m;
}

CMatrix CMatrix::outer(const CVector& v, const CVector& w) {
  CMatrix m(v.size(), w.size());
  for (std::size_t r = 0; r < v.size(); ++r) {
    for (std::size_t c = 0; c < w.size(); ++c) {
      m(r, c) = v[r] * std::conj(w[c]);
    }
  }
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      m(c, r) = std::conj((*this)(r, c));
    }
  }
  return m;
}

CMatrix CMatrix::transpose() const {
  CMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
  }
  return m;
}

CMatrix CMatrix::conjugate() const {
  CMatrix m(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = std::conj(a_[i]);
  return m;
}

Complex CMatrix::trace() const {
  if (!is_square()) throw std::invalid_argument("trace: matrix not square");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) {
    throw std::invalid_argument("CMatrix: shape mismatch in +=");
  }
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) {
    throw std::invalid_argument("CMatrix: shape mismatch in -=");
  }
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex z) {
  for (auto& x : a_) x *= z;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols_ != b.rows_) {
    throw std::invalid_argument("CMatrix: shape mismatch in product");
  }
  CMatrix m(a.rows_, b.cols_);
  for (std::size_t r = 0; r < a.rows_; ++r) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Complex ark = a(r, k);
      if (ark == Complex(0.0)) continue;
      for (std::size_t c = 0; c < b.cols_; ++c) {
        m(r, c) += ark * b(k, c);
      }
    }
  }
  return m;
}

CVector CMatrix::apply(const CVector& v) const {
  if (v.size() != cols_) {
    throw std::invalid_argument("CMatrix: shape mismatch in apply");
  }
  CVector out(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    Complex acc = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

std::size_t CMatrix::argmax_abs() const {
  std::size_t best = 0;
  double best_abs = -1.0;
  for (std::size_t i = 0; i < a_.size(); ++i) {
    const double m = std::abs(a_[i]);
    if (m > best_abs) {
      best_abs = m;
      best = i;
    }
  }
  return best;
}

BipartiteSplit::BipartiteSplit(std::size_t na, std::size_t nb) : n_a(na), n_b(nb) {
  if (na == 0 || nb == 0) {
    throw std::invalid_argument("BipartiteSplit: both sides need at least one qubit");
  }
  if (na > nb) {
    throw std::invalid_argument("BipartiteSplit: convention requires n_a <= n_b");
  }
}

}  // namespace qtpd
