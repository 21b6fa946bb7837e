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

#ifndef QTPD_TPD_HPP
#define QTPD_TPD_HPP

#include <utility>
#include <vector>

#include "qtpd/cmatrix.hpp"
#include "qtpd/linalg.hpp"

namespace qtpd {

/// Singular values below rank_tol * sigma_max are treated as zero.
inline constexpr double kDefaultRankTol = 1e-10;

/// Canonical Kronecker expansion U = sum_k s_k A_k (x) B_k with
///   <A_j|A_k>_HS = delta_jk d_A,   <B_j|B_k>_HS = delta_jk d_B,
///   s_k >= 0 descending, and the phase gauge that makes the largest-modulus
///   entry of each A_k real positive.
struct TensorProductDecomposition {
  BipartiteSplit split;
  std::vector<double> s;
  std::vector<CMatrix> a_ops;
  std::vector<CMatrix> b_ops;
  /// Degenerate runs of s (adjacent gap < kClusterGapTol); factor pairs
  /// inside a run are defined only up to a joint rotation of the run's span.
  std::vector<std::pair<std::size_t, std::size_t>> clusters;
  /// Set by low_rank_truncate when the cut fell inside a degenerate run, in
  /// which case the kept factors are one gauge choice among equivalent ones.
  bool truncated_inside_cluster = false;

  std::size_t rank() const { return s.size(); }
};

/// Reshuffle-and-SVD expansion of an arbitrary square matrix on a bipartite
/// system (the input need not be unitary).  Modes with singular value below
/// rank_tol * sigma_max are dropped.
TensorProductDecomposition classical_tpd(const CMatrix& u, const BipartiteSplit& split,
                                         double rank_tol = kDefaultRankTol);

/// Restores canonical form: descending nonnegative s, orthonormal factors,
/// phase gauge on the A side.  Already-canonical input passes through
/// unchanged (up to the sort's stable reindexing); non-orthonormal input is
/// rebuilt from scratch via reconstruct + classical_tpd.
TensorProductDecomposition canonicalize(const TensorProductDecomposition& tpd);

/// sum_k s_k kron(A_k, B_k).
CMatrix reconstruct(const TensorProductDecomposition& tpd);

/// Keeps the leading r terms; coefficients are not renormalized, so the
/// truncated object is exactly the partial sum.
TensorProductDecomposition low_rank_truncate(const TensorProductDecomposition& tpd,
                                             std::size_t r);

/// Frobenius error of the best rank-r Kronecker approximation:
/// sqrt(sum_{k>r} s_k^2) (Schmidt tail).
double low_rank_error(const TensorProductDecomposition& tpd, std::size_t r);

/// Polar-decomposition projection onto the unitary group: for m = U S V^dag
/// the closest unitary is U V^dag, at Frobenius distance
/// sqrt(sum_k (sigma_k - 1)^2).  Rank-deficient input (sigma_min <= 1e-10)
/// is a hard error.
struct NearestUnitaryResult {
  CMatrix unitary;
  double distance = 0.0;
};
NearestUnitaryResult nearest_unitary(const CMatrix& m);

/// Multi-factor expansion u = sum s_{j1..jM} A^(1)_j1 (x) ... (x) A^(M)_jM.
/// Per-site bases come from the bipartite expansion of site m vs the rest
/// (sites taken left to right); the coefficient tensor is the projection of
/// u onto the resulting product basis and is complex in general, except that
/// the leading coefficient s_{1..1} is gauged real nonnegative.
struct MultipartiteTPD {
  std::vector<std::size_t> dims;           // site dimensions, left to right
  std::vector<std::vector<CMatrix>> bases; // per-site factor operators
  std::vector<Complex> s;                  // row-major over per-site ranks
  std::vector<std::size_t> ranks;          // shape of s

  Complex coefficient(const std::vector<std::size_t>& idx) const;
  /// s_{1...1} (real by gauge).
  double leading() const { return s.empty() ? 0.0 : s.front().real(); }
};

MultipartiteTPD multipartite_tpd(const CMatrix& u, const std::vector<std::size_t>& dims,
                                 double rank_tol = kDefaultRankTol);

/// Fully factored approximation: each dominant factor A^(m)_1 is projected to
/// its nearest unitary U_m, with the a-priori error bound
///   (1/sqrt(2 d)) |u - U_1 (x) ... (x) U_M|_F
///     <= sqrt(eps_s) + sqrt(eps_s^2 / 2 + sum_m eps_m^2),
/// eps_s = 1 - s_{1..1} and eps_m = |A^(m)_1 - U_m|_F / sqrt(2 d_m).
struct FqtApproximation {
  std::vector<CMatrix> factors;    // U_m, unitary
  CMatrix product;                 // U_1 (x) ... (x) U_M
  double eps_s = 0.0;
  std::vector<double> eps_m;
  double bound = 0.0;              // right-hand side above
  double achieved = 0.0;           // (1/sqrt(2 d)) |u - product|_F
  double achieved_frobenius = 0.0; // |u - product|_F, unnormalized
};

FqtApproximation fqt_approximation(const CMatrix& u, const std::vector<std::size_t>& dims,
                                   double rank_tol = kDefaultRankTol);

/// Reorders tensor factors of a square matrix: new site i is old site
/// order[i], applied to both row and column indices.
CMatrix permute_sites(const CMatrix& u, const std::vector<std::size_t>& dims,
                      const std::vector<std::size_t>& order);

}  // namespace qtpd

#endif  // QTPD_TPD_HPP
