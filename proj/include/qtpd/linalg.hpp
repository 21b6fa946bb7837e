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

#ifndef QTPD_LINALG_HPP
#define QTPD_LINALG_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "qtpd/cmatrix.hpp"

namespace qtpd {

/// Eigenvalue gap below which two eigenvalues are treated as one degenerate
/// cluster; individual eigenvectors inside a cluster are gauge-dependent and
/// only the cluster span is comparable.
inline constexpr double kClusterGapTol = 1e-8;

// ---------------------------------------------------------------------------
// Tensor plumbing
// ---------------------------------------------------------------------------

/// Kronecker product, row-major, left factor on the slow index.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Partial trace over the complement of `keep`.  `dims` lists the subsystem
/// dimensions in tensor order; `keep` is a strictly increasing list of
/// subsystem positions.  Kept subsystems retain their relative order.
CMatrix partial_trace(const CMatrix& rho, const std::vector<std::size_t>& dims,
                      const std::vector<std::size_t>& keep);

/// Normalized vectorization: vec(A)_{i*d+j} = A(j, i) / sqrt(d), i.e. the
/// component of (1/sqrt(d)) * sum_i |i> (x) A|i> on |i>|j>.  Consequences:
///   sqrt(d) * vec(A) stacks the columns of A,
///   vec(A)^dag vec(B) = <A|B>_HS / d.
CVector vectorize(const CMatrix& a);

/// Exact inverse of vectorize: A(j, i) = v[i*d+j] * sqrt(d).
CMatrix unvectorize(const CVector& v, std::size_t d);

/// Rearrangement of a d_A*d_B square matrix into a d_A^2 x d_B^2 matrix whose
/// singular value decomposition yields the Kronecker factor expansion.  The
/// index map is fixed bit-exactly:
///   R(U)[(i_A, j_A), (i_B, j_B)] = U[(i_A, i_B), (j_A, j_B)] / sqrt(d_A d_B)
/// with row index i_A*d_A + j_A and column index i_B*d_B + j_B.  The 1/sqrt()
/// normalization makes the singular values of R(U) the canonical expansion
/// coefficients directly (they sum-square to 1 when U is unitary).
CMatrix reshuffle(const CMatrix& u, const BipartiteSplit& split);

/// Inverse index permutation; unreshuffle(reshuffle(u)) == u bit-exactly.
CMatrix unreshuffle(const CMatrix& r, const BipartiteSplit& split);

// ---------------------------------------------------------------------------
// Spectral decompositions
// ---------------------------------------------------------------------------

struct EigResult {
  std::vector<double> values;  // descending; ties broken by original index
  CMatrix vectors;             // eigenvectors as columns, phase-gauged
  /// Maximal runs of eigenvalues with adjacent gap < kClusterGapTol, stored
  /// as [first, last] inclusive column ranges.  Singleton runs are omitted.
  std::vector<std::pair<std::size_t, std::size_t>> clusters;
};

/// Cyclic complex Jacobi diagonalization of a Hermitian matrix.  Quadratic
/// convergence; adequate for the dimensions this library targets (<= 256).
/// Eigenvector phase gauge: the largest-modulus component of each column is
/// made real positive (first index wins ties).
EigResult hermitian_eig(const CMatrix& h);

struct SvdResult {
  CMatrix u;                  // left singular vectors as columns
  std::vector<double> sigma;  // descending
  CMatrix v;                  // right singular vectors as columns (not V^dag)
};

/// One-sided Jacobi SVD (applied to whichever side has fewer columns), which
/// keeps high relative accuracy for small singular values.  Rank-deficient
/// inputs get their null directions completed by column-pivoted
/// Gram-Schmidt over the canonical basis.  m = u * diag(sigma) * v^dag.
SvdResult svd(const CMatrix& m);

// ---------------------------------------------------------------------------
// Norms and projections
// ---------------------------------------------------------------------------

double frobenius(const CMatrix& m);
double spectral(const CMatrix& m);
double trace_norm(const CMatrix& m);

/// Frobenius-nearest density matrix: eigenvalues of the Hermitian part are
/// projected onto the probability simplex (water-filling), eigenvectors kept.
CMatrix nearest_density_matrix(const CMatrix& h);

// ---------------------------------------------------------------------------
// Small shared helpers
// ---------------------------------------------------------------------------

bool is_hermitian(const CMatrix& m, double tol);
/// Frobenius norm of m^dag m - I.
double unitarity_defect(const CMatrix& m);

/// Multiplies `m` by a phase making its largest-modulus entry real positive;
/// returns the phase that was removed (m_new = m * exp(-i*phase)).
double fix_phase_gauge(CMatrix& m);

/// Degenerate-cluster ranges ([first,last] inclusive, singletons omitted) of
/// a descending value list under the given adjacent-gap tolerance.
std::vector<std::pair<std::size_t, std::size_t>> cluster_ranges(
    const std::vector<double>& descending, double gap_tol);

}  // namespace qtpd

#endif  // QTPD_LINALG_HPP
