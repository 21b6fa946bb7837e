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

#ifndef QTPD_ANALYSIS_HPP_
#define QTPD_ANALYSIS_HPP_

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "qtpd/cmatrix.hpp"
#include "qtpd/qtpd.hpp"
#include "qtpd/tpd.hpp"

namespace qtpd {

/// Operator non-locality: the Shannon entropy (natural log) of the squared
/// coefficient spectrum, -sum_k s_k^2 log s_k^2.  Requires sum s_k^2 = 1
/// within 1e-6 and nonnegative entries.  Zero for product operators, log d_A^2
/// maximal (reached by the swap gate, which is nevertheless non-entangling).
double nonlocality(const std::vector<double>& s);

/// Same, divided by log(d_A^2) so the result lies in [0, 1].
double nonlocality_normalized(const std::vector<double>& s, std::size_t d_a);

/// The two candidate costs for picking a preferred bipartition: the weight
/// missing from the leading product term, and the total coefficient mass of
/// the non-leading terms.
struct MereologyCosts {
  double one_minus_s1_sq = 0.0;  // 1 - s_1^2
  double tail_sum = 0.0;         // sum_{k >= 2} s_k
};
MereologyCosts mereology_costs(const std::vector<double>& s);

/// Swap-based entangling power
///   e_A(U) = (S_A(U) + sum_C (S_A(U P_AC) - log d_A^2)) / log d_A^2,
/// where C runs over all qubit-aligned d_A-dimensional subsystems of B and
/// P_AC exchanges A with C.  Reduces to the standard two-subsystem form when
/// d_A = d_B.  Values can go negative for d_A < d_B; reported unclamped.
double entangling_power_swap(const CMatrix& u, const BipartiteSplit& split);

/// Mean linear-entropy generation over Haar product inputs, closed form:
///   e_m(U) = 1 - (d_A + d_B)/((d_A+1)(d_B+1)) - d_A d_B sum_k s_k^4 /
///            ((d_A+1)(d_B+1)) - T / (d_A (d_A+1) d_B (d_B+1)),
///   T = sum_{klmn} s_k s_l s_m s_n Tr(A_k A_l' A_m A_n') Tr(B_k B_n' B_m B_l')
/// (primes denote adjoints).  Needs both factor sides, so only a full
/// decomposition qualifies.
double entangling_power_mean(const TensorProductDecomposition& tpd);
double entangling_power_mean(const CMatrix& u, const BipartiteSplit& split);

/// A-side-only factor sets cannot evaluate the mixed trace term; this
/// overload exists to say so loudly.
double entangling_power_mean(const ExtractedFactors& factors);

/// Monte-Carlo estimate of the same quantity: Haar product states in, linear
/// entropy 1 - Tr(rho_A^2) of the evolved reduction out.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};
McEstimate entangling_power_mc(const CMatrix& u, const BipartiteSplit& split,
                               std::size_t n_samples, std::uint64_t seed);

/// Effective open dynamics of subsystem A for a fixed environment state:
///   sigma_A = sum_{kl} lambda_kl A_k |psi_A><psi_A| A_l^dag,
///   lambda_kl = s_k s_l <psi_B| B_l^dag B_k |psi_B>.
/// lambda is Hermitian PSD and the channel is trace preserving.
struct OpenSurrogate {
  BipartiteSplit split;
  CMatrix lambda;
  std::vector<CMatrix> a_ops;
};

/// Oracle construction from a full decomposition plus the environment state.
OpenSurrogate open_surrogate(const std::vector<double>& s,
                             const std::vector<CMatrix>& a_ops,
                             const std::vector<CMatrix>& b_ops, const CVector& psi_b,
                             const BipartiteSplit& split);

/// Same surrogate from distilled data only: lambda_kl =
/// sqrt(p_k p_l) <v_l|v_k> over the distilled branch states, which equals the
/// oracle overlaps without ever seeing a B factor.  Null branches contribute
/// zero rows and columns.  The A-factor gauge cancels between lambda and the
/// a_ops, so the evolved state is gauge independent.
OpenSurrogate open_surrogate(const ExtractedFactors& factors,
                             const DistillationResult& distilled);

CMatrix evolve(const OpenSurrogate& surrogate, const CVector& psi_a);

/// Normalized diagnostics of an A-subsystem state: excitation occupation
/// 1/2 - M_A/(2 n_A) with M_A = <sum_i Z_i>, and von Neumann entropy over
/// log d_A.  Both land in [0, 1].
struct StateObservables {
  double occupation = 0.0;
  double entropy_norm = 0.0;
};
StateObservables observables(const CMatrix& sigma_a, std::size_t n_a);

/// Eigenphases of a unitary in (-pi, pi], ascending.  Diagonalizes the
/// Hermitian part first and splits cos-degenerate clusters with the
/// anti-Hermitian part, so conjugate phase pairs are resolved.
std::vector<double> unitary_eigenphases(const CMatrix& u);

/// Outcome of the additive-spectrum search: a unitary is conjugate to a
/// product A (x) B iff its d_A * d_B eigenphases form a grid
/// {phi_mu + psi_m mod 2pi} for some phases phi, psi.
struct DfsCheckResult {
  bool decomposable = false;
  std::vector<double> phi;  // size d_A witness when decomposable
  std::vector<double> psi;  // size d_B witness, psi[0] = 0 gauge
  /// Diagnostic on failure: smallest congruence residual that was rejected at
  /// the deepest point the search reached (0 on success).
  double nearest_miss = 0.0;
};

/// Backtracking search for the grid structure, tolerance `tol` per
/// congruence.  Exact inputs do well at 1e-8; noisy spectra need a caller
/// tolerance.  Limited to d_A * d_B <= 64.
DfsCheckResult decoherence_free_check(const CMatrix& u, const BipartiteSplit& split,
                                      double tol);

}  // namespace qtpd

#endif  // QTPD_ANALYSIS_HPP_
