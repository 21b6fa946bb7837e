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

#include "qtpd/qtpd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "qtpd/linalg.hpp"

namespace qtpd {

namespace {

constexpr double kNullBranchTol = 1e-14;
constexpr double kOrthonormalityTol = 1e-8;

Complex hs_inner(const CMatrix& a, const CMatrix& b) {
  Complex acc = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    acc += std::conj(a.data()[i]) * b.data()[i];
  }
  return acc;
}

/// Per-string binomial resampling of a known reduced state followed by linear
/// inversion and the PSD projection.  shots == 0 keeps the exact
/// expectations (the projection is still applied, as a real dataset would).
CMatrix pauli_resample(const CMatrix& rho, std::size_t shots, std::uint64_t seed) {
  const std::size_t dim = rho.rows();
  std::size_t n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  const std::size_t n_strings = std::size_t{1} << (2 * n);

  Rng root(seed);
  CMatrix acc(dim, dim);
  for (std::size_t p = 0; p < n_strings; ++p) {
    const PauliString str = PauliString::from_index(p, n);
    double e = pauli_expectation(rho, str);
    if (shots > 0) {
      Rng stream = root.child(p);
      const double p_plus = std::clamp(0.5 * (1.0 + e), 0.0, 1.0);
      const std::uint64_t k = stream.binomial(shots, p_plus);
      e = (2.0 * static_cast<double>(k) - static_cast<double>(shots)) /
          static_cast<double>(shots);
    }
    if (e != 0.0) acc += Complex(e) * str.matrix();
  }
  acc *= Complex(1.0 / static_cast<double>(dim));
  return nearest_density_matrix(acc);
}

}  // namespace

ChoiReducedState choi_reduced_exact(const CMatrix& u, const BipartiteSplit& split) {
  const StateVector choi = choi_state(u, split);
  std::vector<std::size_t> doubled_a(2 * split.n_a);
  for (std::size_t q = 0; q < doubled_a.size(); ++q) doubled_a[q] = q;
  ChoiReducedState out;
  out.rho = reduced_density(choi, doubled_a);
  out.split = split;
  out.method = SnapshotMethod::choi_exact;
  return out;
}

ChoiReducedState tomographic_snapshot(const CMatrix& u, const BipartiteSplit& split,
                                      std::size_t shots, std::uint64_t seed) {
  const ChoiReducedState exact = choi_reduced_exact(u, split);
  ChoiReducedState out;
  out.rho = pauli_resample(exact.rho, shots, seed);
  out.split = split;
  out.method = SnapshotMethod::choi_tomographic;
  const std::size_t n_strings = std::size_t{1} << (4 * split.n_a);
  out.tomography = TomographyInfo{shots, seed, n_strings};
  return out;
}

ChoiReducedState sequential_snapshot(const CMatrix& u, const BipartiteSplit& split,
                                     std::size_t shots, std::uint64_t seed) {
  const std::size_t da = split.d_a();
  const std::size_t db = split.d_b();
  if (!u.is_square() || u.rows() != da * db) {
    throw std::invalid_argument("sequential_snapshot: matrix does not match split");
  }
  if (unitarity_defect(u) > 1e-9) {
    throw std::invalid_argument("sequential_snapshot: matrix is not unitary");
  }

  // chi(j_A, j_B) = U |j_A j_B> is just a column of U; the B-averaged cross
  // products of columns with equal j_B give the conditional blocks, and the
  // blocks assemble into the same reduced state the Choi route produces.
  CMatrix rho(da * da, da * da);
  for (std::size_t j = 0; j < da; ++j) {
    for (std::size_t jp = 0; jp < da; ++jp) {
      // C(j, j')[a, a'] = (1/d_B) sum_{j_B} sum_b U[(a,b),(j,j_B)] conj(U[(a',b),(j',j_B)])
      for (std::size_t a = 0; a < da; ++a) {
        for (std::size_t ap = 0; ap < da; ++ap) {
          Complex acc = 0.0;
          for (std::size_t jb = 0; jb < db; ++jb) {
            for (std::size_t b = 0; b < db; ++b) {
              acc += u(a * db + b, j * db + jb) * std::conj(u(ap * db + b, jp * db + jb));
            }
          }
          rho(j * da + a, jp * da + ap) = acc / static_cast<double>(da * db);
        }
      }
    }
  }

  ChoiReducedState out;
  out.split = split;
  if (shots == 0) {
    out.rho = std::move(rho);
    out.method = SnapshotMethod::sequential_exact;
  } else {
    out.rho = pauli_resample(rho, shots, seed);
    out.method = SnapshotMethod::sequential_sampled;
    // The protocol repeats the tomography once per A-basis state.
    const std::size_t n_strings = std::size_t{1} << (4 * split.n_a);
    out.tomography = TomographyInfo{shots, seed, da * n_strings};
  }
  return out;
}

ExtractedFactors extract_factors(const ChoiReducedState& snapshot, double threshold) {
  if (threshold <= 0.0 || threshold >= 1.0) {
    throw std::invalid_argument("extract_factors: threshold must lie in (0, 1)");
  }
  const std::size_t da = snapshot.split.d_a();
  if (!snapshot.rho.is_square() || snapshot.rho.rows() != da * da) {
    throw std::invalid_argument("extract_factors: snapshot does not match split");
  }

  const EigResult eig = hermitian_eig(snapshot.rho);
  const bool sampled = snapshot.tomography.has_value() &&
                       snapshot.tomography->shots_per_setting > 0;
  const double gap_tol =
      sampled ? 3.0 / std::sqrt(static_cast<double>(snapshot.tomography->shots_per_setting))
              : kClusterGapTol;

  ExtractedFactors out;
  out.split = snapshot.split;
  out.threshold = threshold;
  std::vector<double> kept_lambda;
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    const double lambda = eig.values[k];
    if (lambda < threshold) break;
    kept_lambda.push_back(lambda);
    out.s.push_back(std::sqrt(lambda));
    CVector col(da * da);
    for (std::size_t i = 0; i < col.size(); ++i) col[i] = eig.vectors(i, k);
    CMatrix a = unvectorize(col, da);
    // Rescale exactly to |A|_F = sqrt(d_A) (guards eigenvector roundoff).
    const double nrm = frobenius(a);
    if (nrm > 0.0) a *= Complex(std::sqrt(static_cast<double>(da)) / nrm);
    fix_phase_gauge(a);
    out.a_ops.push_back(std::move(a));
  }
  out.clusters = cluster_ranges(kept_lambda, gap_tol);
  return out;
}

double default_rank_threshold(const ChoiReducedState& snapshot) {
  if (snapshot.tomography.has_value() && snapshot.tomography->shots_per_setting > 0) {
    const double da = static_cast<double>(snapshot.split.d_a());
    const double shots = static_cast<double>(snapshot.tomography->shots_per_setting);
    return 3.0 * std::sqrt(da / shots);
  }
  return 1e-10;
}

std::vector<CMatrix> distillation_projectors(const ExtractedFactors& factors) {
  const std::size_t da = factors.split.d_a();
  const double d = static_cast<double>(da);
  for (std::size_t j = 0; j < factors.a_ops.size(); ++j) {
    for (std::size_t k = j; k < factors.a_ops.size(); ++k) {
      const Complex overlap = hs_inner(factors.a_ops[j], factors.a_ops[k]) / d;
      const Complex expected = (j == k) ? Complex(1.0) : Complex(0.0);
      if (std::abs(overlap - expected) > kOrthonormalityTol) {
        throw std::invalid_argument("distillation_projectors: factors not orthonormal");
      }
    }
  }
  std::vector<CMatrix> projectors;
  projectors.reserve(factors.a_ops.size());
  for (const CMatrix& a : factors.a_ops) {
    const CVector w = vectorize(a);
    projectors.push_back(CMatrix::outer(w, w));
  }
  return projectors;
}

DistillationResult distill(const CMatrix& u, const ExtractedFactors& factors,
                           const CVector& psi_b) {
  const std::size_t da = factors.split.d_a();
  const std::size_t db = factors.split.d_b();
  if (!u.is_square() || u.rows() != da * db) {
    throw std::invalid_argument("distill: matrix does not match split");
  }
  if (psi_b.size() != db) {
    throw std::invalid_argument("distill: B state does not match split");
  }
  double nrm2 = 0.0;
  for (const auto& z : psi_b) nrm2 += std::norm(z);
  if (std::abs(nrm2 - 1.0) > 1e-9) {
    throw std::invalid_argument("distill: B state is not normalized");
  }
  const std::vector<CMatrix> projectors = distillation_projectors(factors);

  // Phi+ on the doubled A register, psi on B, then u on (A_out, B).
  CVector amp(da * da * db, 0.0);
  const double inv = 1.0 / std::sqrt(static_cast<double>(da));
  for (std::size_t i = 0; i < da; ++i) {
    for (std::size_t b = 0; b < db; ++b) {
      amp[(i * da + i) * db + b] = psi_b[b] * inv;
    }
  }
  StateVector state({{"A_ref", factors.split.n_a},
                     {"A_out", factors.split.n_a},
                     {"B", factors.split.n_b}},
                    std::move(amp));
  apply_block_unitary(state, u, {"A_out", "B"});

  DistillationResult result;
  double total = 0.0;
  for (std::size_t k = 0; k < projectors.size(); ++k) {
    const MeasurementOutcome outcome =
        measure_projector(state, projectors[k], {"A_ref", "A_out"});
    DistillationBranch branch;
    branch.k = k;
    branch.probability = outcome.probability;
    total += outcome.probability;
    if (outcome.null_branch) {
      branch.null_branch = true;
      branch.post_selection_cost = std::numeric_limits<double>::infinity();
    } else {
      branch.post_selection_cost = 1.0 / outcome.probability;
      // The A registers are exactly in vec(A_k) after the rank-one
      // projection, so contracting them out is exact.
      const CVector w = vectorize(factors.a_ops[k]);
      const CVector& post = outcome.post_state.amplitudes();
      CVector phi(db, 0.0);
      for (std::size_t alpha = 0; alpha < da * da; ++alpha) {
        const Complex wc = std::conj(w[alpha]);
        for (std::size_t b = 0; b < db; ++b) {
          phi[b] += wc * post[alpha * db + b];
        }
      }
      double phi_nrm2 = 0.0;
      for (const auto& z : phi) phi_nrm2 += std::norm(z);
      const double scale = 1.0 / std::sqrt(phi_nrm2);
      for (auto& z : phi) z *= scale;
      branch.state_b = std::move(phi);
    }
    result.branches.push_back(std::move(branch));
  }
  result.residual_probability = 1.0 - total;
  return result;
}

ReconstructedB reconstruct_b(const CMatrix& u, const ExtractedFactors& factors,
                             std::size_t k) {
  if (k >= factors.a_ops.size()) {
    throw std::invalid_argument("reconstruct_b: factor index out of range");
  }
  const std::size_t db = factors.split.d_b();
  const double s_k = factors.s[k];
  if (s_k <= 0.0) throw std::invalid_argument("reconstruct_b: zero coefficient");

  ReconstructedB out;
  out.b_op = CMatrix(db, db);
  out.column_flagged.assign(db, false);
  for (std::size_t j = 0; j < db; ++j) {
    CVector basis(db, 0.0);
    basis[j] = 1.0;
    const DistillationResult run = distill(u, factors, basis);
    const DistillationBranch& branch = run.branches[k];
    if (branch.null_branch) {
      out.column_flagged[j] = true;  // B_k annihilates |j>; column stays zero
      continue;
    }
    // B_k |j> = sqrt(p_k) / s_k * (normalized branch state); the simulated
    // channel keeps all branch phases mutually consistent.
    const double scale = std::sqrt(branch.probability) / s_k;
    for (std::size_t r = 0; r < db; ++r) {
      out.b_op(r, j) = branch.state_b[r] * scale;
    }
  }
  return out;
}

ErrorReport error_report(const ChoiReducedState& exact_snapshot,
                         const ExtractedFactors& exact_factors,
                         const ChoiReducedState& noisy_snapshot,
                         const ExtractedFactors& noisy_factors,
                         const CMatrix* u, const CVector* psi_b) {
  if (exact_snapshot.split.n_a != noisy_snapshot.split.n_a ||
      exact_snapshot.split.n_b != noisy_snapshot.split.n_b) {
    throw std::invalid_argument("error_report: split mismatch");
  }
  const std::size_t da = exact_snapshot.split.d_a();
  const double d = static_cast<double>(da);

  ErrorReport report;
  report.eps_t = frobenius(exact_snapshot.rho - noisy_snapshot.rho);

  // Overlap-maximal greedy matching between the two factor sets.
  const std::size_t ne = exact_factors.a_ops.size();
  const std::size_t nn = noisy_factors.a_ops.size();
  std::vector<std::vector<double>> overlap(nn, std::vector<double>(ne, 0.0));
  for (std::size_t j = 0; j < nn; ++j) {
    for (std::size_t k = 0; k < ne; ++k) {
      overlap[j][k] = std::abs(hs_inner(noisy_factors.a_ops[j], exact_factors.a_ops[k])) / d;
    }
  }
  std::vector<std::size_t> match_of_exact(ne, SIZE_MAX);
  std::vector<bool> noisy_used(nn, false);
  const std::size_t n_pairs = std::min(ne, nn);
  for (std::size_t pair = 0; pair < n_pairs; ++pair) {
    double best = -1.0;
    std::size_t bj = 0, bk = 0;
    for (std::size_t j = 0; j < nn; ++j) {
      if (noisy_used[j]) continue;
      for (std::size_t k = 0; k < ne; ++k) {
        if (match_of_exact[k] != SIZE_MAX) continue;
        if (overlap[j][k] > best) {
          best = overlap[j][k];
          bj = j;
          bk = k;
        }
      }
    }
    noisy_used[bj] = true;
    match_of_exact[bk] = bj;
  }
  for (std::size_t k = 0; k < ne; ++k) {
    if (match_of_exact[k] == SIZE_MAX) report.unmatched_exact.push_back(k);
  }
  for (std::size_t j = 0; j < nn; ++j) {
    if (!noisy_used[j]) report.unmatched_noisy.push_back(j);
  }

  // Phase-align each matched noisy factor against its exact partner, then
  // collect the per-pair error terms in exact-index order.
  std::vector<std::size_t> matched_exact;
  std::vector<CMatrix> aligned;
  for (std::size_t k = 0; k < ne; ++k) {
    if (match_of_exact[k] == SIZE_MAX) continue;
    const std::size_t j = match_of_exact[k];
    CMatrix a = noisy_factors.a_ops[j];
    const Complex z = hs_inner(a, exact_factors.a_ops[k]);
    if (std::abs(z) > 0.0) a *= z / std::abs(z);
    matched_exact.push_back(k);
    aligned.push_back(std::move(a));

    const double se2 = exact_factors.s[k] * exact_factors.s[k];
    const double sn2 = noisy_factors.s[j] * noisy_factors.s[j];
    report.eps_s.push_back(se2 - sn2);
    report.eps_a.push_back(frobenius(exact_factors.a_ops[k] - aligned.back()));
  }

  const std::size_t m = matched_exact.size();
  report.drift = CMatrix(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      const CMatrix eps_k = exact_factors.a_ops[matched_exact[k]] - aligned[k];
      report.drift(j, k) = hs_inner(aligned[j], eps_k) / d;
    }
  }

  double acc_d = 0.0;
  for (double x : report.eps_s) acc_d += x * x;
  report.eps_d = std::sqrt(acc_d);
  double acc_v = 0.0;
  for (double x : report.eps_a) acc_v += x * x;
  report.eps_v = std::sqrt(acc_v / d);

  const double eps = std::max(report.eps_d, report.eps_v);
  report.bound_rhs = 3.0 * eps + kErrorBoundC * eps * eps;
  report.first_order_bound_ok = report.eps_t <= report.bound_rhs + 1e-12;

  if (u != nullptr && psi_b != nullptr && ne > 0 && match_of_exact[0] != SIZE_MAX) {
    // Dominant-branch B-side check: distill with the exact and the aligned
    // noisy factor sets and compare the branch states.
    ExtractedFactors aligned_noisy = noisy_factors;
    for (std::size_t i = 0; i < m; ++i) {
      aligned_noisy.a_ops[match_of_exact[matched_exact[i]]] = aligned[i];
    }
    const DistillationResult run_exact = distill(*u, exact_factors, *psi_b);
    const DistillationResult run_noisy = distill(*u, aligned_noisy, *psi_b);
    const DistillationBranch& be = run_exact.branches[0];
    const DistillationBranch& bn = run_noisy.branches[match_of_exact[0]];
    if (!be.null_branch && !bn.null_branch) {
      double diff2 = 0.0;
      for (std::size_t i = 0; i < be.state_b.size(); ++i) {
        diff2 += std::norm(be.state_b[i] - bn.state_b[i]);
      }
      report.b_lhs = std::sqrt(diff2);
      const double eps_a_dom = report.eps_a[0];
      report.b_rhs = (1.0 + 1.0 / std::sqrt(2.0)) * eps_a_dom / std::sqrt(d) +
                     kErrorBoundC * eps * eps;
      report.b_bound_ok = report.b_lhs <= report.b_rhs + 1e-12;
      report.b_bound_checked = true;
    }
  }
  return report;
}

}  // namespace qtpd
