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

#include "qtpd/tpd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qtpd {

namespace {

constexpr double kOrthonormalityTol = 1e-8;

/// Inverse of the normalized row-stacking used by the reshuffle map:
/// M(i, j) = v[i*d + j] * sqrt(d).
CMatrix row_unstack(const CVector& v, std::size_t d) {
  const double scale = std::sqrt(static_cast<double>(d));
  CMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) m(i, j) = v[i * d + j] * scale;
  }
  return m;
}

/// reshuffle() generalized to arbitrary (not necessarily qubit-count ordered)
/// local dimensions; same index map and normalization.
CMatrix reshuffle_dims(const CMatrix& u, std::size_t da, std::size_t db) {
  const double inv = 1.0 / std::sqrt(static_cast<double>(da * db));
  CMatrix r(da * da, db * db);
  for (std::size_t ia = 0; ia < da; ++ia) {
    for (std::size_t ja = 0; ja < da; ++ja) {
      for (std::size_t ib = 0; ib < db; ++ib) {
        for (std::size_t jb = 0; jb < db; ++jb) {
          r(ia * da + ja, ib * db + jb) = u(ia * db + ib, ja * db + jb) * inv;
        }
      }
    }
  }
  return r;
}

struct BipartiteCore {
  std::vector<double> s;
  std::vector<CMatrix> a_ops;
  std::vector<CMatrix> b_ops;
  std::vector<std::pair<std::size_t, std::size_t>> clusters;
};

/// Reshuffle + SVD + factor extraction + phase gauge, for arbitrary local
/// dimensions (da, db) with da * db = dim(u).
BipartiteCore bipartite_core(const CMatrix& u, std::size_t da, std::size_t db,
                             double rank_tol) {
  if (!u.is_square() || u.rows() != da * db) {
    throw std::invalid_argument("tpd: matrix does not match the requested split");
  }
  const CMatrix r = reshuffle_dims(u, da, db);
  const SvdResult sv = svd(r);
  const double sig_max = sv.sigma.empty() ? 0.0 : sv.sigma.front();

  BipartiteCore core;
  for (std::size_t k = 0; k < sv.sigma.size(); ++k) {
    if (sv.sigma[k] <= rank_tol * sig_max || sv.sigma[k] == 0.0) break;
    CVector w(da * da), vv(db * db);
    for (std::size_t i = 0; i < da * da; ++i) w[i] = sv.u(i, k);
    for (std::size_t i = 0; i < db * db; ++i) vv[i] = std::conj(sv.v(i, k));
    CMatrix a = row_unstack(w, da);
    CMatrix b = row_unstack(vv, db);
    // Canonical phase gauge on the A side; the compensating phase moves to B
    // so the product s_k A_k (x) B_k is untouched.
    const double phase = fix_phase_gauge(a);
    b *= std::polar(1.0, phase);
    core.s.push_back(sv.sigma[k]);
    core.a_ops.push_back(std::move(a));
    core.b_ops.push_back(std::move(b));
  }
  core.clusters = cluster_ranges(core.s, kClusterGapTol);
  return core;
}

/// Polar factor U V^dag without the rank-deficiency error; used where any
/// unitary completion of a singular factor is an acceptable choice (the
/// fully factored approximation).  The distance formula
/// sqrt(sum (sigma_k - 1)^2) remains exact in the singular case.
NearestUnitaryResult polar_unitary_allow_singular(const CMatrix& m) {
  const SvdResult sv = svd(m);
  NearestUnitaryResult out;
  out.unitary = sv.u * sv.v.adjoint();
  double acc = 0.0;
  for (double sig : sv.sigma) acc += (sig - 1.0) * (sig - 1.0);
  out.distance = std::sqrt(acc);
  return out;
}

bool factor_set_orthonormal(const std::vector<CMatrix>& ops, std::size_t d) {
  for (std::size_t j = 0; j < ops.size(); ++j) {
    if (!ops[j].is_square() || ops[j].rows() != d) return false;
    for (std::size_t k = j; k < ops.size(); ++k) {
      Complex overlap = 0.0;
      for (std::size_t i = 0; i < d * d; ++i) {
        overlap += std::conj(ops[j].data()[i]) * ops[k].data()[i];
      }
      overlap /= static_cast<double>(d);
      const Complex expected = (j == k) ? Complex(1.0) : Complex(0.0);
      if (std::abs(overlap - expected) > kOrthonormalityTol) return false;
    }
  }
  return true;
}

}  // namespace

TensorProductDecomposition classical_tpd(const CMatrix& u, const BipartiteSplit& split,
                                         double rank_tol) {
  BipartiteCore core = bipartite_core(u, split.d_a(), split.d_b(), rank_tol);
  TensorProductDecomposition tpd;
  tpd.split = split;
  tpd.s = std::move(core.s);
  tpd.a_ops = std::move(core.a_ops);
  tpd.b_ops = std::move(core.b_ops);
  tpd.clusters = std::move(core.clusters);
  return tpd;
}

TensorProductDecomposition canonicalize(const TensorProductDecomposition& tpd) {
  const std::size_t r = tpd.s.size();
  if (tpd.a_ops.size() != r || tpd.b_ops.size() != r) {
    throw std::invalid_argument("canonicalize: inconsistent factor counts");
  }
  if (r == 0) return tpd;

  const std::size_t da = tpd.split.d_a();
  const std::size_t db = tpd.split.d_b();

  if (!factor_set_orthonormal(tpd.a_ops, da) || !factor_set_orthonormal(tpd.b_ops, db)) {
    // Non-orthonormal input: rebuild the expansion from the matrix it
    // represents.
    return classical_tpd(reconstruct(tpd), tpd.split);
  }

  TensorProductDecomposition out = tpd;
  for (std::size_t k = 0; k < r; ++k) {
    if (out.s[k] < 0.0) {
      out.s[k] = -out.s[k];
      out.b_ops[k] *= Complex(-1.0);
    }
    const double phase = fix_phase_gauge(out.a_ops[k]);
    out.b_ops[k] *= std::polar(1.0, phase);
  }

  std::vector<std::size_t> order(r);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return out.s[a] > out.s[b]; });
  TensorProductDecomposition sorted;
  sorted.split = out.split;
  for (std::size_t k : order) {
    sorted.s.push_back(out.s[k]);
    sorted.a_ops.push_back(std::move(out.a_ops[k]));
    sorted.b_ops.push_back(std::move(out.b_ops[k]));
  }
  sorted.clusters = cluster_ranges(sorted.s, kClusterGapTol);
  return sorted;
}

CMatrix reconstruct(const TensorProductDecomposition& tpd) {
  const std::size_t d = tpd.split.d();
  CMatrix acc(d, d);
  for (std::size_t k = 0; k < tpd.s.size(); ++k) {
    acc += Complex(tpd.s[k]) * kron(tpd.a_ops[k], tpd.b_ops[k]);
  }
  return acc;
}

TensorProductDecomposition low_rank_truncate(const TensorProductDecomposition& tpd,
                                             std::size_t r) {
  if (r < 1 || r > tpd.rank()) {
    throw std::invalid_argument("low_rank_truncate: rank out of range");
  }
  TensorProductDecomposition out;
  out.split = tpd.split;
  out.s.assign(tpd.s.begin(), tpd.s.begin() + r);
  out.a_ops.assign(tpd.a_ops.begin(), tpd.a_ops.begin() + r);
  out.b_ops.assign(tpd.b_ops.begin(), tpd.b_ops.begin() + r);
  out.clusters = cluster_ranges(out.s, kClusterGapTol);
  // A cut through a degenerate run means the kept factors are one arbitrary
  // gauge choice among equally valid ones.
  for (const auto& [first, last] : tpd.clusters) {
    if (first < r && last >= r) out.truncated_inside_cluster = true;
  }
  return out;
}

double low_rank_error(const TensorProductDecomposition& tpd, std::size_t r) {
  double acc = 0.0;
  for (std::size_t k = r; k < tpd.s.size(); ++k) acc += tpd.s[k] * tpd.s[k];
  return std::sqrt(acc);
}

NearestUnitaryResult nearest_unitary(const CMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("nearest_unitary: matrix not square");
  const SvdResult sv = svd(m);
  if (sv.sigma.empty() || sv.sigma.back() <= 1e-10) {
    throw std::runtime_error("nearest_unitary: rank-deficient input");
  }
  NearestUnitaryResult out;
  out.unitary = sv.u * sv.v.adjoint();
  double acc = 0.0;
  for (double sig : sv.sigma) acc += (sig - 1.0) * (sig - 1.0);
  out.distance = std::sqrt(acc);
  return out;
}

CMatrix permute_sites(const CMatrix& u, const std::vector<std::size_t>& dims,
                      const std::vector<std::size_t>& order) {
  const std::size_t m_count = dims.size();
  if (order.size() != m_count) {
    throw std::invalid_argument("permute_sites: order length mismatch");
  }
  std::vector<bool> seen(m_count, false);
  for (std::size_t o : order) {
    if (o >= m_count || seen[o]) throw std::invalid_argument("permute_sites: invalid order");
    seen[o] = true;
  }
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  if (!u.is_square() || u.rows() != total) {
    throw std::invalid_argument("permute_sites: dims do not match matrix");
  }

  std::vector<std::size_t> stride(m_count, 1);
  for (std::size_t i = m_count; i-- > 1;) stride[i - 1] = stride[i] * dims[i];

  // old_of[new_flat] = old flat index.
  std::vector<std::size_t> old_of(total);
  for (std::size_t f = 0; f < total; ++f) {
    std::size_t rem = f;
    std::size_t old_idx = 0;
    for (std::size_t i = m_count; i-- > 0;) {
      const std::size_t site = order[i];
      old_idx += (rem % dims[site]) * stride[site];
      rem /= dims[site];
    }
    old_of[f] = old_idx;
  }

  CMatrix out(total, total);
  for (std::size_t r = 0; r < total; ++r) {
    for (std::size_t c = 0; c < total; ++c) {
      out(r, c) = u(old_of[r], old_of[c]);
    }
  }
  return out;
}

Complex MultipartiteTPD::coefficient(const std::vector<std::size_t>& idx) const {
  if (idx.size() != ranks.size()) {
    throw std::invalid_argument("MultipartiteTPD: index arity mismatch");
  }
  std::size_t flat = 0;
  for (std::size_t m = 0; m < idx.size(); ++m) {
    if (idx[m] >= ranks[m]) throw std::invalid_argument("MultipartiteTPD: index out of range");
    flat = flat * ranks[m] + idx[m];
  }
  return s[flat];
}

MultipartiteTPD multipartite_tpd(const CMatrix& u, const std::vector<std::size_t>& dims,
                                 double rank_tol) {
  if (dims.size() < 2) throw std::invalid_argument("multipartite_tpd: need at least 2 sites");
  std::size_t total = 1;
  for (std::size_t d : dims) {
    if (d < 2 || (d & (d - 1)) != 0) {
      throw std::invalid_argument("multipartite_tpd: site dimensions must be powers of 2");
    }
    total *= d;
  }
  if (!u.is_square() || u.rows() != total) {
    throw std::invalid_argument("multipartite_tpd: dims do not match matrix");
  }

  MultipartiteTPD mp;
  mp.dims = dims;
  const std::size_t m_count = dims.size();

  if (m_count == 2) {
    // A single bipartite pass pairs the two sites exactly: the coefficient
    // tensor is diagonal with the singular values on the diagonal.
    BipartiteCore core = bipartite_core(u, dims[0], dims[1], rank_tol);
    const std::size_t r = core.s.size();
    mp.bases = {std::move(core.a_ops), std::move(core.b_ops)};
    mp.ranks = {r, r};
    mp.s.assign(r * r, Complex(0.0));
    for (std::size_t k = 0; k < r; ++k) mp.s[k * r + k] = core.s[k];
    return mp;
  }

  // Per-site bases from the bipartite expansion of site m vs all others.
  for (std::size_t m = 0; m < m_count; ++m) {
    std::vector<std::size_t> order{m};
    for (std::size_t i = 0; i < m_count; ++i) {
      if (i != m) order.push_back(i);
    }
    const CMatrix permuted = permute_sites(u, dims, order);
    BipartiteCore core = bipartite_core(permuted, dims[m], total / dims[m], rank_tol);
    mp.bases.push_back(std::move(core.a_ops));
    mp.ranks.push_back(mp.bases.back().size());
  }

  // Coefficient tensor by projection onto the product basis.
  std::size_t n_coeff = 1;
  for (std::size_t r : mp.ranks) n_coeff *= r;
  mp.s.resize(n_coeff);
  std::vector<std::size_t> idx(m_count, 0);
  for (std::size_t flat = 0; flat < n_coeff; ++flat) {
    CMatrix prod = mp.bases[0][idx[0]];
    for (std::size_t m = 1; m < m_count; ++m) prod = kron(prod, mp.bases[m][idx[m]]);
    Complex acc = 0.0;
    for (std::size_t i = 0; i < total * total; ++i) {
      acc += std::conj(prod.data()[i]) * u.data()[i];
    }
    mp.s[flat] = acc / static_cast<double>(total);
    for (std::size_t m = m_count; m-- > 0;) {
      if (++idx[m] < mp.ranks[m]) break;
      idx[m] = 0;
    }
  }

  // Gauge pass: make the leading coefficient real nonnegative by rotating
  // A^(1)_1, then pin each remaining basis operator's representative
  // coefficient s_{1..1,j,1..1} (when resolvable).  Each rotation scales a
  // slice of the tensor; the representatives live in mutually untouched
  // slices once the leading rotation is done first.
  auto rotate_basis_op = [&](std::size_t site, std::size_t j, Complex coeff) {
    const double mag = std::abs(coeff);
    if (mag < 1e-12) return;
    const Complex phase = coeff / mag;  // e^{i arg c}
    mp.bases[site][j] *= phase;
    // Coefficients on the slice idx[site] == j pick up the conjugate phase.
    std::size_t slice_stride = 1;
    for (std::size_t m = site + 1; m < m_count; ++m) slice_stride *= mp.ranks[m];
    const std::size_t block = slice_stride * mp.ranks[site];
    for (std::size_t base = 0; base < n_coeff; base += block) {
      for (std::size_t off = 0; off < slice_stride; ++off) {
        mp.s[base + j * slice_stride + off] *= std::conj(phase);
      }
    }
  };
  rotate_basis_op(0, 0, mp.s[0]);
  for (std::size_t site = 0; site < m_count; ++site) {
    std::size_t slice_stride = 1;
    for (std::size_t m = site + 1; m < m_count; ++m) slice_stride *= mp.ranks[m];
    for (std::size_t j = 1; j < mp.ranks[site]; ++j) {
      rotate_basis_op(site, j, mp.s[j * slice_stride]);
    }
  }
  return mp;
}

FqtApproximation fqt_approximation(const CMatrix& u, const std::vector<std::size_t>& dims,
                                   double rank_tol) {
  if (unitarity_defect(u) > 1e-9) {
    throw std::invalid_argument("fqt_approximation: input is not unitary");
  }
  const MultipartiteTPD mp = multipartite_tpd(u, dims, rank_tol);
  for (std::size_t r : mp.ranks) {
    if (r == 0) throw std::runtime_error("fqt_approximation: empty factor basis");
  }

  FqtApproximation out;
  out.eps_s = std::max(0.0, 1.0 - mp.leading());
  double sum_eps2 = 0.0;
  for (std::size_t m = 0; m < dims.size(); ++m) {
    const CMatrix& dominant = mp.bases[m][0];
    // Any unitary completion is a valid projection target when the dominant
    // factor is singular (the distance formula still holds), so the polar
    // factor is taken without the rank restriction here.
    NearestUnitaryResult polar = polar_unitary_allow_singular(dominant);
    const double eps_m =
        polar.distance / std::sqrt(2.0 * static_cast<double>(dims[m]));
    out.eps_m.push_back(eps_m);
    sum_eps2 += eps_m * eps_m;
    out.factors.push_back(std::move(polar.unitary));
  }
  out.bound = std::sqrt(out.eps_s) + std::sqrt(0.5 * out.eps_s * out.eps_s + sum_eps2);

  out.product = out.factors[0];
  for (std::size_t m = 1; m < out.factors.size(); ++m) {
    out.product = kron(out.product, out.factors[m]);
  }
  out.achieved_frobenius = frobenius(u - out.product);
  out.achieved =
      out.achieved_frobenius / std::sqrt(2.0 * static_cast<double>(u.rows()));
  if (out.achieved > out.bound + 1e-9) {
    throw std::runtime_error("fqt_approximation: a-priori bound violated");
  }
  return out;
}

}  // namespace qtpd
