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

#include "qtpd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qtpd {

namespace {

constexpr int kMaxJacobiSweeps = 64;
constexpr double kJacobiRelTol = 1e-15;

/// Jacobi rotation parameters zeroing the off-diagonal entry of the Hermitian
/// 2x2 block [[a_pp, b], [conj(b), a_qq]] with b = |b| e^{i phi}.
struct JacobiRotation {
  double c;
  double s;
  Complex eip;  // e^{i phi}
};

JacobiRotation make_rotation(double app, double aqq, Complex b) {
  const double babs = std::abs(b);
  const double tau = (aqq - app) / (2.0 * babs);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  return JacobiRotation{c, t * c, b / babs};
}

std::vector<std::size_t> descending_order(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  return order;
}

}  // namespace

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ar = 0; ar < a.rows(); ++ar) {
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const Complex f = a(ar, ac);
      if (f == Complex(0.0)) continue;
      for (std::size_t br = 0; br < b.rows(); ++br) {
        for (std::size_t bc = 0; bc < b.cols(); ++bc) {
          m(ar * b.rows() + br, ac * b.cols() + bc) = f * b(br, bc);
        }
      }
    }
  }
  return m;
}

CMatrix partial_trace(const CMatrix& rho, const std::vector<std::size_t>& dims,
                      const std::vector<std::size_t>& keep) {
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  if (!rho.is_square() || rho.rows() != total) {
    throw std::invalid_argument("partial_trace: dims do not match matrix size");
  }
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= dims.size() || (i > 0 && keep[i] <= keep[i - 1])) {
      throw std::invalid_argument("partial_trace: keep list invalid");
    }
  }

  std::vector<std::size_t> traced;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (std::find(keep.begin(), keep.end(), i) == keep.end()) traced.push_back(i);
  }

  // Stride of subsystem i in the flat row-major index.
  std::vector<std::size_t> stride(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) {
    stride[i - 1] = stride[i] * dims[i];
  }

  std::size_t kept_dim = 1;
  for (std::size_t i : keep) kept_dim *= dims[i];
  std::size_t env_dim = 1;
  for (std::size_t i : traced) env_dim *= dims[i];

  auto flat_index = [&](const std::vector<std::size_t>& subsystems, std::size_t packed) {
    std::size_t idx = 0;
    // Unpack `packed` (mixed radix, first listed subsystem slowest).
    for (std::size_t i = subsystems.size(); i-- > 0;) {
      const std::size_t sub = subsystems[i];
      idx += (packed % dims[sub]) * stride[sub];
      packed /= dims[sub];
    }
    return idx;
  };

  CMatrix out(kept_dim, kept_dim);
  for (std::size_t r = 0; r < kept_dim; ++r) {
    const std::size_t r_base = flat_index(keep, r);
    for (std::size_t c = 0; c < kept_dim; ++c) {
      const std::size_t c_base = flat_index(keep, c);
      Complex acc = 0.0;
      for (std::size_t e = 0; e < env_dim; ++e) {
        const std::size_t e_off = flat_index(traced, e);
        acc += rho(r_base + e_off, c_base + e_off);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

CVector vectorize(const CMatrix& a) {
  if (!a.is_square()) throw std::invalid_argument("vectorize: matrix not square");
  const std::size_t d = a.rows();
  const double inv = 1.0 / std::sqrt(static_cast<double>(d));
  CVector v(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      v[i * d + j] = a(j, i) * inv;
    }
  }
  return v;
}

CMatrix unvectorize(const CVector& v, std::size_t d) {
  if (v.size() != d * d) throw std::invalid_argument("unvectorize: size mismatch");
  const double scale = std::sqrt(static_cast<double>(d));
  CMatrix a(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      a(j, i) = v[i * d + j] * scale;
    }
  }
  return a;
}

CMatrix reshuffle(const CMatrix& u, const BipartiteSplit& split) {
  const std::size_t da = split.d_a();
  const std::size_t db = split.d_b();
  if (!u.is_square() || u.rows() != da * db) {
    throw std::invalid_argument("reshuffle: matrix does not match split");
  }
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

CMatrix unreshuffle(const CMatrix& r, const BipartiteSplit& split) {
  const std::size_t da = split.d_a();
  const std::size_t db = split.d_b();
  if (r.rows() != da * da || r.cols() != db * db) {
    throw std::invalid_argument("unreshuffle: matrix does not match split");
  }
  const double scale = std::sqrt(static_cast<double>(da * db));
  CMatrix u(da * db, da * db);
  for (std::size_t ia = 0; ia < da; ++ia) {
    for (std::size_t ja = 0; ja < da; ++ja) {
      for (std::size_t ib = 0; ib < db; ++ib) {
        for (std::size_t jb = 0; jb < db; ++jb) {
          u(ia * db + ib, ja * db + jb) = r(ia * da + ja, ib * db + jb) * scale;
        }
      }
    }
  }
  return u;
}

EigResult hermitian_eig(const CMatrix& h) {
  if (!h.is_square()) throw std::invalid_argument("hermitian_eig: matrix not square");
  const std::size_t n = h.rows();
  const double scale = frobenius(h);
  if (!is_hermitian(h, 1e-10 * std::max(1.0, scale))) {
    throw std::invalid_argument("hermitian_eig: matrix not Hermitian");
  }

  // Work on the symmetrized copy so roundoff asymmetry cannot accumulate.
  CMatrix a(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      a(r, c) = 0.5 * (h(r, c) + std::conj(h(c, r)));
    }
  }
  CMatrix v = CMatrix::identity(n);

  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex b = a(p, q);
        const double thresh =
            kJacobiRelTol * std::sqrt(std::abs(a(p, p).real() * a(q, q).real())) + 1e-300;
        if (std::abs(b) <= thresh) continue;
        rotated = true;
        const JacobiRotation rot = make_rotation(a(p, p).real(), a(q, q).real(), b);
        const Complex jpq = rot.s * rot.eip;          // J(p,q)
        const Complex jqp = -rot.s * std::conj(rot.eip);  // J(q,p)
        // A <- J^dag A J, applied as column then row updates.
        for (std::size_t i = 0; i < n; ++i) {
          const Complex aip = a(i, p);
          const Complex aiq = a(i, q);
          a(i, p) = rot.c * aip + jqp * aiq;
          a(i, q) = jpq * aip + rot.c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const Complex api = a(p, i);
          const Complex aqi = a(q, i);
          a(p, i) = rot.c * api + std::conj(jqp) * aqi;
          a(q, i) = std::conj(jpq) * api + rot.c * aqi;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const Complex vip = v(i, p);
          const Complex viq = v(i, q);
          v(i, p) = rot.c * vip + jqp * viq;
          v(i, q) = jpq * vip + rot.c * viq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
    if (!rotated) break;
    if (sweep == kMaxJacobiSweeps - 1) {
      throw std::runtime_error("hermitian_eig: Jacobi sweep limit reached");
    }
  }

  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i).real();
  const std::vector<std::size_t> order = descending_order(values);

  EigResult result;
  result.values.resize(n);
  result.vectors = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    result.values[k] = values[order[k]];
    for (std::size_t i = 0; i < n; ++i) result.vectors(i, k) = v(i, order[k]);
  }
  // Phase gauge per column: largest-modulus component real positive.
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t imax = 0;
    double amax = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double m = std::abs(result.vectors(i, k));
      if (m > amax) {
        amax = m;
        imax = i;
      }
    }
    if (amax > 0.0) {
      const Complex ph = result.vectors(imax, k) / amax;
      for (std::size_t i = 0; i < n; ++i) result.vectors(i, k) /= ph;
    }
  }
  result.clusters = cluster_ranges(result.values, kClusterGapTol);
  return result;
}

namespace {

/// One-sided Jacobi on a matrix with rows >= cols; returns U (rows x cols,
/// orthonormal columns), sigma (descending), V (cols x cols).
SvdResult one_sided_jacobi(const CMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  CMatrix a = m;
  CMatrix v = CMatrix::identity(cols);

  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double app = 0.0;
        double aqq = 0.0;
        Complex apq = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
          app += std::norm(a(i, p));
          aqq += std::norm(a(i, q));
          apq += std::conj(a(i, p)) * a(i, q);
        }
        if (std::abs(apq) <= kJacobiRelTol * std::sqrt(app * aqq) + 1e-300) continue;
        rotated = true;
        const JacobiRotation rot = make_rotation(app, aqq, apq);
        const Complex jpq = rot.s * rot.eip;
        const Complex jqp = -rot.s * std::conj(rot.eip);
        for (std::size_t i = 0; i < rows; ++i) {
          const Complex aip = a(i, p);
          const Complex aiq = a(i, q);
          a(i, p) = rot.c * aip + jqp * aiq;
          a(i, q) = jpq * aip + rot.c * aiq;
        }
        for (std::size_t i = 0; i < cols; ++i) {
          const Complex vip = v(i, p);
          const Complex viq = v(i, q);
          v(i, p) = rot.c * vip + jqp * viq;
          v(i, q) = jpq * vip + rot.c * viq;
        }
      }
    }
    if (!rotated) break;
    if (sweep == kMaxJacobiSweeps - 1) {
      throw std::runtime_error("svd: Jacobi sweep limit reached");
    }
  }

  std::vector<double> sigma(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    double n2 = 0.0;
    for (std::size_t i = 0; i < rows; ++i) n2 += std::norm(a(i, c));
    sigma[c] = std::sqrt(n2);
  }
  const std::vector<std::size_t> order = descending_order(sigma);

  SvdResult out;
  out.sigma.resize(cols);
  out.u = CMatrix(rows, cols);
  out.v = CMatrix(cols, cols);
  const double sig_max = sigma.empty() ? 0.0 : sigma[order[0]];
  std::vector<std::size_t> null_cols;
  for (std::size_t k = 0; k < cols; ++k) {
    const std::size_t src = order[k];
    out.sigma[k] = sigma[src];
    for (std::size_t i = 0; i < cols; ++i) out.v(i, k) = v(i, src);
    if (sigma[src] > sig_max * 1e-290 && sigma[src] > 0.0) {
      const double inv = 1.0 / sigma[src];
      for (std::size_t i = 0; i < rows; ++i) out.u(i, k) = a(i, src) * inv;
    } else {
      out.sigma[k] = 0.0;
      null_cols.push_back(k);
    }
  }

  // Column-pivoted Gram-Schmidt completion for exactly-null directions: pick
  // the canonical basis vector with the largest residual each time.
  for (std::size_t k : null_cols) {
    CVector best;
    double best_norm2 = -1.0;
    for (std::size_t cand = 0; cand < rows; ++cand) {
      CVector e(rows, 0.0);
      e[cand] = 1.0;
      for (std::size_t c = 0; c < cols; ++c) {
        if (c == k) continue;
        Complex overlap = 0.0;
        for (std::size_t i = 0; i < rows; ++i) overlap += std::conj(out.u(i, c)) * e[i];
        for (std::size_t i = 0; i < rows; ++i) e[i] -= overlap * out.u(i, c);
      }
      double n2 = 0.0;
      for (const auto& z : e) n2 += std::norm(z);
      if (n2 > best_norm2) {
        best_norm2 = n2;
        best = e;
      }
    }
    const double inv = 1.0 / std::sqrt(best_norm2);
    for (std::size_t i = 0; i < rows; ++i) out.u(i, k) = best[i] * inv;
  }
  return out;
}

}  // namespace

SvdResult svd(const CMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) throw std::invalid_argument("svd: empty matrix");
  if (m.rows() >= m.cols()) return one_sided_jacobi(m);
  // Fewer rows than columns: decompose the adjoint and swap the factors.
  SvdResult t = one_sided_jacobi(m.adjoint());
  SvdResult out;
  out.sigma = std::move(t.sigma);
  out.u = std::move(t.v);
  out.v = std::move(t.u);
  return out;
}

double frobenius(const CMatrix& m) {
  double n2 = 0.0;
  for (const auto& z : m.data()) n2 += std::norm(z);
  return std::sqrt(n2);
}

double spectral(const CMatrix& m) {
  const SvdResult s = svd(m);
  return s.sigma.empty() ? 0.0 : s.sigma.front();
}

double trace_norm(const CMatrix& m) {
  const SvdResult s = svd(m);
  double acc = 0.0;
  for (double x : s.sigma) acc += x;
  return acc;
}

CMatrix nearest_density_matrix(const CMatrix& h) {
  if (!h.is_square()) {
    throw std::invalid_argument("nearest_density_matrix: matrix not square");
  }
  const std::size_t n = h.rows();
  CMatrix herm(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      herm(r, c) = 0.5 * (h(r, c) + std::conj(h(c, r)));
    }
  }
  EigResult eig = hermitian_eig(herm);

  // Euclidean projection of the eigenvalue vector onto the simplex.
  const std::vector<double>& lam = eig.values;  // already descending
  double cumsum = 0.0;
  double theta = 0.0;
  std::size_t support = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cumsum += lam[i];
    const double cand = (cumsum - 1.0) / static_cast<double>(i + 1);
    if (lam[i] - cand > 0.0) {
      theta = cand;
      support = i + 1;
    }
  }
  if (support == 0) {
    // All candidates rejected: mass collapses onto the top eigenvector.
    theta = lam[0] - 1.0;
    support = 1;
  }

  CMatrix out(n, n);
  for (std::size_t k = 0; k < support; ++k) {
    const double mu = std::max(lam[k] - theta, 0.0);
    if (mu == 0.0) continue;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        out(r, c) += mu * eig.vectors(r, k) * std::conj(eig.vectors(c, k));
      }
    }
  }
  return out;
}

bool is_hermitian(const CMatrix& m, double tol) {
  if (!m.is_square()) return false;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = r; c < m.cols(); ++c) {
      if (std::abs(m(r, c) - std::conj(m(c, r))) > tol) return false;
    }
  }
  return true;
}

double unitarity_defect(const CMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("unitarity_defect: matrix not square");
  CMatrix g = m.adjoint() * m;
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
  return frobenius(g);
}

double fix_phase_gauge(CMatrix& m) {
  const std::size_t idx = m.argmax_abs();
  const Complex z = m.data()[idx];
  const double mag = std::abs(z);
  if (mag == 0.0) return 0.0;
  const double phase = std::arg(z);
  m *= std::conj(z) / mag;
  return phase;
}

std::vector<std::pair<std::size_t, std::size_t>> cluster_ranges(
    const std::vector<double>& descending, double gap_tol) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= descending.size(); ++i) {
    const bool boundary =
        i == descending.size() || descending[i - 1] - descending[i] >= gap_tol;
    if (boundary) {
      if (i - 1 > start) out.emplace_back(start, i - 1);
      start = i;
    }
  }
  return out;
}

}  // namespace qtpd
