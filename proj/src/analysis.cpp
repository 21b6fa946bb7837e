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

#include "qtpd/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qtpd/linalg.hpp"
#include "qtpd/rng.hpp"

namespace qtpd {

namespace {

Complex dot(const CVector& a, const CVector& b) {
  Complex acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double norm2(const CVector& v) {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return acc;
}

// Tr(X Y) without forming the product.
Complex trace_of_product(const CMatrix& x, const CMatrix& y) {
  Complex acc = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      acc += x(i, j) * y(j, i);
    }
  }
  return acc;
}

/// Permutation matrix exchanging the A qubit block with the qubit subset
/// `c_qubits` of B (paired in increasing order).  Big-endian bit layout.
CMatrix swap_permutation(std::size_t n, std::size_t n_a,
                         const std::vector<std::size_t>& c_qubits) {
  const std::size_t dim = std::size_t{1} << n;
  CMatrix p(dim, dim);
  for (std::size_t v = 0; v < dim; ++v) {
    std::size_t w = v;
    for (std::size_t i = 0; i < n_a; ++i) {
      const std::size_t pa = n - 1 - i;            // bit position of A qubit i
      const std::size_t pc = n - 1 - c_qubits[i];  // bit position of C qubit i
      const std::size_t ba = (v >> pa) & 1u;
      const std::size_t bc = (v >> pc) & 1u;
      if (ba != bc) w ^= (std::size_t{1} << pa) | (std::size_t{1} << pc);
    }
    p(w, v) = 1.0;
  }
  return p;
}

}  // namespace

double nonlocality(const std::vector<double>& s) {
  double total = 0.0;
  for (double x : s) {
    if (x < 0.0) throw std::invalid_argument("nonlocality: negative coefficient");
    total += x * x;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw std::invalid_argument("nonlocality: coefficients not normalized");
  }
  double entropy = 0.0;
  for (double x : s) {
    const double p = x * x;
    if (p < 1e-300) continue;
    entropy -= p * std::log(p);
  }
  return entropy;
}

double nonlocality_normalized(const std::vector<double>& s, std::size_t d_a) {
  return nonlocality(s) / std::log(static_cast<double>(d_a * d_a));
}

MereologyCosts mereology_costs(const std::vector<double>& s) {
  if (s.empty()) throw std::invalid_argument("mereology_costs: empty coefficients");
  MereologyCosts costs;
  costs.one_minus_s1_sq = 1.0 - s[0] * s[0];
  for (std::size_t k = 1; k < s.size(); ++k) costs.tail_sum += s[k];
  return costs;
}

double entangling_power_swap(const CMatrix& u, const BipartiteSplit& split) {
  const double log_da2 = std::log(static_cast<double>(split.d_a() * split.d_a()));
  double total = nonlocality(classical_tpd(u, split).s);

  // All increasing n_a-subsets of B's qubits {n_a, ..., n-1}.
  std::vector<std::size_t> c(split.n_a);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = split.n_a + i;
  while (true) {
    const CMatrix p = swap_permutation(split.n(), split.n_a, c);
    total += nonlocality(classical_tpd(u * p, split).s) - log_da2;

    // Next combination.
    std::size_t i = c.size();
    while (i > 0 && c[i - 1] == split.n() - (c.size() - (i - 1))) --i;
    if (i == 0) break;
    ++c[i - 1];
    for (std::size_t j = i; j < c.size(); ++j) c[j] = c[j - 1] + 1;
  }
  return total / log_da2;
}

double entangling_power_mean(const TensorProductDecomposition& tpd) {
  const double da = static_cast<double>(tpd.split.d_a());
  const double db = static_cast<double>(tpd.split.d_b());
  const std::size_t r = tpd.rank();

  double sum_s4 = 0.0;
  for (double x : tpd.s) sum_s4 += x * x * x * x;

  // Gram products G[l][m] = X_l^dag X_m let every quartic trace collapse to
  // Tr(G[l][m] G[n][k]) (A side) and Tr(G[n][m] G[l][k]) (B side).
  std::vector<std::vector<CMatrix>> ga(r, std::vector<CMatrix>(r));
  std::vector<std::vector<CMatrix>> gb(r, std::vector<CMatrix>(r));
  for (std::size_t l = 0; l < r; ++l) {
    const CMatrix al = tpd.a_ops[l].adjoint();
    const CMatrix bl = tpd.b_ops[l].adjoint();
    for (std::size_t m = 0; m < r; ++m) {
      ga[l][m] = al * tpd.a_ops[m];
      gb[l][m] = bl * tpd.b_ops[m];
    }
  }
  Complex quartic = 0.0;
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t l = 0; l < r; ++l) {
      for (std::size_t m = 0; m < r; ++m) {
        for (std::size_t n = 0; n < r; ++n) {
          const double w = tpd.s[k] * tpd.s[l] * tpd.s[m] * tpd.s[n];
          quartic += w * trace_of_product(ga[l][m], ga[n][k]) *
                     trace_of_product(gb[n][m], gb[l][k]);
        }
      }
    }
  }

  const double denom = (da + 1.0) * (db + 1.0);
  return 1.0 - (da + db) / denom - da * db * sum_s4 / denom -
         quartic.real() / (da * (da + 1.0) * db * (db + 1.0));
}

double entangling_power_mean(const CMatrix& u, const BipartiteSplit& split) {
  return entangling_power_mean(classical_tpd(u, split));
}

double entangling_power_mean(const ExtractedFactors&) {
  throw std::invalid_argument(
      "entangling_power_mean: requires both factor sides; "
      "run the classical decomposition");
}

McEstimate entangling_power_mc(const CMatrix& u, const BipartiteSplit& split,
                               std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 100) {
    throw std::invalid_argument("entangling_power_mc: need at least 100 samples");
  }
  const std::size_t da = split.d_a();
  const std::size_t db = split.d_b();
  if (!u.is_square() || u.rows() != da * db) {
    throw std::invalid_argument("entangling_power_mc: matrix does not match split");
  }

  Rng root(seed);
  std::vector<double> values(n_samples);
  CVector product(da * db);
  for (std::size_t i = 0; i < n_samples; ++i) {
    Rng stream = root.child(i);
    const CVector psi_a = haar_state(da, stream);
    const CVector psi_b = haar_state(db, stream);
    for (std::size_t a = 0; a < da; ++a) {
      for (std::size_t b = 0; b < db; ++b) product[a * db + b] = psi_a[a] * psi_b[b];
    }
    const CVector phi = u.apply(product);
    // Purity of the A reduction, straight from amplitudes.
    double purity = 0.0;
    for (std::size_t a = 0; a < da; ++a) {
      for (std::size_t ap = 0; ap < da; ++ap) {
        Complex entry = 0.0;
        for (std::size_t b = 0; b < db; ++b) {
          entry += phi[a * db + b] * std::conj(phi[ap * db + b]);
        }
        purity += std::norm(entry);
      }
    }
    values[i] = 1.0 - purity;
  }

  McEstimate est;
  for (double v : values) est.mean += v;
  est.mean /= static_cast<double>(n_samples);
  double var = 0.0;
  for (double v : values) var += (v - est.mean) * (v - est.mean);
  var /= static_cast<double>(n_samples - 1);
  est.std_error = std::sqrt(var / static_cast<double>(n_samples));
  return est;
}

OpenSurrogate open_surrogate(const std::vector<double>& s,
                             const std::vector<CMatrix>& a_ops,
                             const std::vector<CMatrix>& b_ops, const CVector& psi_b,
                             const BipartiteSplit& split) {
  const std::size_t r = s.size();
  if (r == 0 || a_ops.size() != r || b_ops.size() != r) {
    throw std::invalid_argument("open_surrogate: inconsistent ranks");
  }
  if (psi_b.size() != split.d_b() || std::abs(norm2(psi_b) - 1.0) > 1e-9) {
    throw std::invalid_argument("open_surrogate: invalid environment state");
  }
  std::vector<CVector> w(r);
  for (std::size_t k = 0; k < r; ++k) {
    if (b_ops[k].rows() != split.d_b()) {
      throw std::invalid_argument("open_surrogate: B factor does not match split");
    }
    w[k] = b_ops[k].apply(psi_b);
  }
  OpenSurrogate surrogate;
  surrogate.split = split;
  surrogate.a_ops = a_ops;
  surrogate.lambda = CMatrix(r, r);
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t l = 0; l < r; ++l) {
      surrogate.lambda(k, l) = s[k] * s[l] * dot(w[l], w[k]);
    }
  }
  return surrogate;
}

OpenSurrogate open_surrogate(const ExtractedFactors& factors,
                             const DistillationResult& distilled) {
  const std::size_t r = factors.a_ops.size();
  if (distilled.branches.size() != r) {
    throw std::invalid_argument("open_surrogate: inconsistent ranks");
  }
  OpenSurrogate surrogate;
  surrogate.split = factors.split;
  surrogate.a_ops = factors.a_ops;
  surrogate.lambda = CMatrix(r, r);
  for (std::size_t k = 0; k < r; ++k) {
    const auto& bk = distilled.branches[k];
    if (bk.null_branch) continue;  // zero row and column
    for (std::size_t l = 0; l < r; ++l) {
      const auto& bl = distilled.branches[l];
      if (bl.null_branch) continue;
      surrogate.lambda(k, l) = std::sqrt(bk.probability * bl.probability) *
                               dot(bl.state_b, bk.state_b);
    }
  }
  return surrogate;
}

CMatrix evolve(const OpenSurrogate& surrogate, const CVector& psi_a) {
  const std::size_t da = surrogate.split.d_a();
  if (psi_a.size() != da || std::abs(norm2(psi_a) - 1.0) > 1e-9) {
    throw std::invalid_argument("evolve: invalid subsystem state");
  }
  const std::size_t r = surrogate.a_ops.size();
  std::vector<CVector> w(r);
  for (std::size_t k = 0; k < r; ++k) w[k] = surrogate.a_ops[k].apply(psi_a);
  CMatrix sigma(da, da);
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t l = 0; l < r; ++l) {
      const Complex lam = surrogate.lambda(k, l);
      if (lam == Complex(0.0)) continue;
      for (std::size_t i = 0; i < da; ++i) {
        for (std::size_t j = 0; j < da; ++j) {
          sigma(i, j) += lam * w[k][i] * std::conj(w[l][j]);
        }
      }
    }
  }
  return sigma;
}

StateObservables observables(const CMatrix& sigma_a, std::size_t n_a) {
  const std::size_t dim = std::size_t{1} << n_a;
  if (!sigma_a.is_square() || sigma_a.rows() != dim) {
    throw std::invalid_argument("observables: dimension mismatch");
  }
  if (!is_hermitian(sigma_a, 1e-8)) {
    throw std::invalid_argument("observables: state not Hermitian");
  }

  double magnetization = 0.0;
  for (std::size_t v = 0; v < dim; ++v) {
    // sum_i <Z_i> on |v>: +1 per 0 bit, -1 per 1 bit.
    const int ones = std::popcount(v);
    const double z_sum = static_cast<double>(n_a) - 2.0 * ones;
    magnetization += z_sum * sigma_a(v, v).real();
  }

  StateObservables obs;
  obs.occupation = 0.5 - magnetization / (2.0 * static_cast<double>(n_a));

  const EigResult eig = hermitian_eig(sigma_a);
  double entropy = 0.0;
  for (double lambda : eig.values) {
    if (lambda <= 1e-300) continue;  // 0 log 0 = 0, and clip tiny negatives
    entropy -= lambda * std::log(lambda);
  }
  obs.entropy_norm = entropy / (static_cast<double>(n_a) * std::numbers::ln2);
  return obs;
}

std::vector<double> unitary_eigenphases(const CMatrix& u) {
  if (!u.is_square()) throw std::invalid_argument("unitary_eigenphases: not square");
  if (unitarity_defect(u) > 1e-6) {
    throw std::invalid_argument("unitary_eigenphases: matrix is not unitary");
  }
  const std::size_t d = u.rows();

  CMatrix hc = u;
  hc += u.adjoint();
  hc *= Complex(0.5);
  CMatrix hs = u;
  hs -= u.adjoint();
  hs *= Complex(0.0, -0.5);

  const EigResult eig = hermitian_eig(hc);
  // cos is even, so conjugate phase pairs collide in hc; the anti-Hermitian
  // part splits each cos-cluster.
  std::vector<double> sin_vals(d, 0.0);
  std::vector<bool> in_cluster(d, false);
  for (const auto& [first, last] : eig.clusters) {
    const std::size_t m = last - first + 1;
    std::vector<CVector> cols(m);
    for (std::size_t c = 0; c < m; ++c) {
      cols[c].resize(d);
      for (std::size_t i = 0; i < d; ++i) cols[c][i] = eig.vectors(i, first + c);
    }
    CMatrix block(m, m);
    for (std::size_t c = 0; c < m; ++c) {
      const CVector hv = hs.apply(cols[c]);
      for (std::size_t rrow = 0; rrow < m; ++rrow) block(rrow, c) = dot(cols[rrow], hv);
    }
    const EigResult sub = hermitian_eig(block);
    for (std::size_t c = 0; c < m; ++c) {
      sin_vals[first + c] = sub.values[c];
      in_cluster[first + c] = true;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    if (in_cluster[j]) continue;
    CVector col(d);
    for (std::size_t i = 0; i < d; ++i) col[i] = eig.vectors(i, j);
    sin_vals[j] = dot(col, hs.apply(col)).real();
  }

  std::vector<double> phases(d);
  for (std::size_t j = 0; j < d; ++j) phases[j] = std::atan2(sin_vals[j], eig.values[j]);
  std::sort(phases.begin(), phases.end());
  return phases;
}

namespace {

double wrap_angle(double x) {
  x = std::fmod(x, 2.0 * std::numbers::pi);
  if (x > std::numbers::pi) x -= 2.0 * std::numbers::pi;
  if (x <= -std::numbers::pi) x += 2.0 * std::numbers::pi;
  return x;
}

double angle_dist(double a, double b) { return std::abs(wrap_angle(a - b)); }

/// Backtracking state for factoring a phase multiset into a sum grid.
struct GridSearch {
  double tol = 0.0;
  std::size_t da = 0, db = 0;
  std::vector<double> theta;  // ascending
  std::vector<double> phi, psi;
  std::vector<bool> used;
  std::size_t best_remaining = SIZE_MAX;
  double nearest_miss = std::numeric_limits<double>::infinity();
  std::size_t nodes = 0;
  static constexpr std::size_t kMaxNodes = 50'000'000;

  void note_miss(std::size_t remaining, double miss) {
    if (remaining < best_remaining ||
        (remaining == best_remaining && miss < nearest_miss)) {
      best_remaining = remaining;
      nearest_miss = miss;
    }
  }

  /// A viable phi-difference must recur in the spectrum once per column.
  bool difference_recurs(double delta) {
    std::size_t count = 0;
    double closest_other = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < theta.size(); ++i) {
      for (std::size_t j = 0; j < theta.size(); ++j) {
        if (i == j) continue;
        const double r = angle_dist(theta[i] - theta[j], delta);
        if (r <= 2.0 * tol) {
          ++count;
        } else {
          closest_other = std::min(closest_other, r);
        }
      }
    }
    if (count >= db) return true;
    note_miss(used.size(), closest_other);
    return false;
  }

  bool match_translate(double psi_val, std::vector<std::size_t>& taken) {
    taken.clear();
    for (double phi_val : phi) {
      const double target = phi_val + psi_val;
      double best_d = std::numeric_limits<double>::infinity();
      std::size_t best_j = SIZE_MAX;
      for (std::size_t j = 0; j < theta.size(); ++j) {
        if (used[j]) continue;
        const double r = angle_dist(theta[j], target);
        if (r < best_d) {
          best_d = r;
          best_j = j;
        }
      }
      if (best_j == SIZE_MAX || best_d > tol) {
        std::size_t remaining = 0;
        for (bool b : used) remaining += b ? 0 : 1;
        note_miss(remaining, best_d);
        for (std::size_t j : taken) used[j] = false;
        taken.clear();
        return false;
      }
      used[best_j] = true;
      taken.push_back(best_j);
    }
    return true;
  }

  bool extend_columns() {
    if (++nodes > kMaxNodes) {
      throw std::runtime_error("decoherence_free_check: search budget exceeded");
    }
    std::size_t anchor = SIZE_MAX;
    for (std::size_t j = 0; j < theta.size(); ++j) {
      if (!used[j]) {
        anchor = j;
        break;
      }
    }
    if (anchor == SIZE_MAX) return true;

    std::vector<double> tried;
    for (std::size_t mu = 0; mu < da; ++mu) {
      const double cand = wrap_angle(theta[anchor] - phi[mu]);
      bool seen = false;
      for (double t : tried) {
        if (angle_dist(t, cand) <= tol) {
          seen = true;
          break;
        }
      }
      if (seen) continue;
      tried.push_back(cand);
      std::vector<std::size_t> taken;
      if (!match_translate(cand, taken)) continue;
      psi.push_back(cand);
      if (extend_columns()) return true;
      psi.pop_back();
      for (std::size_t j : taken) used[j] = false;
    }
    return false;
  }

  bool choose_phi(std::size_t start) {
    if (++nodes > kMaxNodes) {
      throw std::runtime_error("decoherence_free_check: search budget exceeded");
    }
    if (phi.size() == da) {
      psi.assign(1, 0.0);
      if (extend_columns()) return true;
      psi.clear();
      return false;
    }
    double last_tried = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t j = start; j < theta.size(); ++j) {
      if (used[j]) continue;
      if (!std::isnan(last_tried) && angle_dist(theta[j], last_tried) <= tol) continue;
      last_tried = theta[j];
      bool viable = true;
      for (double phi_val : phi) {
        if (!difference_recurs(wrap_angle(theta[j] - phi_val))) {
          viable = false;
          break;
        }
      }
      if (!viable) continue;
      phi.push_back(theta[j]);
      used[j] = true;
      if (choose_phi(j + 1)) return true;
      used[j] = false;
      phi.pop_back();
    }
    return false;
  }
};

}  // namespace

DfsCheckResult decoherence_free_check(const CMatrix& u, const BipartiteSplit& split,
                                      double tol) {
  const std::size_t d = split.d();
  if (d > 64) {
    throw std::invalid_argument("decoherence_free_check: dimension above 64");
  }
  if (!u.is_square() || u.rows() != d) {
    throw std::invalid_argument("decoherence_free_check: matrix does not match split");
  }
  if (tol <= 0.0) throw std::invalid_argument("decoherence_free_check: tol must be > 0");

  GridSearch search;
  search.tol = tol;
  search.da = split.d_a();
  search.db = split.d_b();
  search.theta = unitary_eigenphases(u);
  search.used.assign(d, false);

  // Gauge: the column with psi = 0 is the phi multiset itself, and some
  // column contains the smallest phase, so phi[0] = theta[0] is general.
  search.phi.push_back(search.theta[0]);
  search.used[0] = true;

  DfsCheckResult result;
  if (search.choose_phi(1)) {
    result.decomposable = true;
    result.phi = search.phi;
    result.psi = search.psi;
    result.nearest_miss = 0.0;
  } else {
    result.nearest_miss =
        std::isfinite(search.nearest_miss) ? search.nearest_miss : 0.0;
  }
  return result;
}

}  // namespace qtpd
