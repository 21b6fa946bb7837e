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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "qtpd/linalg.hpp"
#include "qtpd/rng.hpp"
#include "qtpd/statevector.hpp"
#include "qtpd/tpd.hpp"

using namespace qtpd;

namespace {

CMatrix cnot_matrix() {
  CMatrix u(4, 4);
  u(0, 0) = 1.0;
  u(1, 1) = 1.0;
  u(2, 3) = 1.0;
  u(3, 2) = 1.0;
  return u;
}

CMatrix swap_matrix() {
  CMatrix u(4, 4);
  u(0, 0) = 1.0;
  u(1, 2) = 1.0;
  u(2, 1) = 1.0;
  u(3, 3) = 1.0;
  return u;
}

double mat_diff(const CMatrix& a, const CMatrix& b) { return frobenius(a - b); }

Complex hs_inner(const CMatrix& a, const CMatrix& b) {
  Complex acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      acc += std::conj(a(i, j)) * b(i, j);
    }
  }
  return acc;
}

// Projector onto the span of vec(A_k) over the index range [lo, hi].
CMatrix span_projector(const std::vector<CMatrix>& ops, std::size_t lo,
                       std::size_t hi) {
  const std::size_t d = ops[lo].rows();
  CMatrix p(d * d, d * d);
  for (std::size_t k = lo; k <= hi; ++k) {
    const CVector v = vectorize(ops[k]);
    p += CMatrix::outer(v, v);
  }
  return p;
}

void check_canonical(const TensorProductDecomposition& tpd, double tol) {
  const double da = static_cast<double>(tpd.split.d_a());
  const double db = static_cast<double>(tpd.split.d_b());
  double sum_sq = 0.0;
  for (std::size_t k = 0; k < tpd.rank(); ++k) {
    CHECK(tpd.s[k] >= 0.0);
    if (k > 0) CHECK(tpd.s[k - 1] >= tpd.s[k]);
    sum_sq += tpd.s[k] * tpd.s[k];
    for (std::size_t l = 0; l < tpd.rank(); ++l) {
      const Complex ga = hs_inner(tpd.a_ops[k], tpd.a_ops[l]);
      const Complex gb = hs_inner(tpd.b_ops[k], tpd.b_ops[l]);
      const Complex want_a = (k == l) ? Complex(da) : Complex(0.0);
      const Complex want_b = (k == l) ? Complex(db) : Complex(0.0);
      CHECK(std::abs(ga - want_a) < tol * da);
      CHECK(std::abs(gb - want_b) < tol * db);
    }
    // Phase gauge on the A side (only meaningful away from degeneracies).
    const CMatrix& a = tpd.a_ops[k];
    const std::size_t flat = a.argmax_abs();
    const Complex top = a(flat / a.cols(), flat % a.cols());
    CHECK(top.real() > 0.0);
    CHECK(std::abs(top.imag()) < tol * std::abs(top));
  }
  CHECK(std::abs(sum_sq - 1.0) < tol);
}

}  // namespace

TEST_CASE("identity decomposes as a single product term") {
  const BipartiteSplit split(1, 1);
  const auto tpd = classical_tpd(CMatrix::identity(4), split);
  REQUIRE(tpd.rank() == 1);
  CHECK(std::abs(tpd.s[0] - 1.0) < 1e-14);
  CHECK(mat_diff(tpd.a_ops[0], CMatrix::identity(2)) < 1e-13);
  CHECK(mat_diff(tpd.b_ops[0], CMatrix::identity(2)) < 1e-13);
  CHECK(tpd.clusters.empty());
}

TEST_CASE("swap has four equal coefficients spanning the matrix-unit basis") {
  const BipartiteSplit split(1, 1);
  const auto tpd = classical_tpd(swap_matrix(), split);
  REQUIRE(tpd.rank() == 4);
  for (double v : tpd.s) CHECK(std::abs(v - 0.5) < 1e-14);
  REQUIRE(tpd.clusters.size() == 1);
  CHECK(tpd.clusters[0].first == 0);
  CHECK(tpd.clusters[0].second == 3);
  // The factors are gauge-arbitrary inside the cluster; the span is not.
  // vec span of {sqrt(2) E_ij} is the whole 4-dim space.
  const CMatrix p = span_projector(tpd.a_ops, 0, 3);
  CHECK(mat_diff(p, CMatrix::identity(4)) < 1e-12);
  CHECK(mat_diff(reconstruct(tpd), swap_matrix()) < 1e-12);
  check_canonical(tpd, 1e-10);
}

TEST_CASE("cnot splits into two equal diagonal-control terms") {
  const BipartiteSplit split(1, 1);
  const auto tpd = classical_tpd(cnot_matrix(), split);
  REQUIRE(tpd.rank() == 2);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(tpd.s[0] - r) < 1e-14);
  CHECK(std::abs(tpd.s[1] - r) < 1e-14);
  // Control-side span contains exactly the diagonal operators
  // span{|0><0|, |1><1|} = span{I, Z} regardless of the in-cluster gauge.
  const CMatrix p = span_projector(tpd.a_ops, 0, 1);
  CMatrix want(4, 4);
  want(0, 0) = 1.0;  // vec index (0,0)
  want(3, 3) = 1.0;  // vec index (1,1)
  CHECK(mat_diff(p, want) < 1e-12);
  CHECK(mat_diff(reconstruct(tpd), cnot_matrix()) < 1e-12);
}

TEST_CASE("random unitaries give canonical full-rank expansions") {
  Rng rng(101);
  for (auto [na, nb] : std::vector<std::pair<std::size_t, std::size_t>>{
           {1, 1}, {1, 2}, {2, 2}}) {
    const BipartiteSplit split(na, nb);
    const CMatrix u = haar_unitary(split.d(), rng);
    const auto tpd = classical_tpd(u, split);
    CHECK(tpd.rank() == split.d_a() * split.d_a());
    check_canonical(tpd, 1e-9);
    CHECK(mat_diff(reconstruct(tpd), u) < 1e-10);
  }
}

TEST_CASE("a non-unitary input still reconstructs with unnormalized weight") {
  Rng rng(7);
  const BipartiteSplit split(1, 1);
  const CMatrix m = gaussian_matrix(4, 4, rng);
  const auto tpd = classical_tpd(m, split);
  CHECK(mat_diff(reconstruct(tpd), m) < 1e-12);
  double sum_sq = 0.0;
  for (double v : tpd.s) sum_sq += v * v;
  // Weight equals |m|_F^2 / (d_A d_B), not forced to 1.
  CHECK(std::abs(sum_sq - frobenius(m) * frobenius(m) / 4.0) < 1e-10);
}

TEST_CASE("canonicalize fixes scrambled gauges and passes through clean input") {
  Rng rng(211);
  const BipartiteSplit split(1, 1);
  const CMatrix u = haar_unitary(4, rng);
  auto tpd = classical_tpd(u, split);
  const auto clean = canonicalize(tpd);
  for (std::size_t k = 0; k < tpd.rank(); ++k) {
    CHECK(std::abs(clean.s[k] - tpd.s[k]) < 1e-12);
    CHECK(mat_diff(clean.a_ops[k], tpd.a_ops[k]) < 1e-10);
  }
  // Scramble phases and order, then restore.
  auto messy = tpd;
  std::swap(messy.s[0], messy.s[1]);
  std::swap(messy.a_ops[0], messy.a_ops[1]);
  std::swap(messy.b_ops[0], messy.b_ops[1]);
  const Complex ph = std::exp(Complex(0.0, 1.1));
  messy.a_ops[2] *= ph;
  messy.b_ops[2] *= std::conj(ph);
  const auto fixed = canonicalize(messy);
  check_canonical(fixed, 1e-9);
  CHECK(mat_diff(reconstruct(fixed), u) < 1e-10);
}

TEST_CASE("truncation is the Schmidt partial sum with the predicted error") {
  Rng rng(19);
  const BipartiteSplit split(1, 1);
  const CMatrix u = haar_unitary(4, rng);
  const auto tpd = classical_tpd(u, split);
  for (std::size_t r = 1; r <= 4; ++r) {
    const auto cut = low_rank_truncate(tpd, r);
    CHECK(cut.rank() == r);
    const double err = mat_diff(reconstruct(cut), u) / 2.0;  // /sqrt(d_A d_B)
    CHECK(std::abs(err - low_rank_error(tpd, r)) < 1e-10);
  }
  double tail = 0.0;
  for (std::size_t k = 2; k < 4; ++k) tail += tpd.s[k] * tpd.s[k];
  CHECK(std::abs(low_rank_error(tpd, 2) - std::sqrt(tail)) < 1e-12);
}

TEST_CASE("truncating inside a degenerate run is flagged") {
  const BipartiteSplit split(1, 1);
  const auto tpd = classical_tpd(swap_matrix(), split);
  const auto cut = low_rank_truncate(tpd, 2);
  CHECK(cut.truncated_inside_cluster);
  const auto whole = low_rank_truncate(tpd, 4);
  CHECK(!whole.truncated_inside_cluster);
  const auto cnot_cut = low_rank_truncate(classical_tpd(cnot_matrix(), split), 1);
  CHECK(cnot_cut.truncated_inside_cluster);
}

TEST_CASE("nearest_unitary projects invertible matrices and rejects singular") {
  Rng rng(53);
  const CMatrix u0 = haar_unitary(3, rng);
  // Stretch away from the group: m = u0 * diag(2, 1, 0.5).
  CMatrix d(3, 3);
  d(0, 0) = 2.0;
  d(1, 1) = 1.0;
  d(2, 2) = 0.5;
  const CMatrix m = u0 * d;
  const auto res = nearest_unitary(m);
  CHECK(unitarity_defect(res.unitary) < 1e-12);
  CHECK(mat_diff(res.unitary, u0) < 1e-10);
  const double want = std::sqrt(1.0 + 0.0 + 0.25);
  CHECK(std::abs(res.distance - want) < 1e-10);
  CHECK(std::abs(res.distance - mat_diff(m, res.unitary)) < 1e-10);

  CMatrix sing(2, 2);
  sing(0, 0) = 1.0;
  CHECK_THROWS_AS(nearest_unitary(sing), std::runtime_error);
}

TEST_CASE("permute_sites relabels tensor factors consistently") {
  Rng rng(61);
  const CMatrix a = haar_unitary(2, rng);
  const CMatrix b = haar_unitary(3, rng);
  const CMatrix c = haar_unitary(2, rng);
  const CMatrix abc = kron(kron(a, b), c);
  const CMatrix cab = permute_sites(abc, {2, 3, 2}, {2, 0, 1});
  CHECK(mat_diff(cab, kron(kron(c, a), b)) < 1e-12);
  // Identity permutation round trip.
  CHECK(mat_diff(permute_sites(abc, {2, 3, 2}, {0, 1, 2}), abc) < 1e-14);
}

TEST_CASE("multipartite expansion with two sites matches the bipartite one") {
  Rng rng(67);
  const CMatrix u = haar_unitary(8, rng);
  const auto multi = multipartite_tpd(u, {2, 4});
  const auto bi = classical_tpd(u, BipartiteSplit(1, 2));
  REQUIRE(multi.ranks.size() == 2);
  CHECK(multi.ranks[0] == bi.rank());
  CHECK(multi.ranks[1] == bi.rank());
  // Coefficient matrix restricted to the diagonal reproduces s.
  for (std::size_t k = 0; k < bi.rank(); ++k) {
    CHECK(std::abs(multi.coefficient({k, k}) - Complex(bi.s[k])) < 1e-10);
    Complex off = multi.coefficient({k, (k + 1) % bi.rank()});
    CHECK(std::abs(off) < 1e-9);
  }
}

TEST_CASE("multipartite expansion of a pure product has unit ranks") {
  Rng rng(71);
  const CMatrix a = haar_unitary(2, rng);
  const CMatrix b = haar_unitary(2, rng);
  const CMatrix c = haar_unitary(2, rng);
  const auto multi = multipartite_tpd(kron(kron(a, b), c), {2, 2, 2});
  REQUIRE(multi.ranks.size() == 3);
  CHECK(multi.ranks[0] == 1);
  CHECK(multi.ranks[1] == 1);
  CHECK(multi.ranks[2] == 1);
  CHECK(std::abs(multi.leading() - 1.0) < 1e-12);
}

TEST_CASE("multipartite coefficients reconstruct a generic three-site matrix") {
  Rng rng(73);
  const CMatrix u = haar_unitary(8, rng);
  const auto multi = multipartite_tpd(u, {2, 2, 2});
  CMatrix recon(8, 8);
  std::vector<std::size_t> idx(3);
  for (idx[0] = 0; idx[0] < multi.ranks[0]; ++idx[0]) {
    for (idx[1] = 0; idx[1] < multi.ranks[1]; ++idx[1]) {
      for (idx[2] = 0; idx[2] < multi.ranks[2]; ++idx[2]) {
        const CMatrix term = kron(kron(multi.bases[0][idx[0]], multi.bases[1][idx[1]]),
                                  multi.bases[2][idx[2]]);
        recon += multi.coefficient(idx) * term;
      }
    }
  }
  CHECK(mat_diff(recon, u) < 1e-9);
}

TEST_CASE("fully factored approximation is tight on near-product unitaries") {
  Rng rng(79);
  const CMatrix a = haar_unitary(2, rng);
  const CMatrix b = haar_unitary(2, rng);
  const CMatrix c = haar_unitary(2, rng);
  const CMatrix exact_product = kron(kron(a, b), c);

  auto fqt = fqt_approximation(exact_product, {2, 2, 2});
  CHECK(fqt.achieved < 1e-10);
  CHECK(fqt.bound < 1e-4);

  // Small perturbation: error grows but stays under the a-priori bound.
  const CMatrix h = gaussian_hermitian(8, rng);
  const CMatrix u = exact_product * exact_evolution(h, 0.05);
  auto near = fqt_approximation(u, {2, 2, 2});
  CHECK(near.achieved > 0.0);
  CHECK(near.achieved <= near.bound + 1e-9);
  CHECK(unitarity_defect(near.product) < 1e-10);
}

TEST_CASE("fully factored approximation of swap stays within its bound") {
  // Frozen reference values for the maximally non-product case.
  auto fqt = fqt_approximation(swap_matrix(), {2, 2});
  CHECK(std::abs(fqt.eps_s - 0.5) < 1e-12);
  CHECK(std::abs(fqt.achieved - std::sqrt(0.5)) < 1e-6);
  CHECK(fqt.achieved <= fqt.bound + 1e-9);
  CHECK(std::abs(fqt.bound - 1.5501) < 5e-3);
}
