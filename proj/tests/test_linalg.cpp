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

#include "doctest.h"
#include "qtpd/linalg.hpp"
#include "qtpd/rng.hpp"

using namespace qtpd;

namespace {

const Complex I_unit(0.0, 1.0);

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

double mat_diff(const CMatrix& a, const CMatrix& b) { return frobenius(a - b); }

// Columns orthonormal; works for thin factors where the matrix is not square.
double isometry_defect(const CMatrix& m) {
  return frobenius(m.adjoint() * m - CMatrix::identity(m.cols()));
}

}  // namespace

TEST_CASE("kron places the left factor on the slow index") {
  const CMatrix k = kron(pauli_x(), pauli_z());
  CHECK(k.rows() == 4);
  CHECK(std::abs(k(0, 2) - Complex(1.0)) < 1e-15);
  CHECK(std::abs(k(1, 3) - Complex(-1.0)) < 1e-15);
  CHECK(std::abs(k(2, 0) - Complex(1.0)) < 1e-15);
  CHECK(std::abs(k(3, 1) - Complex(-1.0)) < 1e-15);
  CHECK(std::abs(k(0, 0)) < 1e-15);
}

TEST_CASE("partial trace of a Bell pair is maximally mixed on either side") {
  CVector bell = {1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)};
  const CMatrix rho = CMatrix::outer(bell, bell);
  for (std::size_t side = 0; side < 2; ++side) {
    const CMatrix red = partial_trace(rho, {2, 2}, {side});
    CHECK(std::abs(red(0, 0) - Complex(0.5)) < 1e-15);
    CHECK(std::abs(red(1, 1) - Complex(0.5)) < 1e-15);
    CHECK(std::abs(red(0, 1)) < 1e-15);
  }
}

TEST_CASE("partial trace keeps subsystem order and handles mixed dimensions") {
  Rng rng(11);
  const CMatrix a = gaussian_matrix(2, 2, rng);
  const CMatrix b = gaussian_matrix(3, 3, rng);
  const CMatrix joint = kron(a, b);
  const CMatrix left = partial_trace(joint, {2, 3}, {0});
  const CMatrix right = partial_trace(joint, {2, 3}, {1});
  CHECK(mat_diff(left, b.trace() * a) < 1e-12);
  CHECK(mat_diff(right, a.trace() * b) < 1e-12);
}

TEST_CASE("vectorize carries the 1/sqrt(d) normalization and inverts exactly") {
  Rng rng(5);
  const CMatrix a = gaussian_matrix(3, 3, rng);
  const CVector v = vectorize(a);
  double nrm2 = 0.0;
  for (const auto& z : v) nrm2 += std::norm(z);
  CHECK(std::abs(std::sqrt(nrm2) - frobenius(a) / std::sqrt(3.0)) < 1e-12);
  CHECK(mat_diff(unvectorize(v, 3), a) < 1e-14);
  // Identity vectorizes to the normalized maximally entangled vector.
  const CVector vi = vectorize(CMatrix::identity(2));
  CHECK(std::abs(vi[0] - Complex(1.0 / std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(vi[1]) < 1e-15);
  CHECK(std::abs(vi[2]) < 1e-15);
  CHECK(std::abs(vi[3] - Complex(1.0 / std::sqrt(2.0))) < 1e-15);
}

TEST_CASE("reshuffle turns Kronecker products into rank-one blocks") {
  Rng rng(7);
  const BipartiteSplit split(1, 2);
  const CMatrix a = gaussian_matrix(2, 2, rng);
  const CMatrix b = gaussian_matrix(4, 4, rng);
  const CMatrix r = reshuffle(kron(a, b), split);
  CHECK(r.rows() == 4);
  CHECK(r.cols() == 16);
  // Row-stacked a against row-stacked b, scaled by 1/sqrt(d_A d_B).
  const double scale = 1.0 / std::sqrt(8.0);
  for (std::size_t ia = 0; ia < 2; ++ia) {
    for (std::size_t ja = 0; ja < 2; ++ja) {
      for (std::size_t ib = 0; ib < 4; ++ib) {
        for (std::size_t jb = 0; jb < 4; ++jb) {
          const Complex want = a(ia, ja) * b(ib, jb) * scale;
          CHECK(std::abs(r(ia * 2 + ja, ib * 4 + jb) - want) < 1e-13);
        }
      }
    }
  }
  CHECK(mat_diff(unreshuffle(r, split), kron(a, b)) < 1e-14);
}

TEST_CASE("hermitian_eig solves a known 2x2 and orders descending") {
  const EigResult eig = hermitian_eig(pauli_x());
  REQUIRE(eig.values.size() == 2);
  CHECK(std::abs(eig.values[0] - 1.0) < 1e-14);
  CHECK(std::abs(eig.values[1] + 1.0) < 1e-14);
  // Gauge: largest component real positive.
  CHECK(eig.vectors(0, 0).real() > 0.0);
  CHECK(std::abs(eig.vectors(0, 0) - eig.vectors(1, 0)) < 1e-14);
}

TEST_CASE("hermitian_eig reconstructs random Hermitian matrices") {
  Rng rng(23);
  for (std::size_t dim : {2, 3, 5, 8}) {
    const CMatrix h = gaussian_hermitian(dim, rng);
    const EigResult eig = hermitian_eig(h);
    CMatrix recon(dim, dim);
    for (std::size_t k = 0; k < dim; ++k) {
      CVector col(dim);
      for (std::size_t i = 0; i < dim; ++i) col[i] = eig.vectors(i, k);
      recon += Complex(eig.values[k]) * CMatrix::outer(col, col);
    }
    CHECK(mat_diff(recon, h) < 1e-12);
    CHECK(unitarity_defect(eig.vectors) < 1e-12);
    for (std::size_t k = 1; k < dim; ++k) CHECK(eig.values[k - 1] >= eig.values[k]);
  }
}

TEST_CASE("hermitian_eig flags fully degenerate spectra as one cluster") {
  const EigResult eig = hermitian_eig(CMatrix::identity(4));
  REQUIRE(eig.clusters.size() == 1);
  CHECK(eig.clusters[0].first == 0);
  CHECK(eig.clusters[0].second == 3);
}

TEST_CASE("svd reconstructs and orders on random rectangular matrices") {
  Rng rng(31);
  for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{4, 4},
                            {3, 7},
                            {7, 3},
                            {4, 16}}) {
    const CMatrix m = gaussian_matrix(rows, cols, rng);
    const SvdResult res = svd(m);
    const std::size_t small = std::min(rows, cols);
    REQUIRE(res.sigma.size() == small);
    for (std::size_t k = 1; k < small; ++k) {
      CHECK(res.sigma[k - 1] >= res.sigma[k]);
      CHECK(res.sigma[k] >= 0.0);
    }
    CMatrix recon(rows, cols);
    for (std::size_t k = 0; k < small; ++k) {
      for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
          recon(i, j) += res.sigma[k] * res.u(i, k) * std::conj(res.v(j, k));
        }
      }
    }
    CHECK(mat_diff(recon, m) < 1e-11);
    CHECK(isometry_defect(res.u) < 1e-11);
    CHECK(isometry_defect(res.v) < 1e-11);
  }
}

TEST_CASE("svd handles rank-deficient input with high relative accuracy") {
  // Rank-one outer product; the remaining singular values must be ~0.
  CVector x = {1.0, 2.0, Complex(0.0, 1.0)};
  CVector y = {Complex(0.5, -0.5), 1.0, 0.0};
  const CMatrix m = CMatrix::outer(x, y);
  const SvdResult res = svd(m);
  CHECK(res.sigma[0] > 1.0);
  CHECK(res.sigma[1] < 1e-13);
  CHECK(res.sigma[2] < 1e-13);
  CHECK(isometry_defect(res.u) < 1e-12);
  CHECK(isometry_defect(res.v) < 1e-12);
}

TEST_CASE("nearest_density_matrix projects the spectrum onto the simplex") {
  // Frozen by hand: eigenvalues (0.6, 0.6, -0.2) shift to (0.5, 0.5, 0).
  CMatrix h(3, 3);
  h(0, 0) = 0.6;
  h(1, 1) = 0.6;
  h(2, 2) = -0.2;
  const CMatrix rho = nearest_density_matrix(h);
  CHECK(std::abs(rho(0, 0) - Complex(0.5)) < 1e-12);
  CHECK(std::abs(rho(1, 1) - Complex(0.5)) < 1e-12);
  CHECK(std::abs(rho(2, 2)) < 1e-12);
}

TEST_CASE("nearest_density_matrix leaves valid states untouched") {
  CMatrix rho(2, 2);
  rho(0, 0) = 0.75;
  rho(1, 1) = 0.25;
  rho(0, 1) = Complex(0.1, 0.2);
  rho(1, 0) = Complex(0.1, -0.2);
  CHECK(mat_diff(nearest_density_matrix(rho), rho) < 1e-12);
}

TEST_CASE("nearest_density_matrix output is Hermitian, PSD, trace one") {
  Rng rng(41);
  const CMatrix noisy = gaussian_hermitian(4, rng);
  const CMatrix rho = nearest_density_matrix(noisy);
  CHECK(is_hermitian(rho, 1e-12));
  CHECK(std::abs(rho.trace() - Complex(1.0)) < 1e-12);
  const EigResult eig = hermitian_eig(rho);
  for (double v : eig.values) CHECK(v > -1e-12);
}

TEST_CASE("matrix norms agree on a diagonal example") {
  CMatrix m(2, 2);
  m(0, 0) = 3.0;
  m(1, 1) = -4.0;
  CHECK(std::abs(frobenius(m) - 5.0) < 1e-12);
  CHECK(std::abs(spectral(m) - 4.0) < 1e-12);
  CHECK(std::abs(trace_norm(m) - 7.0) < 1e-12);
}

TEST_CASE("fix_phase_gauge makes the dominant entry real positive") {
  CMatrix m(2, 2);
  m(0, 1) = Complex(0.0, 2.0);  // dominant, phase pi/2
  m(1, 0) = Complex(0.3, 0.0);
  const double phase = fix_phase_gauge(m);
  CHECK(std::abs(phase - std::acos(-1.0) / 2.0) < 1e-12);
  CHECK(std::abs(m(0, 1) - Complex(2.0)) < 1e-12);
  CHECK(std::abs(m(1, 0) - Complex(0.0, -0.3)) < 1e-12);
}

TEST_CASE("cluster_ranges finds degenerate runs and skips singletons") {
  const auto clusters = cluster_ranges({1.0, 0.5, 0.5, 0.2}, 1e-8);
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].first == 1);
  CHECK(clusters[0].second == 2);
  CHECK(cluster_ranges({1.0, 0.5}, 1e-8).empty());
}

TEST_CASE("unitarity_defect separates unitaries from the rest") {
  Rng rng(47);
  CHECK(unitarity_defect(haar_unitary(4, rng)) < 1e-12);
  CHECK(unitarity_defect(Complex(2.0) * CMatrix::identity(2)) > 1.0);
}

TEST_CASE("rng streams are deterministic and children are decoupled") {
  Rng a(123), b(123);
  for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng parent(9);
  Rng c0 = parent.child(0);
  Rng c1 = parent.child(1);
  CHECK(c0.next_u64() != c1.next_u64());
  // Re-derived children replay.
  Rng c0_again = parent.child(0);
  c0 = parent.child(0);
  CHECK(c0.next_u64() == c0_again.next_u64());
}

TEST_CASE("binomial sampling hits the expected fraction at a fixed seed") {
  Rng rng(2024);
  const double frac =
      static_cast<double>(rng.binomial(100000, 0.25)) / 100000.0;
  CHECK(std::abs(frac - 0.25) < 0.01);
}

TEST_CASE("haar_state and gaussian_hermitian are normalized as documented") {
  Rng rng(77);
  const CVector psi = haar_state(8, rng);
  double nrm2 = 0.0;
  for (const auto& z : psi) nrm2 += std::norm(z);
  CHECK(std::abs(nrm2 - 1.0) < 1e-12);
  const CMatrix h = gaussian_hermitian(5, rng);
  CHECK(is_hermitian(h, 1e-14));
  CHECK(std::abs(frobenius(h) - 1.0) < 1e-12);
}

TEST_CASE("argmax_abs breaks ties toward the first row-major index") {
  CMatrix m(2, 2);
  m(0, 1) = Complex(0.0, 1.0);
  m(1, 0) = Complex(1.0, 0.0);
  CHECK(m.argmax_abs() == 1);
}
