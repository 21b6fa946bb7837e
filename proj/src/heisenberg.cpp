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

#include "qtpd/heisenberg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace qtpd {

CMatrix build_hamiltonian(const SpinModel& model) {
  if (model.n_qubits == 0 || model.n_qubits > 12) {
    throw std::invalid_argument("build_hamiltonian: need 1..12 qubits");
  }
  for (std::size_t e = 0; e < model.edges.size(); ++e) {
    const auto& [i, j] = model.edges[e];
    if (i >= model.n_qubits || j >= model.n_qubits || i == j) {
      throw std::invalid_argument("build_hamiltonian: bad edge");
    }
    for (std::size_t f = 0; f < e; ++f) {
      const auto& [a, b] = model.edges[f];
      if ((a == i && b == j) || (a == j && b == i)) {
        throw std::invalid_argument("build_hamiltonian: duplicate edge");
      }
    }
  }

  const std::size_t dim = std::size_t{1} << model.n_qubits;
  CMatrix h(dim, dim);
  for (const auto& [i, j] : model.edges) {
    const std::size_t bi = std::size_t{1} << (model.n_qubits - 1 - i);
    const std::size_t bj = std::size_t{1} << (model.n_qubits - 1 - j);
    const std::size_t mask = bi | bj;
    for (std::size_t v = 0; v < dim; ++v) {
      // s = parity of the two bits: (-1)^s is the ZZ eigenvalue and also the
      // sign YY picks up relative to -XX.
      const bool odd = ((v & bi) != 0) != ((v & bj) != 0);
      const double sign = odd ? -1.0 : 1.0;
      h(v ^ mask, v) += -model.j_x + model.j_y * sign;
      h(v, v) += -model.j_z * sign;
    }
  }
  return h;
}

AnalyticTwoQubit analytic_two_qubit(double j_x, double j_y, double j_z, double t) {
  const double cx = std::cos(j_x * t), sx = std::sin(j_x * t);
  const double cy = std::cos(j_y * t), sy = std::sin(j_y * t);
  const double cz = std::cos(j_z * t), sz = std::sin(j_z * t);

  AnalyticTwoQubit out;
  out.g0 = Complex(cx * cy * cz, sx * sy * sz);
  out.gx = Complex(cx * sy * sz, sx * cy * cz);
  out.gy = Complex(cy * sx * sz, sy * cx * cz);
  out.gz = Complex(cz * sy * sx, sz * cy * cx);

  const Complex g[4] = {out.g0, out.gx, out.gy, out.gz};
  for (const Complex& gk : g) {
    const double mag = std::abs(gk);
    if (mag > 1e-12) out.s.push_back(mag);
  }
  std::sort(out.s.begin(), out.s.end(), std::greater<>());

  out.rho1 = CMatrix(2, 2);
  out.rho1(0, 0) = std::norm(out.gx + out.gy);
  out.rho1(1, 1) = std::norm(out.g0 - out.gz);
  out.z_expectation = out.rho1(0, 0).real() - out.rho1(1, 1).real();

  auto plogp = [](double p) { return p > 1e-300 ? -p * std::log(p) : 0.0; };
  out.entropy = plogp(out.rho1(0, 0).real()) + plogp(out.rho1(1, 1).real());

  // e_1 = (S_1(U) + S_1(US)) / log 4 - 1, where the coefficients of US are
  // the four half-sums (g_0 +- g_x +- g_y +- g_z)/2 with an even number of
  // minus signs.
  double s1_u = 0.0;
  for (const Complex& gk : g) s1_u += plogp(std::norm(gk));
  const Complex half_sums[4] = {
      out.g0 + out.gx + out.gy + out.gz,
      out.g0 + out.gx - out.gy - out.gz,
      out.g0 - out.gx + out.gy - out.gz,
      out.g0 - out.gx - out.gy + out.gz,
  };
  double s1_us = 0.0;
  for (const Complex& h : half_sums) s1_us += plogp(std::norm(h) / 4.0);
  out.e1 = (s1_u + s1_us) / std::log(4.0) - 1.0;
  return out;
}

}  // namespace qtpd
