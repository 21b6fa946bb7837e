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

#ifndef QTPD_HEISENBERG_HPP_
#define QTPD_HEISENBERG_HPP_

#include <cstddef>
#include <utility>
#include <vector>

#include "qtpd/cmatrix.hpp"

namespace qtpd {

/// Heisenberg-type spin model on an explicit edge list,
///   H = -sum_edges (J_x X_i X_j + J_y Y_i Y_j + J_z Z_i Z_z).
/// The isotropic case J_x = J_y = J_z conserves total magnetization.
struct SpinModel {
  std::size_t n_qubits = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  double j_x = 0.0;
  double j_y = 0.0;
  double j_z = 0.0;
};

/// Dense Hamiltonian of the model; capped at 12 qubits.  Throws
/// invalid_argument on oversize models, bad edges, or duplicate edges.
CMatrix build_hamiltonian(const SpinModel& model);

/// Closed forms for the single-edge model: the evolution operator decomposes
/// into Pauli pairs with complex coefficients
///   g_0 = c_x c_y c_z + i s_x s_y s_z   (c/s = cos/sin of J_i t),
/// and cyclically for g_x, g_y, g_z.  The reduced dynamics of qubit 1 with
/// input |10> stays diagonal:
///   rho_1 = |g_0 - g_z|^2 |1><1| + |g_x + g_y|^2 |0><0|
///         = cos^2((J_x+J_y) t) |1><1| + sin^2((J_x+J_y) t) |0><0|.
struct AnalyticTwoQubit {
  Complex g0, gx, gy, gz;
  std::vector<double> s;   // sorted |g| values, zeros dropped
  CMatrix rho1;            // 2x2 state of qubit 1 at time t, |10> input
  double z_expectation = 0.0;  // <Z> on rho1
  double entropy = 0.0;        // von Neumann entropy of rho1, natural log
  double e1 = 0.0;             // entangling power of qubit 1 vs qubit 2
};

AnalyticTwoQubit analytic_two_qubit(double j_x, double j_y, double j_z, double t);

}  // namespace qtpd

#endif  // QTPD_HEISENBERG_HPP_
