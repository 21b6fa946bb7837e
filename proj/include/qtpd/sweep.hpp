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

#ifndef QTPD_SWEEP_HPP_
#define QTPD_SWEEP_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qtpd/cmatrix.hpp"
#include "qtpd/heisenberg.hpp"

namespace qtpd {

enum class PipelineMode { oracle, choi_exact, choi_tomographic, sequential };

struct TimeGrid {
  double start = 0.0;
  double end = 0.0;
  std::size_t points = 0;  // >= 2, endpoints included
};

/// One time-sweep experiment.  `a_qubits` names the subsystem in the model's
/// own numbering; internally the qubits are relabeled so A occupies the
/// leading block (see relabel_permutation).  `initial_state` is one character
/// per qubit from {0, 1, +, -} in the relabeled A-first order, matching how
/// product inputs are usually written (A part first, then environment).
struct ExperimentConfig {
  SpinModel model;
  std::vector<std::size_t> a_qubits;
  TimeGrid grid;
  std::string initial_state;
  PipelineMode pipeline = PipelineMode::oracle;
  std::size_t shots = 0;      // 0 = exact expectations where applicable
  std::uint64_t seed = 0;
  bool entangling_powers = false;
};

/// Per-grid-point results.  All reported values are normalized to [0, 1];
/// the time column carries the dimensionless J_x * t.
struct SweepRow {
  double t = 0.0;
  double s_a_norm = 0.0;
  double occupation = 0.0;
  double s_state_norm = 0.0;
  std::optional<double> e_a;
  std::optional<double> e_m;
  std::optional<CMatrix> sigma_a;  // kept for verification against direct simulation
  std::string error;               // nonempty when this row's pipeline failed
};

/// Involution that maps the chosen A qubits onto positions 0..n_a-1: built
/// from disjoint transpositions pairing the out-of-block A qubits with the
/// non-A qubits inside the block, so applying it twice is the identity.
std::vector<std::size_t> relabel_permutation(std::size_t n,
                                             const std::vector<std::size_t>& a_qubits);

/// Runs the configured sweep.  The Hamiltonian is diagonalized once and every
/// grid point evolves from the same eigensystem; per-row failures are caught
/// and recorded in SweepRow::error while the sweep continues.  Deterministic
/// for a fixed config and seed (row seeds derive from seed + row index).
std::vector<SweepRow> run_sweep(const ExperimentConfig& config);

/// CSV emission: header `t,S_A_norm,occupation,S_state_norm[,e_A,e_m]`,
/// 12 significant digits, '\n' line ends.  Failed rows leave their value
/// fields empty and append an ERROR:<message> column.
void write_csv(const std::vector<SweepRow>& rows, bool entangling_powers,
               std::ostream& out);

}  // namespace qtpd

#endif  // QTPD_SWEEP_HPP_
