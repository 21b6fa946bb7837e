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

#include "qtpd/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "qtpd/analysis.hpp"
#include "qtpd/linalg.hpp"
#include "qtpd/qtpd.hpp"
#include "qtpd/statevector.hpp"
#include "qtpd/tpd.hpp"

namespace qtpd {

namespace {

CVector single_qubit_state(char c) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (c) {
    case '0':
      return {1.0, 0.0};
    case '1':
      return {0.0, 1.0};
    case '+':
      return {r, r};
    case '-':
      return {r, -r};
    default:
      throw std::invalid_argument("initial state characters must be 0, 1, + or -");
  }
}

/// Big-endian product state of the characters [first, last) of `spec`.
CVector product_state(const std::string& spec, std::size_t first, std::size_t last) {
  CVector amps{1.0};
  for (std::size_t q = first; q < last; ++q) {
    const CVector factor = single_qubit_state(spec[q]);
    CVector next(amps.size() * 2);
    for (std::size_t v = 0; v < amps.size(); ++v) {
      next[2 * v] = amps[v] * factor[0];
      next[2 * v + 1] = amps[v] * factor[1];
    }
    amps = std::move(next);
  }
  return amps;
}

std::string sanitize(const std::string& message) {
  std::string clean = message;
  for (char& c : clean) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return clean;
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::vector<std::size_t> relabel_permutation(std::size_t n,
                                             const std::vector<std::size_t>& a_qubits) {
  if (a_qubits.empty()) throw std::invalid_argument("relabel: empty A set");
  std::vector<bool> in_a(n, false);
  for (std::size_t q : a_qubits) {
    if (q >= n) throw std::invalid_argument("relabel: qubit out of range");
    if (in_a[q]) throw std::invalid_argument("relabel: duplicate A qubit");
    in_a[q] = true;
  }
  const std::size_t n_a = a_qubits.size();

  // Pair the A qubits sitting outside the leading block with the non-A
  // qubits inside it; the disjoint transpositions make the map involutory.
  std::vector<std::size_t> outside, inside;
  for (std::size_t q = 0; q < n; ++q) {
    if (q < n_a && !in_a[q]) inside.push_back(q);
    if (q >= n_a && in_a[q]) outside.push_back(q);
  }
  std::vector<std::size_t> perm(n);
  for (std::size_t q = 0; q < n; ++q) perm[q] = q;
  for (std::size_t i = 0; i < outside.size(); ++i) {
    std::swap(perm[outside[i]], perm[inside[i]]);
  }
  return perm;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config) {
  const std::size_t n = config.model.n_qubits;
  const std::size_t n_a = config.a_qubits.size();
  const BipartiteSplit split(n_a, n - n_a);
  if (config.grid.points < 2) {
    throw std::invalid_argument("run_sweep: need at least 2 grid points");
  }
  if (config.initial_state.size() != n) {
    throw std::invalid_argument("run_sweep: initial state length mismatch");
  }
  if ((config.pipeline == PipelineMode::choi_tomographic) && config.shots == 0) {
    throw std::invalid_argument("run_sweep: tomographic pipeline needs shots");
  }

  const std::vector<std::size_t> perm = relabel_permutation(n, config.a_qubits);
  SpinModel relabeled = config.model;
  for (auto& [i, j] : relabeled.edges) {
    i = perm[i];
    j = perm[j];
  }
  const EigResult h_eig = hermitian_eig(build_hamiltonian(relabeled));

  const CVector psi_a = product_state(config.initial_state, 0, n_a);
  const CVector psi_b = product_state(config.initial_state, n_a, n);

  std::vector<SweepRow> rows;
  rows.reserve(config.grid.points);
  for (std::size_t p = 0; p < config.grid.points; ++p) {
    const double t = config.grid.start +
                     (config.grid.end - config.grid.start) *
                         static_cast<double>(p) /
                         static_cast<double>(config.grid.points - 1);
    SweepRow row;
    row.t = config.model.j_x * t;
    try {
      const CMatrix u = exact_evolution(h_eig, t);

      std::vector<double> s;
      CMatrix sigma;
      if (config.pipeline == PipelineMode::oracle) {
        const TensorProductDecomposition tpd = classical_tpd(u, split);
        s = tpd.s;
        const OpenSurrogate surrogate =
            open_surrogate(tpd.s, tpd.a_ops, tpd.b_ops, psi_b, split);
        sigma = evolve(surrogate, psi_a);
      } else {
        ChoiReducedState snapshot;
        switch (config.pipeline) {
          case PipelineMode::choi_exact:
            snapshot = choi_reduced_exact(u, split);
            break;
          case PipelineMode::choi_tomographic:
            snapshot = tomographic_snapshot(u, split, config.shots,
                                            config.seed + p);
            break;
          default:
            snapshot = sequential_snapshot(u, split, config.shots,
                                           config.seed + p);
            break;
        }
        const ExtractedFactors factors =
            extract_factors(snapshot, default_rank_threshold(snapshot));
        if (factors.s.empty()) {
          throw std::runtime_error("no factors above threshold");
        }
        s = factors.s;
        const DistillationResult distilled = distill(u, factors, psi_b);
        const OpenSurrogate surrogate = open_surrogate(factors, distilled);
        sigma = evolve(surrogate, psi_a);
      }

      // Thresholding can shave sampled spectra below unit mass; renormalize
      // the kept weights before taking the entropy.
      double mass = 0.0;
      for (double x : s) mass += x * x;
      if (mass <= 0.0) throw std::runtime_error("degenerate coefficient spectrum");
      for (double& x : s) x /= std::sqrt(mass);
      row.s_a_norm = nonlocality_normalized(s, split.d_a());

      const double tr = sigma.trace().real();
      if (tr > 0.0) sigma *= Complex(1.0 / tr);
      const StateObservables obs = observables(sigma, n_a);
      row.occupation = obs.occupation;
      row.s_state_norm = obs.entropy_norm;
      row.sigma_a = std::move(sigma);

      if (config.entangling_powers) {
        row.e_a = entangling_power_swap(u, split);
        row.e_m = entangling_power_mean(u, split);
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_csv(const std::vector<SweepRow>& rows, bool entangling_powers,
               std::ostream& out) {
  out << "t,S_A_norm,occupation,S_state_norm";
  if (entangling_powers) out << ",e_A,e_m";
  out << "\n";
  for (const SweepRow& row : rows) {
    out << format_value(row.t);
    if (row.error.empty()) {
      out << ',' << format_value(row.s_a_norm) << ',' << format_value(row.occupation)
          << ',' << format_value(row.s_state_norm);
      if (entangling_powers) {
        out << ',' << format_value(row.e_a.value()) << ','
            << format_value(row.e_m.value());
      }
    } else {
      out << ",,,";
      if (entangling_powers) out << ",,";
      out << ",ERROR:" << sanitize(row.error);
    }
    out << "\n";
  }
}

}  // namespace qtpd
