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

#ifndef QTPD_STATEVECTOR_HPP
#define QTPD_STATEVECTOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qtpd/cmatrix.hpp"
#include "qtpd/linalg.hpp"
#include "qtpd/rng.hpp"

namespace qtpd {

/// Named contiguous qubit block inside a register layout.
struct RegisterBlock {
  std::string name;
  std::size_t qubits = 0;
};

/// Dense statevector with big-endian qubit indexing: qubit 0 is the most
/// significant bit of the basis index, and register blocks appear in layout
/// order from most to least significant.
class StateVector {
 public:
  StateVector() = default;
  StateVector(std::vector<RegisterBlock> layout, CVector amplitudes);

  /// |0...0> on the given layout.
  static StateVector zero_state(std::vector<RegisterBlock> layout);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amp_.size(); }
  const CVector& amplitudes() const { return amp_; }
  CVector& amplitudes() { return amp_; }
  const std::vector<RegisterBlock>& layout() const { return layout_; }

  /// First qubit position and width of a run of consecutive layout blocks;
  /// throws if the names are not consecutive in layout order.
  std::pair<std::size_t, std::size_t> block_span(
      const std::vector<std::string>& names) const;

  double norm() const;

 private:
  std::vector<RegisterBlock> layout_;
  CVector amp_;
  std::size_t n_qubits_ = 0;
};

/// Maximally entangled pair of n-qubit registers, layout [ref, out]:
/// 2^{-n/2} sum_i |i>_ref |i>_out.
StateVector bell_state(std::size_t n);

/// Register layout of the doubled-register construction used by the quantum
/// decomposition pipeline: [A_ref, A_out, B_ref, B_out].
struct ChoiLayout {
  BipartiteSplit split;
  std::vector<RegisterBlock> blocks() const;
};

/// Choi state of a unitary on a bipartite system: Bell pairs on (A_ref,A_out)
/// and (B_ref,B_out) with u applied to the two output registers.  Amplitude
/// formula (big-endian composite index [i_A, j_A, i_B, j_B]):
///   amp = u[(j_A, j_B), (i_A, i_B)] / sqrt(d_A d_B).
StateVector choi_state(const CMatrix& u, const BipartiteSplit& split);

/// Applies a unitary to a run of consecutive register blocks.
void apply_block_unitary(StateVector& state, const CMatrix& u,
                         const std::vector<std::string>& blocks);

struct MeasurementOutcome {
  double probability = 0.0;
  StateVector post_state;  // normalized; empty amplitudes on a null branch
  bool null_branch = false;
};

/// Projects onto `p` (acting on the named blocks) and renormalizes.
/// Probability below 1e-14 is reported as a null branch.
MeasurementOutcome measure_projector(const StateVector& state, const CMatrix& p,
                                     const std::vector<std::string>& blocks);

/// Reduced density matrix of a pure state on the given (strictly increasing)
/// qubit positions, built directly from amplitudes.
CMatrix reduced_density(const StateVector& state, const std::vector<std::size_t>& qubits);

/// Tensor-product string over {I, X, Y, Z}, one letter per qubit.
struct PauliString {
  std::string letters;

  explicit PauliString(std::string s);
  std::size_t n_qubits() const { return letters.size(); }
  CMatrix matrix() const;
  /// String at base-4 `index` (digits I=0, X=1, Y=2, Z=3, first qubit is the
  /// most significant digit); index 0 is the all-identity string.
  static PauliString from_index(std::size_t index, std::size_t n);
};

/// Tr(P rho), exploiting that Pauli strings have one nonzero entry per row.
/// The result is real for Hermitian rho; the real part is returned.
double pauli_expectation(const CMatrix& rho, const PauliString& p);

/// Binomial finite-shot estimate of Tr(P rho): the +1 outcome count is drawn
/// from Binomial(shots, (1+<P>)/2) on the given stream.  Deterministic for a
/// fixed seed.
double sampled_expectation(const CMatrix& rho, const PauliString& p,
                           std::size_t shots, Rng& rng);

/// exp(-i h t) via diagonalization of the Hermitian generator.  t == 0
/// returns the exact identity.
CMatrix exact_evolution(const CMatrix& h, double t);

/// Same, but reusing a precomputed eigendecomposition of the generator.
CMatrix exact_evolution(const EigResult& h_eig, double t);

}  // namespace qtpd

#endif  // QTPD_STATEVECTOR_HPP
