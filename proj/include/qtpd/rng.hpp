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

#ifndef QTPD_RNG_HPP
#define QTPD_RNG_HPP

#include <cstdint>

#include "qtpd/cmatrix.hpp"

namespace qtpd {

/// Deterministic xoshiro256++ generator with splittable streams.
///
/// Every stochastic routine in the library takes an explicit generator (or a
/// seed from which one is built), so identical seeds give bit-identical
/// results across runs.  Sub-streams are derived as
///   child(key) = Rng(splitmix64(seed ^ (key * 0x9e3779b97f4a7c15)))
/// which keeps independent parts of a simulation (e.g. per-Pauli-string shot
/// noise) decoupled from each other's draw counts.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  /// Uniform double in [0, 1).
  double uniform();
  /// Standard normal via Box-Muller (second value cached).
  double gaussian();
  /// Number of successes in `n` Bernoulli(p) trials, drawn one by one so the
  /// result depends only on the stream position, not on any library's
  /// binomial algorithm.
  std::uint64_t binomial(std::uint64_t n, double p);

  std::uint64_t seed() const { return seed_; }
  Rng child(std::uint64_t key) const;

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t s_[4] = {0, 0, 0, 0};
  bool have_cached_gaussian_ = false;
  double cached_gaussian_ = 0.0;
};

/// State drawn from the unitarily invariant measure: i.i.d. complex Gaussian
/// amplitudes, normalized.
CVector haar_state(std::size_t dim, Rng& rng);

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the R
/// diagonal phases fixed to be real positive.
CMatrix haar_unitary(std::size_t dim, Rng& rng);

/// Gaussian complex matrix (Ginibre ensemble), unnormalized.
CMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng);

/// Random Hermitian matrix with unit Frobenius norm.
CMatrix gaussian_hermitian(std::size_t dim, Rng& rng);

}  // namespace qtpd

#endif  // QTPD_RNG_HPP
