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

#include "qtpd/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qtpd {

namespace {

constexpr double kNullBranchTol = 1e-14;
constexpr double kUnitarityTol = 1e-9;

}  // namespace

StateVector::StateVector(std::vector<RegisterBlock> layout, CVector amplitudes)
    : layout_(std::move(layout)), amp_(std::move(amplitudes)) {
  for (const auto& b : layout_) {
    if (b.qubits == 0) throw std::invalid_argument("StateVector: empty register block");
    n_qubits_ += b.qubits;
  }
  if (amp_.size() != (std::size_t{1} << n_qubits_)) {
    throw std::invalid_argument("StateVector: amplitude count does not match layout");
  }
}

StateVector StateVector::zero_state(std::vector<RegisterBlock> layout) {
  std::size_t n = 0;
  for (const auto& b : layout) n += b.qubits;
  CVector amp(std::size_t{1} << n, 0.0);
  amp[0] = 1.0;
  return StateVector(std::move(layout), std::move(amp));
}

std::pair<std::size_t, std::size_t> StateVector::block_span(
    const std::vector<std::string>& names) const {
  if (names.empty()) throw std::invalid_argument("block_span: no blocks named");
  std::size_t first_block = layout_.size();
  for (std::size_t i = 0; i < layout_.size(); ++i) {
    if (layout_[i].name == names.front()) {
      first_block = i;
      break;
    }
  }
  if (first_block == layout_.size()) {
    throw std::invalid_argument("block_span: unknown block " + names.front());
  }
  std::size_t start = 0;
  for (std::size_t i = 0; i < first_block; ++i) start += layout_[i].qubits;
  std::size_t width = 0;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::size_t bi = first_block + i;
    if (bi >= layout_.size() || layout_[bi].name != names[i]) {
      throw std::invalid_argument("block_span: blocks not consecutive in layout");
    }
    width += layout_[bi].qubits;
  }
  return {start, width};
}

double StateVector::norm() const {
  double n2 = 0.0;
  for (const auto& z : amp_) n2 += std::norm(z);
  return std::sqrt(n2);
}

StateVector bell_state(std::size_t n) {
  if (n == 0) throw std::invalid_argument("bell_state: need at least one qubit");
  const std::size_t d = std::size_t{1} << n;
  CVector amp(d * d, 0.0);
  const double a = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < d; ++i) amp[i * d + i] = a;
  return StateVector({{"ref", n}, {"out", n}}, std::move(amp));
}

std::vector<RegisterBlock> ChoiLayout::blocks() const {
  return {{"A_ref", split.n_a},
          {"A_out", split.n_a},
          {"B_ref", split.n_b},
          {"B_out", split.n_b}};
}

StateVector choi_state(const CMatrix& u, const BipartiteSplit& split) {
  const std::size_t da = split.d_a();
  const std::size_t db = split.d_b();
  if (!u.is_square() || u.rows() != da * db) {
    throw std::invalid_argument("choi_state: matrix does not match split");
  }
  if (unitarity_defect(u) > kUnitarityTol) {
    throw std::invalid_argument("choi_state: matrix is not unitary");
  }
  const double inv = 1.0 / std::sqrt(static_cast<double>(da * db));
  CVector amp(da * da * db * db);
  for (std::size_t ia = 0; ia < da; ++ia) {
    for (std::size_t ja = 0; ja < da; ++ja) {
      for (std::size_t ib = 0; ib < db; ++ib) {
        for (std::size_t jb = 0; jb < db; ++jb) {
          amp[((ia * da + ja) * db + ib) * db + jb] =
              u(ja * db + jb, ia * db + ib) * inv;
        }
      }
    }
  }
  return StateVector(ChoiLayout{split}.blocks(), std::move(amp));
}

namespace {

/// Applies `op` (not necessarily unitary) to the bit field of width w
/// starting `t` bits above the least significant end... Concretely the state
/// index decomposes as idx = hi * 2^{w+t} + mid * 2^t + lo with `mid` the
/// block the operator acts on.
void apply_to_field(CVector& amp, const CMatrix& op, std::size_t w, std::size_t t) {
  const std::size_t block_dim = std::size_t{1} << w;
  const std::size_t lo_dim = std::size_t{1} << t;
  const std::size_t hi_dim = amp.size() / (block_dim * lo_dim);
  CVector in(block_dim), out(block_dim);
  for (std::size_t hi = 0; hi < hi_dim; ++hi) {
    for (std::size_t lo = 0; lo < lo_dim; ++lo) {
      const std::size_t base = hi * block_dim * lo_dim + lo;
      for (std::size_t mid = 0; mid < block_dim; ++mid) {
        in[mid] = amp[base + mid * lo_dim];
      }
      for (std::size_t r = 0; r < block_dim; ++r) {
        Complex acc = 0.0;
        for (std::size_t c = 0; c < block_dim; ++c) acc += op(r, c) * in[c];
        out[r] = acc;
      }
      for (std::size_t mid = 0; mid < block_dim; ++mid) {
        amp[base + mid * lo_dim] = out[mid];
      }
    }
  }
}

}  // namespace

void apply_block_unitary(StateVector& state, const CMatrix& u,
                         const std::vector<std::string>& blocks) {
  const auto [start, width] = state.block_span(blocks);
  if (!u.is_square() || u.rows() != (std::size_t{1} << width)) {
    throw std::invalid_argument("apply_block_unitary: matrix does not match block width");
  }
  if (unitarity_defect(u) > kUnitarityTol) {
    throw std::invalid_argument("apply_block_unitary: matrix is not unitary");
  }
  const std::size_t trailing = state.n_qubits() - start - width;
  apply_to_field(state.amplitudes(), u, width, trailing);
}

MeasurementOutcome measure_projector(const StateVector& state, const CMatrix& p,
                                     const std::vector<std::string>& blocks) {
  const auto [start, width] = state.block_span(blocks);
  if (!p.is_square() || p.rows() != (std::size_t{1} << width)) {
    throw std::invalid_argument("measure_projector: matrix does not match block width");
  }
  // Projector sanity: Hermitian and idempotent.
  if (!is_hermitian(p, 1e-8)) {
    throw std::invalid_argument("measure_projector: matrix is not Hermitian");
  }
  if (frobenius(p * p - p) > 1e-8) {
    throw std::invalid_argument("measure_projector: matrix is not idempotent");
  }

  StateVector post = state;
  const std::size_t trailing = state.n_qubits() - start - width;
  apply_to_field(post.amplitudes(), p, width, trailing);

  MeasurementOutcome outcome;
  const double nrm = post.norm();
  outcome.probability = nrm * nrm;
  if (outcome.probability < kNullBranchTol) {
    outcome.null_branch = true;
    outcome.probability = 0.0;
    return outcome;
  }
  const double inv = 1.0 / nrm;
  for (auto& z : post.amplitudes()) z *= inv;
  outcome.post_state = std::move(post);
  return outcome;
}

CMatrix reduced_density(const StateVector& state, const std::vector<std::size_t>& qubits) {
  const std::size_t n = state.n_qubits();
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (qubits[i] >= n || (i > 0 && qubits[i] <= qubits[i - 1])) {
      throw std::invalid_argument("reduced_density: qubit list invalid");
    }
  }
  const std::size_t k = qubits.size();
  const std::size_t kept_dim = std::size_t{1} << k;
  const std::size_t env_dim = std::size_t{1} << (n - k);

  std::vector<std::size_t> env;
  for (std::size_t q = 0; q < n; ++q) {
    if (std::find(qubits.begin(), qubits.end(), q) == qubits.end()) env.push_back(q);
  }
  // Big-endian: qubit q contributes bit (n-1-q).
  auto bit_of = [n](std::size_t q) { return std::size_t{1} << (n - 1 - q); };

  std::vector<std::size_t> kept_mask(kept_dim, 0);
  for (std::size_t i = 0; i < kept_dim; ++i) {
    std::size_t idx = 0;
    for (std::size_t b = 0; b < k; ++b) {
      if (i & (std::size_t{1} << (k - 1 - b))) idx |= bit_of(qubits[b]);
    }
    kept_mask[i] = idx;
  }
  std::vector<std::size_t> env_mask(env_dim, 0);
  for (std::size_t e = 0; e < env_dim; ++e) {
    std::size_t idx = 0;
    for (std::size_t b = 0; b < env.size(); ++b) {
      if (e & (std::size_t{1} << (env.size() - 1 - b))) idx |= bit_of(env[b]);
    }
    env_mask[e] = idx;
  }

  const CVector& amp = state.amplitudes();
  CMatrix rho(kept_dim, kept_dim);
  for (std::size_t r = 0; r < kept_dim; ++r) {
    for (std::size_t c = 0; c < kept_dim; ++c) {
      Complex acc = 0.0;
      for (std::size_t e = 0; e < env_dim; ++e) {
        acc += amp[kept_mask[r] | env_mask[e]] * std::conj(amp[kept_mask[c] | env_mask[e]]);
      }
      rho(r, c) = acc;
    }
  }
  return rho;
}

PauliString::PauliString(std::string s) : letters(std::move(s)) {
  if (letters.empty()) throw std::invalid_argument("PauliString: empty string");
  for (char ch : letters) {
    if (ch != 'I' && ch != 'X' && ch != 'Y' && ch != 'Z') {
      throw std::invalid_argument("PauliString: letters must be I, X, Y or Z");
    }
  }
}

PauliString PauliString::from_index(std::size_t index, std::size_t n) {
  static const char kLetters[4] = {'I', 'X', 'Y', 'Z'};
  std::string s(n, 'I');
  for (std::size_t q = n; q-- > 0;) {
    s[q] = kLetters[index % 4];
    index /= 4;
  }
  return PauliString(std::move(s));
}

CMatrix PauliString::matrix() const {
  static const Complex kI(0.0, 1.0);
  CMatrix out = CMatrix::identity(1);
  for (char ch : letters) {
    CMatrix p(2, 2);
    switch (ch) {
      case 'I': p(0, 0) = 1.0; p(1, 1) = 1.0; break;
      case 'X': p(0, 1) = 1.0; p(1, 0) = 1.0; break;
      case 'Y': p(0, 1) = -kI; p(1, 0) = kI; break;
      case 'Z': p(0, 0) = 1.0; p(1, 1) = -1.0; break;
    }
    out = kron(out, p);
  }
  return out;
}

double pauli_expectation(const CMatrix& rho, const PauliString& p) {
  const std::size_t n = p.n_qubits();
  const std::size_t d = std::size_t{1} << n;
  if (!rho.is_square() || rho.rows() != d) {
    throw std::invalid_argument("pauli_expectation: dimension mismatch");
  }
  // Per row i the string has a single nonzero column j(i): X and Y flip the
  // qubit's bit; the entry is a product of {1, +-1, +-i} factors.
  Complex acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    std::size_t j = i;
    Complex entry = 1.0;
    for (std::size_t q = 0; q < n; ++q) {
      const std::size_t bit = std::size_t{1} << (n - 1 - q);
      const bool set = (i & bit) != 0;
      switch (p.letters[q]) {
        case 'I':
          break;
        case 'X':
          j ^= bit;
          break;
        case 'Y':
          j ^= bit;
          entry *= set ? Complex(0.0, 1.0) : Complex(0.0, -1.0);
          break;
        case 'Z':
          if (set) entry = -entry;
          break;
      }
    }
    acc += entry * rho(j, i);
  }
  return acc.real();
}

double sampled_expectation(const CMatrix& rho, const PauliString& p,
                           std::size_t shots, Rng& rng) {
  if (shots == 0) throw std::invalid_argument("sampled_expectation: shots must be positive");
  const double exact = pauli_expectation(rho, p);
  const double p_plus = std::clamp(0.5 * (1.0 + exact), 0.0, 1.0);
  const std::uint64_t k = rng.binomial(shots, p_plus);
  return (2.0 * static_cast<double>(k) - static_cast<double>(shots)) /
         static_cast<double>(shots);
}

CMatrix exact_evolution(const CMatrix& h, double t) {
  if (t == 0.0) return CMatrix::identity(h.rows());
  return exact_evolution(hermitian_eig(h), t);
}

CMatrix exact_evolution(const EigResult& h_eig, double t) {
  const std::size_t n = h_eig.vectors.rows();
  if (t == 0.0) return CMatrix::identity(n);
  CMatrix u(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex phase = std::polar(1.0, -h_eig.values[k] * t);
    for (std::size_t r = 0; r < n; ++r) {
      const Complex vrk = h_eig.vectors(r, k) * phase;
      for (std::size_t c = 0; c < n; ++c) {
        u(r, c) += vrk * std::conj(h_eig.vectors(c, k));
      }
    }
  }
  return u;
}

}  // namespace qtpd
