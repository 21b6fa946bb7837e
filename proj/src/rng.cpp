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

#include "qtpd/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qtpd {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed) {
  std::uint64_t x = seed;
  for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() {
  // 53 random bits -> [0, 1).
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (have_cached_gaussian_) {
    have_cached_gaussian_ = false;
    return cached_gaussian_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  cached_gaussian_ = r * std::sin(phi);
  have_cached_gaussian_ = true;
  return r * std::cos(phi);
}

std::uint64_t Rng::binomial(std::uint64_t n, double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("binomial: p outside [0,1]");
  std::uint64_t k = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (uniform() < p) ++k;
  }
  return k;
}

Rng Rng::child(std::uint64_t key) const {
  std::uint64_t x = seed_ ^ (key * 0x9e3779b97f4a7c15ULL);
  return Rng(splitmix64(x));
}

CVector haar_state(std::size_t dim, Rng& rng) {
  CVector v(dim);
  double norm2 = 0.0;
  for (auto& z : v) {
    z = Complex(rng.gaussian(), rng.gaussian());
    norm2 += std::norm(z);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& z : v) z *= inv;
  return v;
}

CMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  CMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m(r, c) = Complex(rng.gaussian(), rng.gaussian());
    }
  }
  return m;
}

CMatrix gaussian_hermitian(std::size_t dim, Rng& rng) {
  CMatrix g = gaussian_matrix(dim, dim, rng);
  CMatrix h = g + g.adjoint();
  double norm2 = 0.0;
  for (const auto& z : h.data()) norm2 += std::norm(z);
  h *= Complex(1.0 / std::sqrt(norm2));
  return h;
}

CMatrix haar_unitary(std::size_t dim, Rng& rng) {
  // Gram-Schmidt on Ginibre columns; fixing the induced R diagonal to be real
  // positive makes the distribution exactly Haar.
  CMatrix g = gaussian_matrix(dim, dim, rng);
  CMatrix q(dim, dim);
  for (std::size_t c = 0; c < dim; ++c) {
    CVector col(dim);
    for (std::size_t r = 0; r < dim; ++r) col[r] = g(r, c);
    for (std::size_t prev = 0; prev < c; ++prev) {
      Complex overlap = 0.0;
      for (std::size_t r = 0; r < dim; ++r) {
        overlap += std::conj(q(r, prev)) * col[r];
      }
      for (std::size_t r = 0; r < dim; ++r) col[r] -= overlap * q(r, prev);
    }
    double norm2 = 0.0;
    for (const auto& z : col) norm2 += std::norm(z);
    if (norm2 <= 0.0) throw std::runtime_error("haar_unitary: degenerate sample");
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t r = 0; r < dim; ++r) q(r, c) = col[r] * inv;
  }
  return q;
}

}  // namespace qtpd
