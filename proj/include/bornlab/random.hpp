// Copyright 2026 The bornlab Authors
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

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>
#include <vector>

#include "bornlab/linalg.hpp"

namespace bornlab {

/// Seedable generator with bit-reproducible output on every conforming
/// standard library: mt19937_64 and seed_seq are fully specified, and the
/// real-valued draws below are computed here rather than through
/// std::*_distribution (whose algorithms are implementation-defined).
class Rng {
 public:
  static constexpr std::string_view kName = "mt19937_64+seed_seq/bornlab-v1";

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  Complex complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline StateVector haar_random_state(Index dim, Rng& rng) {
  if (dim < 1) throw InvariantError("haar_random_state: dim must be >= 1");
  CVector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = rng.complex_normal();
  return StateVector::normalized(v);
}

inline StateVector haar_random_state(Index dim, std::uint64_t seed) {
  Rng rng(seed);
  return haar_random_state(dim, rng);
}

/// Ginibre-induced random density matrix of the given rank.
inline DensityMatrix random_density_matrix(Index dim, Index rank, Rng& rng) {
  CMatrix g(dim, rank);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < rank; ++j) g(i, j) = rng.complex_normal();
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

/// Random POVM with the given number of outcomes: M_i = S^{-1/2} G_i S^{-1/2}
/// for random positive G_i and S = sum_i G_i.
inline Povm random_povm(Index dim, std::size_t outcomes, Rng& rng) {
  std::vector<CMatrix> g;
  CMatrix s = CMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < outcomes; ++i) {
    CMatrix a(dim, dim);
    for (Index r = 0; r < dim; ++r)
      for (Index c = 0; c < dim; ++c) a(r, c) = rng.complex_normal();
    g.push_back(a * a.adjoint());
    s += g.back();
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(s);
  const CMatrix inv_sqrt =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
  std::vector<Effect> effects;
  for (const auto& gi : g) effects.emplace_back(inv_sqrt * gi * inv_sqrt);
  return Povm(std::move(effects));
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix with
/// the phases of R's diagonal divided out.
inline CMatrix haar_random_unitary(Index dim, Rng& rng) {
  CMatrix a(dim, dim);
  for (Index r = 0; r < dim; ++r)
    for (Index c = 0; c < dim; ++c) a(r, c) = rng.complex_normal();
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < dim; ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

}  // namespace bornlab
