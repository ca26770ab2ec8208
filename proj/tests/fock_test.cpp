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

#include "bornlab/fock.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "oracles.hpp"

namespace bornlab {
namespace {

std::vector<Complex> amplitude_grid() {
  std::vector<Complex> g;
  for (int i = -4; i <= 4; ++i)
    for (int j = -4; j <= 4; ++j)
      if (i * i + j * j <= 16) g.emplace_back(0.5 * i, 0.5 * j);
  return g;
}

// With t the larger discarded tail weight, Cauchy-Schwarz on the tails gives
// |tau_N - tau| <= (4t + t^2) / (1 - t)^2.
double truncation_bound(double t) { return (4 * t + t * t) / ((1 - t) * (1 - t)); }

TEST(CoherentSpec, Guardrail) {
  EXPECT_NO_THROW(CoherentSpec(Complex(1, 0), 4));
  EXPECT_THROW(CoherentSpec(Complex(1.01, 0), 4), std::invalid_argument);
  EXPECT_THROW(CoherentSpec(Complex(0, 0), 0), std::invalid_argument);
}

TEST(CoherentVector, Examples) {
  const auto vac = coherent_vector(CoherentSpec(0.0, 10));
  EXPECT_EQ(vac.state[0], Complex(1.0));
  for (Index n = 1; n < vac.state.dim(); ++n) EXPECT_EQ(vac.state[n], Complex(0.0));
  EXPECT_EQ(vac.tail_deficit, 0.0);

  const auto one = coherent_vector(CoherentSpec(1.0, 40));
  EXPECT_LE(one.tail_deficit, 1e-12);
  EXPECT_NEAR(one.state.amplitudes().norm(), 1.0, 1e-12);
}

TEST(CoherentVector, AmplitudesMatchClosedForm) {
  const Complex a(0.7, -1.1);
  const auto tc = truncated_coherent(a, 30);
  double fact = 1.0;
  for (int n = 0; n <= 30; ++n) {
    if (n > 0) fact *= n;
    const Complex expected = std::exp(-0.5 * std::norm(a)) * std::pow(a, n) / std::sqrt(fact);
    EXPECT_NEAR(std::abs(tc.state[n] * std::sqrt(1.0 - tc.tail_deficit) - expected), 0.0, 1e-14) << n;
  }
}

TEST(CoherentVector, DeficitIsPoissonTail) {
  for (double mean : {0.25, 1.0, 4.0})
    for (int n : {3, 8, 20}) {
      const auto tc = truncated_coherent(std::sqrt(mean), n);
      EXPECT_NEAR(tc.tail_deficit, oracle::poisson_tail(mean, n), 1e-14) << mean << " " << n;
    }
}

TEST(CoherentVector, LargeTruncationDoesNotOverflow) {
  const auto tc = truncated_coherent(Complex(3, 4), 400);
  EXPECT_NEAR(tc.state.amplitudes().norm(), 1.0, 1e-12);
  EXPECT_LT(tc.tail_deficit, 1e-12);
}

TEST(TauCoherentAnalytic, Examples) {
  EXPECT_EQ(tau_coherent_analytic(Complex(0.3, 0.2), Complex(0.3, 0.2)), 1.0);
  EXPECT_NEAR(tau_coherent_analytic(0.0, 1.0), 0.367879441171442, 1e-15);
  EXPECT_NEAR(tau_coherent_analytic(0.0, 2.0), 0.0183156388887342, 1e-16);
}

TEST(TruncationConvergence, Examples) {
  EXPECT_LE(truncation_convergence(0.0, 1.0, {40})[0].error, 1e-8);
  for (const auto& e : truncation_convergence(Complex(1, 1), Complex(1, 1), {1, 5, 10, 20, 40})) {
    EXPECT_LE(e.error, 1e-14);
  }
  const auto seq = truncation_convergence(0.0, 2.0, {5, 10, 20, 40});
  for (std::size_t i = 1; i < seq.size(); ++i) EXPECT_LE(seq[i].error, seq[i - 1].error);
  EXPECT_THROW(truncation_convergence(0.0, 1.0, {10, 5}), std::invalid_argument);
}

TEST(TruncationConvergence, GridDecreasesAndObeysTailBound) {
  const auto grid = amplitude_grid();
  for (const Complex& a : grid)
    for (const Complex& b : grid) {
      const auto seq = truncation_convergence(a, b, {5, 10, 20, 40});
      for (std::size_t i = 0; i < seq.size(); ++i) {
        const double t = oracle::poisson_tail(std::max(std::norm(a), std::norm(b)), seq[i].n);
        EXPECT_LE(seq[i].error, truncation_bound(t) + 1e-14);
        if (i > 0) {
          EXPECT_TRUE(seq[i].error < seq[i - 1].error || seq[i].error <= 1e-14);
        }
      }
      EXPECT_LE(seq.back().error, 1e-8);
    }
}

TEST(SigmaAffinity, IdentityOnVacuum) {
  const StateVector vac = StateVector::basis(21, 0);
  const auto out = sigma_affinity_convergence(PhiRule::identity(), 0.5, vac, {0, 5, 10, 20});
  for (const auto& d : out) {
    EXPECT_NEAR(d.value, 0.5, 1e-15);
    EXPECT_DOUBLE_EQ(d.tail_bound, std::pow(0.5, d.n + 1));
    EXPECT_LE(d.deviation, d.tail_bound);
  }
  EXPECT_LE(out.back().deviation, 4.8e-7);
}

TEST(SigmaAffinity, ConvergesToGeometricSeries) {
  // phi = (|0> + |1>) / sqrt 2: identity value is (1 - r)(1 + r) / 2 in the limit.
  CVector v = CVector::Zero(31);
  v(0) = v(1) = 1.0 / std::sqrt(2.0);
  const StateVector phi(v);
  const double r = 0.8;
  const auto out = sigma_affinity_convergence(PhiRule::identity(), r, phi, {1, 10, 30});
  EXPECT_NEAR(out.back().value, (1 - r) * (1 + r) / 2.0, 1e-14);
}

TEST(SigmaAffinity, DeviationWithinTailForAllRules) {
  const std::vector<PhiRule> rules = {PhiRule::identity(), PhiRule::power(2), PhiRule::power(0.5),
                                      PhiRule::piecewise_affine({{0, 0}, {0.5, 0.7}, {1, 1}})};
  const StateVector coh = coherent_vector(CoherentSpec(Complex(1.0, 0.5), 30)).state;
  for (const auto& rule : rules)
    for (double r : {0.3, 0.5, 0.8}) {
      const auto out = sigma_affinity_convergence(rule, r, coh, {0, 2, 5, 10, 20, 30}, 0);
      for (const auto& d : out) EXPECT_LE(d.deviation, d.tail_bound + 1e-15) << rule.id() << " " << r << " " << d.n;
      EXPECT_LE(out.back().deviation, 1e-14);
    }
}

TEST(SigmaAffinity, Preconditions) {
  const StateVector vac = StateVector::basis(5, 0);
  EXPECT_THROW(sigma_affinity_convergence(PhiRule::identity(), 1.0, vac, {1}), std::invalid_argument);
  EXPECT_THROW(sigma_affinity_convergence(PhiRule::identity(), 0.5, vac, {3, 1}), std::invalid_argument);
  EXPECT_THROW(sigma_affinity_convergence(PhiRule::identity(), 0.5, vac, {10}), std::invalid_argument);
}

}  // namespace
}  // namespace bornlab
