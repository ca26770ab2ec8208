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

#include "bornlab/transition.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "bornlab/random.hpp"
#include "oracles.hpp"

namespace bornlab {
namespace {

StateVector qubit(double a, double b) {
  CVector v(2);
  v << a, b;
  return StateVector::normalized(v);
}

TEST(TauClosed, Examples) {
  const StateVector zero = StateVector::basis(2, 0);
  const StateVector one = StateVector::basis(2, 1);
  EXPECT_DOUBLE_EQ(tau_closed(zero, zero).value, 1.0);
  EXPECT_DOUBLE_EQ(tau_closed(one, zero).value, 0.0);
  EXPECT_NEAR(tau_closed(qubit(1, 1), zero).value, 0.5, 1e-15);
  EXPECT_EQ(tau_closed(zero, zero).method, TauMethod::closed_form);
  EXPECT_EQ(tau_closed(zero, zero).iterations, 0);
}

TEST(TauClosed, DimensionMismatch) {
  EXPECT_THROW(tau_closed(StateVector::basis(2, 0), StateVector::basis(3, 0)), DimensionError);
}

TEST(TauClosed, MatchesLoopOverlapAndIsSymmetric) {
  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    const Index d = 2 + i % 7;
    const StateVector psi = haar_random_state(d, rng);
    const StateVector phi = haar_random_state(d, rng);
    const double t = tau_closed(psi, phi).value;
    EXPECT_NEAR(t, oracle::overlap_squared(phi.amplitudes(), psi.amplitudes()), 1e-14);
    EXPECT_NEAR(t, tau_closed(phi, psi).value, 1e-14);
    EXPECT_GE(t, 0.0);
    EXPECT_LE(t, 1.0);
  }
}

TEST(TauExtremalEffect, Examples) {
  const Effect e0 = tau_extremal_effect(StateVector::basis(2, 0));
  CMatrix diag = CMatrix::Zero(2, 2);
  diag(0, 0) = 1.0;
  EXPECT_LT(max_abs(e0.matrix() - diag), 1e-15);

  const Effect ep = tau_extremal_effect(qubit(1, 1));
  EXPECT_LT(max_abs(ep.matrix() - CMatrix::Constant(2, 2, 0.5)), 1e-15);

  const StateVector phi = haar_random_state(5, 3);
  const Effect e = tau_extremal_effect(phi);
  EXPECT_NEAR(e.matrix().trace().real(), 1.0, 1e-14);
  EXPECT_LT((e.matrix() * phi.amplitudes() - phi.amplitudes()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(TauOptimized, Examples) {
  const StateVector zero = StateVector::basis(2, 0);
  const auto same = tau_optimized(zero, zero);
  EXPECT_NEAR(same.value, 1.0, 1e-6);
  EXPECT_EQ(same.method, TauMethod::optimized);
  EXPECT_NEAR(tau_optimized(qubit(1, 1), zero).value, 0.5, 1e-6);
}

TEST(TauOptimized, AgreesWithClosedFormOnRandomPairs) {
  Rng rng(23);
  for (Index d = 2; d <= 8; ++d) {
    for (int i = 0; i < 40; ++i) {
      const StateVector psi = haar_random_state(d, rng);
      const StateVector phi = haar_random_state(d, rng);
      const auto r = tau_optimized(psi, phi);
      EXPECT_NEAR(r.value, tau_closed(psi, phi).value, 1e-6) << "d=" << d;
      EXPECT_LE(r.residual, 1e-9);
    }
  }
}

TEST(TauOptimized, NearlyAlignedStatesConverge) {
  const StateVector phi = StateVector::basis(3, 0);
  CVector v(3);
  v << 1.0, 1e-4, 0.0;
  const StateVector psi = StateVector::normalized(v);
  EXPECT_NEAR(tau_optimized(psi, phi).value, tau_closed(psi, phi).value, 1e-6);
}

TEST(TauOptimized, OneDimensionalIsTrivial) {
  const StateVector s = StateVector::basis(1, 0);
  const auto r = tau_optimized(s, s);
  EXPECT_DOUBLE_EQ(r.value, 1.0);
  EXPECT_EQ(r.iterations, 0);
}

TEST(TauOptimized, SupremumIsIdenticallyOne) {
  OptimizerConfig cfg;
  cfg.extremum = Extremum::supremum;
  Rng rng(2);
  for (int i = 0; i < 10; ++i) {
    const StateVector psi = haar_random_state(4, rng);
    const StateVector phi = haar_random_state(4, rng);
    EXPECT_NEAR(tau_optimized(psi, phi, cfg).value, 1.0, 1e-6);
  }
}

TEST(TauOptimized, RejectsOversizedProblems) {
  OptimizerConfig cfg;
  cfg.max_dim = 4;
  const StateVector s = StateVector::basis(5, 0);
  EXPECT_THROW(tau_optimized(s, s, cfg), std::invalid_argument);
}

TEST(TauOptimized, ReportsNonConvergenceWithBestIterate) {
  OptimizerConfig cfg;
  cfg.max_iters = 1;
  cfg.tolerance = 1e-300;
  const StateVector phi = StateVector::basis(3, 0);
  const StateVector psi = haar_random_state(3, 8);
  try {
    tau_optimized(psi, phi, cfg);
    FAIL() << "expected NonConvergence";
  } catch (const NonConvergence& e) {
    EXPECT_EQ(e.best().iterations, 1);
    EXPECT_GE(e.best().value, 0.0);
    EXPECT_LE(e.best().value, 1.0);
  }
}

TEST(Complementarity, Examples) {
  const StateVector zero = StateVector::basis(2, 0);
  Rng rng(29);
  for (int i = 0; i < 100; ++i) EXPECT_LE(complementarity_check(haar_random_state(2, rng), zero), 1e-10);
  const StateVector psi = haar_random_state(2, 5);
  EXPECT_LE(complementarity_check(psi, psi), 1e-10);
  EXPECT_NEAR(tau_closed(psi, psi).value, 1.0, 1e-12);
  EXPECT_THROW(complementarity_check(StateVector::basis(3, 0), StateVector::basis(3, 1)), DimensionError);
}

TEST(TauMixed, AffineOnTwoLevelFaces) {
  Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    const StateVector psi1 = haar_random_state(2 + i % 3, rng);
    const StateVector psi2 = haar_random_state(psi1.dim(), rng);
    const StateVector phi = haar_random_state(psi1.dim(), rng);
    const double lambda = rng.uniform();
    const DensityMatrix rho(lambda * psi1.projector() + (1 - lambda) * psi2.projector());
    EXPECT_NEAR(tau_mixed(rho, phi),
                lambda * tau_closed(psi1, phi).value + (1 - lambda) * tau_closed(psi2, phi).value, 1e-10);
  }
}

}  // namespace
}  // namespace bornlab
