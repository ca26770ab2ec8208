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

// Remote preparation of ensembles: given a purification of Bob's marginal,
// build Alice's measurement whose conditional states on B are a chosen
// decomposition of that marginal, and evaluate what each measurement steers.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "bornlab/ensemble.hpp"
#include "bornlab/linalg.hpp"

namespace bornlab {

struct SteeringOutcome {
  std::size_t outcome_index;
  double probability;
  /// Empty when probability < kNullOutcomeProbability.
  std::optional<DensityMatrix> conditional_state;
};

inline constexpr double kNullOutcomeProbability = 1e-12;

/// Eigenvalues of the marginal below this fraction of the largest are
/// treated as zero when determining its support. Singular values of the
/// coefficient matrix are square roots of these, so they are cut at sqrt.
inline constexpr double kSupportCutoff = 1e-10;

/// Alice's POVM realizing `ensemble` on B through `purification`.
///
/// With B = C^T (C the dimA x dimB coefficient matrix) the marginal is
/// omega = B B^dagger and an operator M on A steers B to C^T M^T conj(C).
/// Taking M_i^T = w_i B^+ |psi_i><psi_i| (B^+)^dagger makes outcome i
/// prepare w_i |psi_i><psi_i| whenever psi_i lies in range(B) = supp(omega).
/// For the canonical purification this is w_i omega^{-1/2}|psi_i><psi_i|omega^{-1/2}
/// written in the conjugate eigenbasis. The M_i sum to the projector onto
/// Alice's support; its complement is appended as one extra outcome when
/// omega is rank-deficient.
inline Povm hjw_povm(const BipartiteState& purification, const Ensemble& ensemble) {
  detail::require_same_dim(purification.dim_b(), ensemble.dim(), "hjw_povm");
  const CMatrix b = purification.amplitudes().transpose();
  const CMatrix omega = b * b.adjoint();

  const PartialBarycenter bary = partial_barycenter(ensemble);
  const double mismatch = std::max(max_abs(bary.matrix - omega), bary.tail_weight);
  if (mismatch > tol::kReconstruction) {
    throw SteeringError("hjw_povm: ensemble barycenter differs from the marginal by " + std::to_string(mismatch));
  }

  Eigen::JacobiSVD<CMatrix> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = std::sqrt(kSupportCutoff) * (sv.size() > 0 ? sv(0) : 0.0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;

  const CMatrix u = svd.matrixU().leftCols(rank);
  const CMatrix v = svd.matrixV().leftCols(rank);
  const CMatrix b_pinv = v * sv.head(rank).cwiseInverse().asDiagonal() * u.adjoint();
  const CMatrix support_b = u * u.adjoint();

  std::vector<Effect> effects;
  effects.reserve(ensemble.size() + 1);
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const CVector& psi = ensemble[i].state.amplitudes();
    const double outside = (psi - support_b * psi).norm();
    if (outside > tol::kReconstruction) {
      throw SteeringError("hjw_povm: member " + std::to_string(i) + " lies outside the marginal's support (" +
                          std::to_string(outside) + ")");
    }
    const CVector x = b_pinv * psi;
    effects.emplace_back((ensemble[i].weight * x * x.adjoint()).transpose());
  }

  const Index da = purification.dim_a();
  if (rank < da) {
    const CMatrix kernel = CMatrix::Identity(da, da) - (v * v.adjoint()).transpose();
    effects.emplace_back(kernel);
  }
  return Povm(std::move(effects));
}

inline std::vector<SteeringOutcome> steer(const BipartiteState& state, const Povm& povm_a) {
  detail::require_same_dim(state.dim_a(), povm_a.dim(), "steer");
  std::vector<SteeringOutcome> out;
  out.reserve(povm_a.size());
  for (std::size_t i = 0; i < povm_a.size(); ++i) {
    const CMatrix sigma = conditional_operator_b(state, povm_a[i].matrix());
    const double p = std::max(sigma.trace().real(), 0.0);
    std::optional<DensityMatrix> cond;
    if (p >= kNullOutcomeProbability) cond.emplace(sigma / p);
    out.push_back({i, p, std::move(cond)});
  }
  return out;
}

/// Bob's average state sum_i p_i sigma_i under a given Alice measurement.
inline CMatrix steered_marginal(const BipartiteState& state, const Povm& povm_a) {
  detail::require_same_dim(state.dim_a(), povm_a.dim(), "steered_marginal");
  CMatrix sum = CMatrix::Zero(state.dim_b(), state.dim_b());
  for (const auto& e : povm_a.outcomes()) sum += conditional_operator_b(state, e.matrix());
  return sum;
}

/// Max-norm distance between Bob's averaged states under two choices of
/// Alice's measurement.
inline double verify_marginal_invariance(const BipartiteState& state, const Povm& povm1, const Povm& povm2) {
  return max_abs(steered_marginal(state, povm1) - steered_marginal(state, povm2));
}

}  // namespace bornlab
