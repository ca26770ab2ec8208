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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bornlab/linalg.hpp"

namespace bornlab {

struct EnsembleMember {
  double weight;
  StateVector state;
};

enum class EnsembleKind { finite, truncated_countable };

/// Weighted pure states. A truncated-countable ensemble is the head of a
/// countable mixture; the weight of the omitted tail is carried explicitly.
class Ensemble {
 public:
  static constexpr double kWeightTolerance = 1e-10;

  static Ensemble finite(std::vector<EnsembleMember> members) {
    return Ensemble(std::move(members), EnsembleKind::finite, 0.0);
  }

  static Ensemble truncated_countable(std::vector<EnsembleMember> members, double tail_weight) {
    return Ensemble(std::move(members), EnsembleKind::truncated_countable, tail_weight);
  }

  EnsembleKind kind() const { return kind_; }
  double tail_weight() const { return tail_; }
  Index dim() const { return members_.front().state.dim(); }
  std::size_t size() const { return members_.size(); }
  const std::vector<EnsembleMember>& members() const { return members_; }
  const EnsembleMember& operator[](std::size_t i) const { return members_[i]; }

 private:
  Ensemble(std::vector<EnsembleMember> members, EnsembleKind kind, double tail)
      : members_(std::move(members)), kind_(kind), tail_(tail) {
    if (members_.empty()) throw InvariantError("Ensemble: needs at least one member");
    if (!(tail_ >= 0.0)) throw InvariantError("Ensemble: tail weight must be nonnegative");
    double total = tail_;
    for (const auto& m : members_) {
      if (!(m.weight >= 0.0)) throw InvariantError("Ensemble: negative weight");
      detail::require_same_dim(dim(), m.state.dim(), "Ensemble");
      total += m.weight;
    }
    if (std::abs(total - 1.0) > kWeightTolerance) {
      throw InvariantError("Ensemble: weights plus tail sum to " + std::to_string(total));
    }
  }

  std::vector<EnsembleMember> members_;
  EnsembleKind kind_;
  double tail_;
};

/// sum_i w_i |psi_i><psi_i| over the explicit members, together with the tail
/// weight it is missing. Never renormalized.
struct PartialBarycenter {
  CMatrix matrix;
  double tail_weight;
};

inline PartialBarycenter partial_barycenter(const Ensemble& ensemble) {
  CMatrix sum = CMatrix::Zero(ensemble.dim(), ensemble.dim());
  for (const auto& m : ensemble.members()) sum += m.weight * m.state.projector();
  return {std::move(sum), ensemble.tail_weight()};
}

/// Average state of the ensemble. Truncated ensembles are accepted only when
/// their tail is negligible; use partial_barycenter otherwise.
inline DensityMatrix barycenter(const Ensemble& ensemble) {
  if (ensemble.tail_weight() > Ensemble::kWeightTolerance) {
    throw InvariantError("barycenter: ensemble has tail weight " + std::to_string(ensemble.tail_weight()) +
                         "; use partial_barycenter");
  }
  return DensityMatrix(partial_barycenter(ensemble).matrix);
}

/// Truncated thermal ensemble {((1-r) r^n, |n>)}_{n <= N} in a Fock space of
/// dimension max(dim, N + 1), with tail weight r^(N+1).
inline Ensemble geometric_fock_ensemble(double r, int truncation_n, Index dim = 0) {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("geometric_fock_ensemble: r must be in (0, 1)");
  if (truncation_n < 0) throw std::invalid_argument("geometric_fock_ensemble: N must be >= 0");
  const Index d = std::max<Index>(dim, truncation_n + 1);
  std::vector<EnsembleMember> members;
  members.reserve(static_cast<std::size_t>(truncation_n) + 1);
  double w = 1.0 - r;
  for (int n = 0; n <= truncation_n; ++n) {
    members.push_back({w, StateVector::basis(d, n)});
    w *= r;
  }
  return Ensemble::truncated_countable(std::move(members), std::pow(r, truncation_n + 1));
}

}  // namespace bornlab
