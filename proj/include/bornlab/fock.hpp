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

// Truncated Fock spaces as a stand-in for infinite dimensions: coherent
// states, their analytic overlaps, and convergence of tau and of countable
// mixtures as the truncation grows.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bornlab/ensemble.hpp"
#include "bornlab/phi_rule.hpp"
#include "bornlab/transition.hpp"

namespace bornlab {

/// Coherent amplitude alpha on Fock levels 0..truncation_n. The constructor
/// enforces |alpha|^2 <= N / 4 so the discarded Poisson tail stays tiny.
class CoherentSpec {
 public:
  CoherentSpec(Complex alpha, int truncation_n) : alpha_(alpha), n_(truncation_n) {
    if (n_ < 1) throw std::invalid_argument("CoherentSpec: truncation_N must be positive");
    if (std::norm(alpha_) > static_cast<double>(n_) / 4.0) {
      throw std::invalid_argument("CoherentSpec: |alpha|^2 exceeds truncation_N / 4");
    }
  }
  Complex alpha() const { return alpha_; }
  int truncation_n() const { return n_; }

 private:
  Complex alpha_;
  int n_;
};

struct TruncatedCoherent {
  StateVector state;  // renormalized
  /// 1 - sum_{n <= N} |c_n|^2 before renormalization.
  double tail_deficit;
};

/// c_n = exp(-|alpha|^2 / 2) alpha^n / sqrt(n!) for n <= N, built from the
/// ratio c_{n+1} = c_n alpha / sqrt(n + 1), then renormalized. No guardrail on
/// alpha versus N; see coherent_vector for the checked entry point.
inline TruncatedCoherent truncated_coherent(Complex alpha, int truncation_n) {
  if (truncation_n < 0) throw std::invalid_argument("truncated_coherent: N must be >= 0");
  CVector c(truncation_n + 1);
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n < truncation_n; ++n) c(n + 1) = c(n) * alpha / std::sqrt(static_cast<double>(n + 1));
  const double kept = c.squaredNorm();
  return {StateVector::normalized(c), std::max(0.0, 1.0 - kept)};
}

inline TruncatedCoherent coherent_vector(const CoherentSpec& spec) {
  return truncated_coherent(spec.alpha(), spec.truncation_n());
}

/// |<beta|alpha>|^2 = exp(-|alpha - beta|^2)
inline double tau_coherent_analytic(Complex alpha, Complex beta) { return std::exp(-std::norm(alpha - beta)); }

struct TruncationError {
  int n;
  double tau_truncated;
  double error;
};

inline std::vector<TruncationError> truncation_convergence(Complex alpha, Complex beta, const std::vector<int>& n_list) {
  if (!std::is_sorted(n_list.begin(), n_list.end())) {
    throw std::invalid_argument("truncation_convergence: N_list must be ascending");
  }
  const double exact = tau_coherent_analytic(alpha, beta);
  std::vector<TruncationError> out;
  out.reserve(n_list.size());
  for (int n : n_list) {
    const double t = tau_closed(truncated_coherent(alpha, n).state, truncated_coherent(beta, n).state).value;
    out.push_back({n, t, std::abs(t - exact)});
  }
  return out;
}

struct AffinityDeviation {
  int n;
  double value;
  double deviation;
  double tail_bound;
};

inline constexpr int kReferencePadding = 50;

/// Ensemble probability of the thermal ensemble truncated at each N, compared
/// with a reference truncated at max(N_list) + padding. phi is zero-padded
/// into the common Fock dimension.
inline std::vector<AffinityDeviation> sigma_affinity_convergence(const PhiRule& rule, double r, const StateVector& phi,
                                                                 const std::vector<int>& n_list,
                                                                 int padding = kReferencePadding) {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("sigma_affinity_convergence: r must be in (0, 1)");
  if (n_list.empty() || !std::is_sorted(n_list.begin(), n_list.end()) || n_list.front() < 0) {
    throw std::invalid_argument("sigma_affinity_convergence: N_list must be nonempty, ascending and nonnegative");
  }
  if (phi.dim() < n_list.back() + 1) {
    throw std::invalid_argument("sigma_affinity_convergence: phi must live in a truncation >= max(N_list)");
  }
  const int n_ref = n_list.back() + padding;
  const Index dim = std::max<Index>(phi.dim(), n_ref + 1);
  CVector padded = CVector::Zero(dim);
  padded.head(phi.dim()) = phi.amplitudes();
  const StateVector target(padded);

  const double reference = prob_ensemble(rule, geometric_fock_ensemble(r, n_ref, dim), target).value;
  std::vector<AffinityDeviation> out;
  out.reserve(n_list.size());
  for (int n : n_list) {
    const EnsembleProbability p = prob_ensemble(rule, geometric_fock_ensemble(r, n, dim), target);
    out.push_back({n, p.value, std::abs(p.value - reference), p.truncation_tail_bound});
  }
  return out;
}

}  // namespace bornlab
