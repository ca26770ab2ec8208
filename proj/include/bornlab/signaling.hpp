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

// The two-arm steering experiment. Alice either splits Bob's marginal omega
// into {(lambda, psi1), (1 - lambda, psi2)} or leaves it undecomposed; Bob
// then measures |phi><phi|. Under P = Phi o tau the two arms differ by the
// Jensen gap of Phi, while the state-level marginal is the same in both.

#pragma once

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "bornlab/ensemble.hpp"
#include "bornlab/phi_rule.hpp"
#include "bornlab/random.hpp"
#include "bornlab/steering.hpp"
#include "bornlab/transition.hpp"

namespace bornlab {

struct SteeringScenario {
  double p1;
  double p2;
  double lambda;
  StateVector psi1;
  StateVector psi2;
  StateVector phi;
  DensityMatrix omega;
  BipartiteState purification;
  Ensemble split_ensemble;
  Povm povm_split;
  Povm povm_direct;
  /// p1 == p2: both members coincide, omega is pure and the split arm uses {I}.
  bool degenerate;
};

namespace detail {

inline void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(name) + " must be in [0, 1]");
}

/// sqrt(p)|0> + sqrt(1 - p)|1>
inline StateVector qubit_with_overlap(double p) {
  CVector v(2);
  v << std::sqrt(p), std::sqrt(1.0 - p);
  return StateVector::normalized(v);
}

}  // namespace detail

inline SteeringScenario build_two_level_scenario(double p1, double p2, double lambda) {
  detail::require_probability(p1, "p1");
  detail::require_probability(p2, "p2");
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must be in (0, 1)");

  StateVector psi1 = detail::qubit_with_overlap(p1);
  StateVector psi2 = detail::qubit_with_overlap(p2);
  StateVector phi = StateVector::basis(2, 0);
  Ensemble split = Ensemble::finite({{lambda, psi1}, {1.0 - lambda, psi2}});
  DensityMatrix omega = barycenter(split);
  BipartiteState purification = purify(omega);
  const bool degenerate = std::abs(p1 - p2) <= 1e-12;
  Povm povm_split = degenerate ? Povm::trivial(purification.dim_a()) : hjw_povm(purification, split);
  Povm povm_direct = Povm::trivial(purification.dim_a());
  return {p1,
          p2,
          lambda,
          std::move(psi1),
          std::move(psi2),
          std::move(phi),
          std::move(omega),
          std::move(purification),
          std::move(split),
          std::move(povm_split),
          std::move(povm_direct),
          degenerate};
}

/// lambda Phi(p1) + (1 - lambda) Phi(p2) - Phi(lambda p1 + (1 - lambda) p2)
inline double jensen_gap(const PhiRule& rule, double p1, double p2, double lambda) {
  detail::require_probability(p1, "p1");
  detail::require_probability(p2, "p2");
  detail::require_probability(lambda, "lambda");
  const double mean = lambda * p1 + (1.0 - lambda) * p2;
  return lambda * phi_eval(rule, p1) + (1.0 - lambda) * phi_eval(rule, p2) - phi_eval(rule, mean);
}

struct ExperimentRecord {
  double prob_split;
  double prob_direct;
  double gap;
  double analytic_gap;
  double pipeline_discrepancy;
};

/// Probability that Bob's |phi><phi| test fires, averaged over what Alice's
/// measurement steers. Pure conditional states go through prob_pure; mixed
/// ones (the undecomposed arm) through the affine extension tr(rho e_phi).
inline double steered_acceptance(const PhiRule& rule, const BipartiteState& state, const Povm& alice,
                                 const StateVector& phi) {
  double total = 0.0;
  for (const auto& outcome : steer(state, alice)) {
    if (!outcome.conditional_state) continue;
    const DensityMatrix& rho = *outcome.conditional_state;
    const double p = rho.purity() >= 1.0 - tol::kReconstruction
                         ? prob_pure(rule, dominant_pure_state(rho), phi)
                         : phi_eval(rule, tau_mixed(rho, phi));
    total += outcome.probability * p;
  }
  return total;
}

inline ExperimentRecord run_steering_experiment(const PhiRule& rule, const SteeringScenario& s) {
  ExperimentRecord r{};
  r.prob_split = steered_acceptance(rule, s.purification, s.povm_split, s.phi);
  // The direct arm always sees omega itself, pure or not, through the mixed-state tau.
  double direct = 0.0;
  for (const auto& outcome : steer(s.purification, s.povm_direct)) {
    if (outcome.conditional_state) {
      direct += outcome.probability * phi_eval(rule, tau_mixed(*outcome.conditional_state, s.phi));
    }
  }
  r.prob_direct = direct;
  r.gap = r.prob_split - r.prob_direct;
  r.analytic_gap = jensen_gap(rule, s.p1, s.p2, s.lambda);
  r.pipeline_discrepancy = std::abs(r.gap - r.analytic_gap);
  return r;
}

struct DetectabilityReport {
  std::uint64_t seed = 0;
  std::int64_t n_samples = 0;
  double alpha = 0.05;
  double prob_split = 0.0;
  double prob_direct = 0.0;
  std::int64_t successes_split = 0;
  std::int64_t successes_direct = 0;
  double freq_split = 0.0;
  double freq_direct = 0.0;
  double z_statistic = 0.0;
  double p_value = 1.0;
  /// Normal approximation not trustworthy (n < 2 or fewer than 5 pooled
  /// successes or failures); reject is then always false.
  bool insufficient_sample = false;
  bool reject = false;
  double analytic_gap = 0.0;
  /// n* per arm for a two-sided level-alpha test with power 1 - beta; +inf when the gap is 0.
  double required_samples = 0.0;
};

inline constexpr std::uint64_t kSplitArmStream = 1;
inline constexpr std::uint64_t kDirectArmStream = 2;

/// (z_{1-alpha/2} + z_{1-beta})^2 * 2 pbar (1 - pbar) / gap^2
inline double required_sample_size(double prob_split, double prob_direct, double alpha = 0.05, double beta = 0.05) {
  const double gap = prob_split - prob_direct;
  if (gap == 0.0) return std::numeric_limits<double>::infinity();
  const boost::math::normal standard;
  const double za = boost::math::quantile(standard, 1.0 - alpha / 2.0);
  const double zb = boost::math::quantile(standard, 1.0 - beta);
  const double pbar = 0.5 * (prob_split + prob_direct);
  return (za + zb) * (za + zb) * 2.0 * pbar * (1.0 - pbar) / (gap * gap);
}

/// Two-proportion z-test (pooled variance) on n Bernoulli draws per arm.
/// Each arm draws from its own stream derived from `seed`.
inline DetectabilityReport detectability(const PhiRule& rule, const SteeringScenario& scenario, std::int64_t n_samples,
                                         std::uint64_t seed, double alpha = 0.05) {
  if (n_samples < 1) throw std::invalid_argument("detectability: n_samples must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("detectability: alpha must be in (0, 1)");
  const ExperimentRecord record = run_steering_experiment(rule, scenario);

  DetectabilityReport r;
  r.seed = seed;
  r.n_samples = n_samples;
  r.alpha = alpha;
  r.prob_split = std::clamp(record.prob_split, 0.0, 1.0);
  r.prob_direct = std::clamp(record.prob_direct, 0.0, 1.0);
  r.analytic_gap = record.analytic_gap;

  Rng split_rng(seed, kSplitArmStream);
  Rng direct_rng(seed, kDirectArmStream);
  for (std::int64_t i = 0; i < n_samples; ++i) {
    r.successes_split += split_rng.bernoulli(r.prob_split) ? 1 : 0;
    r.successes_direct += direct_rng.bernoulli(r.prob_direct) ? 1 : 0;
  }
  const auto n = static_cast<double>(n_samples);
  r.freq_split = static_cast<double>(r.successes_split) / n;
  r.freq_direct = static_cast<double>(r.successes_direct) / n;

  const std::int64_t pooled_success = r.successes_split + r.successes_direct;
  const std::int64_t pooled_failure = 2 * n_samples - pooled_success;
  r.insufficient_sample = n_samples < 2 || pooled_success < 5 || pooled_failure < 5;

  const double pooled = static_cast<double>(pooled_success) / (2.0 * n);
  const double se = std::sqrt(pooled * (1.0 - pooled) * 2.0 / n);
  if (se > 0.0) {
    r.z_statistic = (r.freq_split - r.freq_direct) / se;
    r.p_value = std::erfc(std::abs(r.z_statistic) / std::sqrt(2.0));
  }
  r.reject = !r.insufficient_sample && r.p_value < alpha;
  r.required_samples = required_sample_size(r.prob_split, r.prob_direct, alpha);
  return r;
}

struct DetectionRate {
  std::int64_t repetitions = 0;
  std::int64_t rejections = 0;
  std::int64_t insufficient = 0;
  double rate = 0.0;
};

/// Rejection frequency over repetitions with seeds base_seed, base_seed + 1, ...
inline DetectionRate detection_rate(const PhiRule& rule, const SteeringScenario& scenario, std::int64_t n_samples,
                                    std::int64_t repetitions, std::uint64_t base_seed, double alpha = 0.05) {
  if (repetitions < 1) throw std::invalid_argument("detection_rate: repetitions must be >= 1");
  DetectionRate out;
  out.repetitions = repetitions;
  for (std::int64_t k = 0; k < repetitions; ++k) {
    const auto rep = detectability(rule, scenario, n_samples, base_seed + static_cast<std::uint64_t>(k), alpha);
    out.rejections += rep.reject ? 1 : 0;
    out.insufficient += rep.insufficient_sample ? 1 : 0;
  }
  out.rate = static_cast<double>(out.rejections) / static_cast<double>(repetitions);
  return out;
}

}  // namespace bornlab
