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

// Operational transition probability between pure states: the acceptance
// probability of psi under the extremal test that accepts phi with
// certainty. Two routes: the rank-1 closed form and a constrained search
// over all effects E with E phi = phi, 0 <= E <= I.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bornlab/linalg.hpp"

namespace bornlab {

enum class TauMethod { closed_form, optimized };

inline std::string_view to_string(TauMethod m) {
  return m == TauMethod::closed_form ? "closed_form" : "optimized";
}

struct TransitionResult {
  double value = 0.0;  // clamped to [0, 1]
  TauMethod method = TauMethod::closed_form;
  int iterations = 0;
  double residual = 0.0;  // max constraint violation of the returned effect
};

/// Which extremum of <psi|E|psi> over {E : E phi = phi, 0 <= E <= I}.
/// The infimum is the operational transition probability; the supremum is
/// identically 1 (attained by E = I) and is available only for comparison.
enum class Extremum { infimum, supremum };

struct OptimizerConfig {
  double tolerance = 1e-6;
  int max_iters = 5000;
  Index max_dim = 16;
  Extremum extremum = Extremum::infimum;
};

/// Raised by tau_optimized when it runs out of iterations; carries the best
/// iterate so callers can still report it.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, TransitionResult best)
      : std::runtime_error(what), best_(best) {}
  const TransitionResult& best() const { return best_; }

 private:
  TransitionResult best_;
};

namespace detail {
inline double clamp_probability(double v) { return std::clamp(v, 0.0, 1.0); }
}  // namespace detail

inline TransitionResult tau_closed(const StateVector& psi, const StateVector& phi) {
  detail::require_same_dim(psi.dim(), phi.dim(), "tau_closed");
  return {detail::clamp_probability(std::norm(inner(phi, psi))), TauMethod::closed_form, 0, 0.0};
}

/// |phi><phi|, the minimal effect with e(phi) = 1.
inline Effect tau_extremal_effect(const StateVector& phi) { return Effect(phi.projector()); }

/// Affine extension to mixed states: tr(rho |phi><phi|).
inline double tau_mixed(const DensityMatrix& rho, const StateVector& phi) {
  detail::require_same_dim(rho.dim(), phi.dim(), "tau_mixed");
  return detail::clamp_probability(tau_extremal_effect(phi)(rho));
}

namespace detail {

/// Clip the spectrum of a Hermitian matrix to [0, 1].
inline CMatrix project_unit_box(const CMatrix& f) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (f + f.adjoint()));
  const Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0).cwiseMin(1.0);
  return es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
}

inline double effect_residual(const CMatrix& e, const StateVector& phi) {
  const CVector& v = phi.amplitudes();
  double r = (e * v - v).cwiseAbs().maxCoeff();
  const Eigen::VectorXd ev = hermitian_eigenvalues(e);
  r = std::max(r, -ev.minCoeff());
  r = std::max(r, ev.maxCoeff() - 1.0);
  return std::max(r, hermiticity_defect(e));
}

}  // namespace detail

/// Projected gradient search over E = |phi><phi| + Q F Q^dagger, where the
/// columns of Q span phi's orthogonal complement and F is Hermitian with
/// spectrum in [0, 1]. Starts from F = I/2 and steps against the normalized
/// gradient Q^dag psi psi^dag Q with Armijo backtracking. Stops once the
/// projected gradient step and the objective change are below tolerance.
inline TransitionResult tau_optimized(const StateVector& psi, const StateVector& phi,
                                      const OptimizerConfig& config = {}) {
  detail::require_same_dim(psi.dim(), phi.dim(), "tau_optimized");
  const Index d = phi.dim();
  if (d > config.max_dim) {
    throw std::invalid_argument("tau_optimized: dim " + std::to_string(d) + " exceeds max_dim " +
                                std::to_string(config.max_dim));
  }
  const double sign = config.extremum == Extremum::infimum ? 1.0 : -1.0;

  Eigen::HouseholderQR<CMatrix> qr(CMatrix(phi.amplitudes()));
  const CMatrix full_q = qr.householderQ();
  const CMatrix q = full_q.rightCols(d - 1);
  const CMatrix anchor = phi.projector();
  const CVector& v = psi.amplitudes();

  auto assemble = [&](const CMatrix& f) -> CMatrix { return anchor + q * f * q.adjoint(); };
  auto objective = [&](const CMatrix& f) { return (v.adjoint() * assemble(f) * v)(0, 0).real(); };

  const CVector b = q.adjoint() * v;
  const CMatrix grad = sign * (b * b.adjoint());
  // The objective is linear in F, so the gradient is measured in units of its
  // spectral norm |b|^2; otherwise nearly-aligned psi would crawl.
  const double grad_norm = b.squaredNorm();
  const CMatrix unit_grad = grad_norm > 0.0 ? CMatrix(grad / grad_norm) : CMatrix(grad);

  CMatrix f = 0.5 * CMatrix::Identity(d - 1, d - 1);
  double value = objective(f);
  int iter = 0;
  bool converged = d == 1 || grad_norm == 0.0;
  while (!converged && iter < config.max_iters) {
    ++iter;
    double step = 1.0;
    CMatrix next;
    double next_value = value;
    for (int halvings = 0; halvings < 60; ++halvings) {
      next = detail::project_unit_box(f - step * unit_grad);
      next_value = objective(next);
      const double decrease = sign * (value - next_value);
      const double predicted = (grad.adjoint() * (f - next)).trace().real();
      if (decrease >= 0.5 * predicted - 1e-15) break;
      step *= 0.5;
    }
    const double change = std::abs(next_value - value);
    f = next;
    value = next_value;
    const double stationarity = max_abs(f - detail::project_unit_box(f - unit_grad));
    converged = stationarity <= config.tolerance && change <= config.tolerance;
  }

  const CMatrix e = assemble(f);
  TransitionResult result{detail::clamp_probability(value), TauMethod::optimized, iter,
                          detail::effect_residual(e, phi)};
  if (!converged) {
    throw NonConvergence("tau_optimized: no convergence after " + std::to_string(iter) + " iterations",
                         result);
  }
  return result;
}

/// |tau(psi, phi) + tau(psi, phi_perp) - 1| for a qubit.
inline double complementarity_check(const StateVector& psi, const StateVector& phi) {
  if (psi.dim() != 2 || phi.dim() != 2) throw DimensionError("complementarity_check: qubits only");
  CVector perp(2);
  perp << -std::conj(phi[1]), std::conj(phi[0]);
  const StateVector phi_perp(perp);
  return std::abs(tau_closed(psi, phi).value + tau_closed(psi, phi_perp).value - 1.0);
}

}  // namespace bornlab
