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

// Dense complex linear algebra for finite-dimensional quantum models:
// validated state/effect types, composite systems and purification.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "bornlab/errors.hpp"

namespace bornlab {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

namespace tol {
/// Hermiticity, positivity and normalization checks on construction.
inline constexpr double kValidation = 1e-9;
/// Identities reconstructed through an eigensolver (purification, POVM sums).
inline constexpr double kReconstruction = 1e-8;
}  // namespace tol

/// Largest entrywise modulus; the max-norm used by every tolerance check.
inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_defect(const CMatrix& m) { return max_abs(m - m.adjoint()); }

/// Eigenvalues (ascending) of the Hermitian part of m.
inline Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m) {
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

class StateVector {
 public:
  explicit StateVector(CVector amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() < 1) throw InvariantError("StateVector: dimension must be positive");
    const double n = amps_.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > tol::kValidation) {
      throw InvariantError("StateVector: norm " + std::to_string(n) + " differs from 1");
    }
  }

  /// Normalizes raw (must be nonzero).
  static StateVector normalized(const CVector& raw) {
    const double n = raw.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw InvariantError("StateVector: cannot normalize zero vector");
    return StateVector(raw / n);
  }

  static StateVector basis(Index dim, Index k) {
    if (dim < 1 || k < 0 || k >= dim) throw InvariantError("StateVector::basis: index out of range");
    CVector v = CVector::Zero(dim);
    v(k) = 1.0;
    return StateVector(std::move(v));
  }

  Index dim() const { return amps_.size(); }
  const CVector& amplitudes() const { return amps_; }
  Complex operator[](Index i) const { return amps_(i); }

  CMatrix projector() const { return amps_ * amps_.adjoint(); }

 private:
  CVector amps_;
};

/// <a|b>, conjugate-linear in the first argument.
inline Complex inner(const StateVector& a, const StateVector& b) {
  detail::require_same_dim(a.dim(), b.dim(), "inner");
  return a.amplitudes().dot(b.amplitudes());
}

class DensityMatrix {
 public:
  explicit DensityMatrix(const CMatrix& m) {
    if (m.rows() < 1 || m.rows() != m.cols()) throw InvariantError("DensityMatrix: must be square and nonempty");
    if (hermiticity_defect(m) > tol::kValidation) throw InvariantError("DensityMatrix: not Hermitian");
    mat_ = 0.5 * (m + m.adjoint());
    const Complex tr = mat_.trace();
    if (std::abs(tr - Complex(1.0)) > tol::kValidation) {
      throw InvariantError("DensityMatrix: trace " + std::to_string(tr.real()) + " differs from 1");
    }
    if (hermitian_eigenvalues(mat_).minCoeff() < -tol::kValidation) {
      throw InvariantError("DensityMatrix: negative eigenvalue");
    }
  }

  static DensityMatrix pure(const StateVector& psi) { return DensityMatrix(psi.projector()); }

  static DensityMatrix maximally_mixed(Index dim) {
    return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
  }

  Index dim() const { return mat_.rows(); }
  const CMatrix& matrix() const { return mat_; }

  /// tr(rho^2)
  double purity() const { return (mat_ * mat_).trace().real(); }

 private:
  CMatrix mat_;
};

/// <psi|rho|psi>; equals the usual fidelity when psi is pure.
inline double fidelity(const StateVector& psi, const DensityMatrix& rho) {
  detail::require_same_dim(psi.dim(), rho.dim(), "fidelity");
  return (psi.amplitudes().adjoint() * rho.matrix() * psi.amplitudes())(0, 0).real();
}

/// Top eigenvector of rho; throws unless rho is pure to within purity_tol.
inline StateVector dominant_pure_state(const DensityMatrix& rho, double purity_tol = tol::kReconstruction) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
  const Index top = rho.dim() - 1;
  if (es.eigenvalues()(top) < 1.0 - purity_tol) {
    throw InvariantError("dominant_pure_state: state is not pure (top eigenvalue " +
                         std::to_string(es.eigenvalues()(top)) + ")");
  }
  return StateVector::normalized(es.eigenvectors().col(top));
}

/// Hermitian E with 0 <= E <= I.
class Effect {
 public:
  explicit Effect(const CMatrix& m) {
    if (m.rows() < 1 || m.rows() != m.cols()) throw InvariantError("Effect: must be square and nonempty");
    if (hermiticity_defect(m) > tol::kValidation) throw InvariantError("Effect: not Hermitian");
    mat_ = 0.5 * (m + m.adjoint());
    const Eigen::VectorXd ev = hermitian_eigenvalues(mat_);
    if (ev.minCoeff() < -tol::kValidation || ev.maxCoeff() > 1.0 + tol::kValidation) {
      throw InvariantError("Effect: eigenvalues outside [0, 1]");
    }
  }

  static Effect unit(Index dim) { return Effect(CMatrix::Identity(dim, dim)); }

  Index dim() const { return mat_.rows(); }
  const CMatrix& matrix() const { return mat_; }

  /// tr(rho E), the outcome probability on rho.
  double operator()(const DensityMatrix& rho) const {
    detail::require_same_dim(dim(), rho.dim(), "Effect");
    return (rho.matrix() * mat_).trace().real();
  }

 private:
  CMatrix mat_;
};

class Povm {
 public:
  explicit Povm(std::vector<Effect> outcomes) : outcomes_(std::move(outcomes)) {
    if (outcomes_.empty()) throw InvariantError("Povm: needs at least one outcome");
    const Index d = outcomes_.front().dim();
    CMatrix sum = CMatrix::Zero(d, d);
    for (const auto& e : outcomes_) {
      detail::require_same_dim(d, e.dim(), "Povm");
      sum += e.matrix();
    }
    if (max_abs(sum - CMatrix::Identity(d, d)) > tol::kReconstruction) {
      throw InvariantError("Povm: elements do not sum to the identity");
    }
  }

  /// The one-outcome measurement {I}.
  static Povm trivial(Index dim) { return Povm({Effect::unit(dim)}); }

  /// Projective measurement onto the columns of a unitary.
  static Povm projective(const CMatrix& basis) {
    std::vector<Effect> out;
    out.reserve(static_cast<std::size_t>(basis.cols()));
    for (Index k = 0; k < basis.cols(); ++k) out.emplace_back(basis.col(k) * basis.col(k).adjoint());
    return Povm(std::move(out));
  }

  Index dim() const { return outcomes_.front().dim(); }
  std::size_t size() const { return outcomes_.size(); }
  const Effect& operator[](std::size_t i) const { return outcomes_[i]; }
  const std::vector<Effect>& outcomes() const { return outcomes_; }

 private:
  std::vector<Effect> outcomes_;
};

/// Pure state on A (x) B stored as the dimA x dimB coefficient matrix C,
/// |Psi> = sum_ab C(a,b) |a>|b>.
class BipartiteState {
 public:
  explicit BipartiteState(CMatrix amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.rows() < 1 || amps_.cols() < 1) throw InvariantError("BipartiteState: empty factor");
    const double n = amps_.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > tol::kValidation) {
      throw InvariantError("BipartiteState: norm " + std::to_string(n) + " differs from 1");
    }
  }

  Index dim_a() const { return amps_.rows(); }
  Index dim_b() const { return amps_.cols(); }
  const CMatrix& amplitudes() const { return amps_; }

  /// Flattened vector in the basis |a>|b> with index a * dimB + b.
  CVector vector() const {
    CVector v(amps_.size());
    for (Index a = 0; a < dim_a(); ++a)
      for (Index b = 0; b < dim_b(); ++b) v(a * dim_b() + b) = amps_(a, b);
    return v;
  }

 private:
  CMatrix amps_;
};

inline BipartiteState tensor(const StateVector& a, const StateVector& b) {
  return BipartiteState(a.amplitudes() * b.amplitudes().transpose());
}

/// Unnormalized B-side operator tr_A[(M (x) I)|Psi><Psi|] = C^T M^T conj(C).
inline CMatrix conditional_operator_b(const BipartiteState& state, const CMatrix& alice_op) {
  detail::require_same_dim(state.dim_a(), alice_op.rows(), "conditional_operator_b");
  const CMatrix& c = state.amplitudes();
  return c.transpose() * alice_op.transpose() * c.conjugate();
}

inline DensityMatrix partial_trace_a(const BipartiteState& state) {
  const CMatrix& c = state.amplitudes();
  return DensityMatrix(c.transpose() * c.conjugate());
}

/// Canonical purification sum_k sqrt(s_k)|k>_A|e_k>_B of omega = sum_k s_k |e_k><e_k|.
/// Zero eigenvalues are kept so dimA == dimB.
inline BipartiteState purify(const DensityMatrix& omega) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(omega.matrix());
  const Index d = omega.dim();
  // Round-off eigenvalues would become sqrt-sized amplitudes; drop them.
  const double floor = 1e-14 * std::max(es.eigenvalues().maxCoeff(), 0.0);
  CMatrix c(d, d);
  for (Index k = 0; k < d; ++k) {
    const double s = es.eigenvalues()(k) > floor ? es.eigenvalues()(k) : 0.0;
    c.row(k) = std::sqrt(s) * es.eigenvectors().col(k).transpose();
  }
  c /= c.norm();
  return BipartiteState(std::move(c));
}

}  // namespace bornlab
