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

// Candidate probability distortions Phi : [0,1] -> [0,1] and the generalized
// rule P(phi | psi) = Phi(tau(psi, phi)), extended to ensembles by mixing.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "bornlab/ensemble.hpp"
#include "bornlab/transition.hpp"

namespace bornlab {

struct Knot {
  double x;
  double y;
};

struct AdmissibilityReport {
  bool passed = true;
  bool endpoints_ok = true;
  bool monotone = true;
  /// First point where the rule fails (endpoint or start of a decreasing step).
  std::optional<double> first_violation;
  std::string reason;
};

class PhiRule;
inline AdmissibilityReport check_admissibility(const PhiRule& rule, double grid_step);

class PhiRule {
 public:
  struct Identity {};
  struct Power {
    double alpha;
  };
  struct PiecewiseAffine {
    std::vector<Knot> knots;
  };
  /// Values on the uniform grid k / (n - 1), linearly interpolated.
  struct Tabulated {
    std::vector<double> values;
  };
  using Kind = std::variant<Identity, Power, PiecewiseAffine, Tabulated>;

  static constexpr std::size_t kDefaultTablePoints = 1025;
  static constexpr double kDefaultGridStep = 1e-3;

  static PhiRule identity() { return PhiRule(Identity{}); }

  static PhiRule power(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("PhiRule::power: alpha must be positive");
    return PhiRule(Power{alpha});
  }

  /// Knots must have strictly increasing x from 0 to 1 and y in [0, 1]. A
  /// decreasing segment is allowed; it makes the rule inadmissible.
  static PhiRule piecewise_affine(std::vector<Knot> knots) {
    if (knots.size() < 2) throw std::invalid_argument("PhiRule::piecewise_affine: need at least two knots");
    if (knots.front().x != 0.0 || knots.back().x != 1.0) {
      throw std::invalid_argument("PhiRule::piecewise_affine: knots must span [0, 1]");
    }
    for (std::size_t i = 0; i < knots.size(); ++i) {
      if (!(knots[i].y >= 0.0 && knots[i].y <= 1.0)) {
        throw std::invalid_argument("PhiRule::piecewise_affine: knot values must lie in [0, 1]");
      }
      if (i > 0 && !(knots[i].x > knots[i - 1].x)) {
        throw std::invalid_argument("PhiRule::piecewise_affine: knot positions must increase strictly");
      }
    }
    return PhiRule(PiecewiseAffine{std::move(knots)});
  }

  static PhiRule tabulated(std::vector<double> values) {
    if (values.size() < 2) throw std::invalid_argument("PhiRule::tabulated: need at least two values");
    for (double v : values) {
      if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("PhiRule::tabulated: values must lie in [0, 1]");
    }
    return PhiRule(Tabulated{std::move(values)});
  }

  static PhiRule tabulate(const std::function<double(double)>& fn, std::size_t points = kDefaultTablePoints) {
    if (points < 2) throw std::invalid_argument("PhiRule::tabulate: need at least two points");
    std::vector<double> values(points);
    for (std::size_t k = 0; k < points; ++k) values[k] = fn(static_cast<double>(k) / static_cast<double>(points - 1));
    return tabulated(std::move(values));
  }

  const Kind& kind() const { return kind_; }
  bool admissible() const { return admissible_; }

  bool is_identity() const { return std::holds_alternative<Identity>(kind_); }

  /// Phi(p) for p already known to lie in [0, 1].
  double evaluate(double p) const {
    return std::visit(
        [p](const auto& k) -> double {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, Identity>) {
            return p;
          } else if constexpr (std::is_same_v<T, Power>) {
            return std::pow(p, k.alpha);
          } else if constexpr (std::is_same_v<T, PiecewiseAffine>) {
            const auto& kn = k.knots;
            auto it = std::upper_bound(kn.begin(), kn.end(), p, [](double x, const Knot& n) { return x < n.x; });
            if (it == kn.begin()) return kn.front().y;
            if (it == kn.end()) return kn.back().y;
            const Knot& hi = *it;
            const Knot& lo = *(it - 1);
            const double t = (p - lo.x) / (hi.x - lo.x);
            return lo.y + t * (hi.y - lo.y);
          } else {
            const auto& v = k.values;
            const double pos = p * static_cast<double>(v.size() - 1);
            const auto i = std::min(static_cast<std::size_t>(pos), v.size() - 2);
            const double t = pos - static_cast<double>(i);
            return v[i] + t * (v[i + 1] - v[i]);
          }
        },
        kind_);
  }

  /// Short id such as "power(alpha=2)", used in artifacts.
  std::string id() const {
    return std::visit(
        [](const auto& k) -> std::string {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, Identity>) {
            return "identity";
          } else if constexpr (std::is_same_v<T, Power>) {
            return "power(alpha=" + shortest(k.alpha) + ")";
          } else if constexpr (std::is_same_v<T, PiecewiseAffine>) {
            std::string s = "piecewise_affine(";
            for (std::size_t i = 0; i < k.knots.size(); ++i) {
              if (i) s += ';';
              s += shortest(k.knots[i].x) + ':' + shortest(k.knots[i].y);
            }
            return s + ")";
          } else {
            return "custom(points=" + std::to_string(k.values.size()) + ")";
          }
        },
        kind_);
  }

 private:
  explicit PhiRule(Kind kind) : kind_(std::move(kind)) {
    admissible_ = check_admissibility(*this, kDefaultGridStep).passed;
  }

  static std::string shortest(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
  }

  Kind kind_;
  bool admissible_ = false;
};

inline constexpr double kProbabilitySlack = 1e-12;

inline double phi_eval(const PhiRule& rule, double p) {
  if (!(p >= -kProbabilitySlack && p <= 1.0 + kProbabilitySlack)) {
    throw std::domain_error("phi_eval: argument " + std::to_string(p) + " outside [0, 1]");
  }
  return std::clamp(rule.evaluate(std::clamp(p, 0.0, 1.0)), 0.0, 1.0);
}

/// Checks Phi(0) = 0, Phi(1) = 1 (within 1e-12) and monotonicity on a grid of
/// the given step; piecewise rules additionally have their knots checked.
inline AdmissibilityReport check_admissibility(const PhiRule& rule, double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 0.1)) {
    throw std::invalid_argument("check_admissibility: grid_step must be in (0, 0.1]");
  }
  AdmissibilityReport report;
  auto fail = [&report](double where, std::string why) {
    if (!report.first_violation) {
      report.first_violation = where;
      report.reason = std::move(why);
    }
    report.passed = false;
  };

  if (std::abs(rule.evaluate(0.0)) > kProbabilitySlack) {
    report.endpoints_ok = false;
    fail(0.0, "Phi(0) != 0");
  }
  if (std::abs(rule.evaluate(1.0) - 1.0) > kProbabilitySlack) {
    report.endpoints_ok = false;
    fail(1.0, "Phi(1) != 1");
  }

  if (const auto* pw = std::get_if<PhiRule::PiecewiseAffine>(&rule.kind())) {
    for (std::size_t i = 1; i < pw->knots.size(); ++i) {
      if (pw->knots[i].y < pw->knots[i - 1].y) {
        report.monotone = false;
        fail(pw->knots[i - 1].x, "decreasing segment starting at knot " + std::to_string(i - 1));
        break;
      }
    }
  }

  const auto steps = static_cast<std::size_t>(std::ceil(1.0 / grid_step - 1e-9));
  double prev = rule.evaluate(0.0);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double x0 = std::min(static_cast<double>(k - 1) * grid_step, 1.0);
    const double x = std::min(static_cast<double>(k) * grid_step, 1.0);
    const double cur = rule.evaluate(x);
    if (cur < prev) {
      report.monotone = false;
      fail(x0, "decreasing between grid points");
      break;
    }
    prev = cur;
  }
  return report;
}

inline double prob_pure(const PhiRule& rule, const StateVector& psi, const StateVector& phi) {
  return phi_eval(rule, tau_closed(psi, phi).value);
}

struct MemberProbability {
  double weight;
  double probability;
};

struct EnsembleProbability {
  double value = 0.0;
  std::vector<MemberProbability> per_member;
  /// The omitted tail can change value by at most this much, since Phi <= 1.
  double truncation_tail_bound = 0.0;
};

inline EnsembleProbability prob_ensemble(const PhiRule& rule, const Ensemble& ensemble, const StateVector& phi) {
  detail::require_same_dim(ensemble.dim(), phi.dim(), "prob_ensemble");
  EnsembleProbability out;
  out.per_member.reserve(ensemble.size());
  for (const auto& m : ensemble.members()) {
    const double p = prob_pure(rule, m.state, phi);
    out.per_member.push_back({m.weight, p});
    out.value += m.weight * p;
  }
  out.truncation_tail_bound = ensemble.tail_weight();
  return out;
}

}  // namespace bornlab
