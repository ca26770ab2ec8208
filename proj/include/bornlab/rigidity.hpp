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

// Grid certificate that a rule P = Phi o tau opens no Jensen gap, and hence
// that Phi is the identity.
//
// Grid: x_k = k / K with K = round(1 / grid_step). Every triple (x_i, x_j,
// lambda) with i < j and lambda in {1/4, 1/2, 3/4} is scanned.
//
// Deviation bound. Let D(x) = Phi(x) - x and g the largest |gap| at
// lambda = 1/2. The gap is linear in Phi and vanishes for the identity, so
// D(x_k) = (D(x_a) + D(x_b)) / 2 - gap(x_a, x_b, 1/2) whenever x_k is the
// midpoint of x_a, x_b. Each interior x_k is such a midpoint with one end at
// 0 or 1: (x_0, x_2k) if 2k <= K, else (x_{2k-K}, x_K). Following the
// doubling map k -> 2k mod K and using |D| <= 1 gives
//   |D(x_k)| <= 2 g + e,   e = max(|D(0)|, |D(1)|).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bornlab/phi_rule.hpp"
#include "bornlab/signaling.hpp"

namespace bornlab {

struct ConvexityInterval {
  double lo;
  double hi;
  int sign;  // +1 convex, -1 concave, 0 affine
};

struct GapWitness {
  double p1 = 0.0;
  double p2 = 0.0;
  double lambda = 0.0;
  double gap = 0.0;
};

struct RigidityReport {
  std::string rule_id;
  double grid_step = 0.0;
  std::size_t grid_intervals = 0;
  double max_gap = 0.0;
  GapWitness witness;
  double max_midpoint_gap = 0.0;
  double max_identity_deviation = 0.0;
  double deviation_point = 0.0;
  double endpoint_defect = 0.0;
  std::vector<ConvexityInterval> convexity_intervals;
  double affine_residual = 0.0;
};

inline constexpr std::array<double, 3> kScanLambdas = {0.25, 0.5, 0.75};

/// Second differences smaller than this count as zero.
inline constexpr double kCurvatureFloor = 1e-12;

namespace detail {

inline std::size_t grid_intervals(double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 0.1)) throw std::invalid_argument("grid_step must be in (0, 0.1]");
  return static_cast<std::size_t>(std::llround(1.0 / grid_step));
}

inline int curvature_sign(double d2) {
  if (d2 > kCurvatureFloor) return 1;
  if (d2 < -kCurvatureFloor) return -1;
  return 0;
}

}  // namespace detail

inline RigidityReport scan_gaps(const PhiRule& rule, double grid_step) {
  const std::size_t n = detail::grid_intervals(grid_step);
  RigidityReport rep;
  rep.rule_id = rule.id();
  rep.grid_step = 1.0 / static_cast<double>(n);
  rep.grid_intervals = n;

  std::vector<double> x(n + 1), phi(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    x[k] = static_cast<double>(k) / static_cast<double>(n);
    phi[k] = phi_eval(rule, x[k]);
  }

  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = i + 1; j <= n; ++j) {
      for (double lambda : kScanLambdas) {
        const double g = jensen_gap(rule, x[i], x[j], lambda);
        if (std::abs(g) > std::abs(rep.witness.gap)) rep.witness = {x[i], x[j], lambda, g};
        if (lambda == 0.5) rep.max_midpoint_gap = std::max(rep.max_midpoint_gap, std::abs(g));
      }
    }
  }
  rep.max_gap = std::abs(rep.witness.gap);

  const double phi0 = phi.front();
  const double phi1 = phi.back();
  rep.endpoint_defect = std::max(std::abs(phi0), std::abs(phi1 - 1.0));
  for (std::size_t k = 0; k <= n; ++k) {
    const double dev = std::abs(phi[k] - x[k]);
    if (dev > rep.max_identity_deviation) {
      rep.max_identity_deviation = dev;
      rep.deviation_point = x[k];
    }
    rep.affine_residual = std::max(rep.affine_residual, std::abs(phi[k] - (phi0 + (phi1 - phi0) * x[k])));
  }

  // Maximal runs of interior nodes sharing the sign of the second difference.
  for (std::size_t k = 1; k + 1 <= n; ++k) {
    const int s = detail::curvature_sign(phi[k - 1] - 2.0 * phi[k] + phi[k + 1]);
    auto& iv = rep.convexity_intervals;
    if (!iv.empty() && iv.back().sign == s && iv.back().hi == x[k]) {
      iv.back().hi = x[k + 1];
    } else {
      iv.push_back({x[k - 1], x[k + 1], s});
    }
  }
  return rep;
}

/// 2 * gap_tolerance + endpoint_defect, the deviation allowed once every
/// midpoint gap is within gap_tolerance (see the header comment).
inline double derived_bound(double gap_tolerance, double endpoint_defect = kProbabilitySlack) {
  return 2.0 * gap_tolerance + endpoint_defect;
}

inline constexpr const char* kBoundDerivation =
    "|Phi(x_k)-x_k| <= 2*max_midpoint_gap + endpoint_defect: each grid point x_k is the "
    "lambda=1/2 midpoint of (x_0,x_2k) or (x_2k-K,x_K); iterate the doubling map k->2k mod K";

struct IdentityCertificate {
  bool certified = false;
  double gap_tolerance = 0.0;
  double bound = 0.0;
  RigidityReport report;
  /// On failure: the triple with the largest gap (a signaling witness) when
  /// the gap test fails, and/or the grid point of largest deviation.
  std::optional<GapWitness> gap_witness;
  std::optional<double> deviation_witness;
};

inline IdentityCertificate certify_identity(const PhiRule& rule, double gap_tolerance, double grid_step) {
  if (!(gap_tolerance > 0.0)) throw std::invalid_argument("certify_identity: gap_tolerance must be positive");
  IdentityCertificate cert;
  cert.gap_tolerance = gap_tolerance;
  cert.bound = derived_bound(gap_tolerance);
  cert.report = scan_gaps(rule, grid_step);
  const bool gaps_ok = cert.report.max_gap <= gap_tolerance;
  const bool deviation_ok = cert.report.max_identity_deviation <= cert.bound;
  cert.certified = gaps_ok && deviation_ok;
  if (!gaps_ok) cert.gap_witness = cert.report.witness;
  if (!deviation_ok) cert.deviation_witness = cert.report.deviation_point;
  return cert;
}

}  // namespace bornlab
