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

// Executes a validated ScenarioConfig and produces its table, nested report
// and one-line summary.

#pragma once

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>

#include "bornlab/fock.hpp"
#include "bornlab/io/artifact.hpp"
#include "bornlab/io/config.hpp"
#include "bornlab/random.hpp"
#include "bornlab/rigidity.hpp"
#include "bornlab/signaling.hpp"
#include "bornlab/steering.hpp"
#include "bornlab/transition.hpp"

namespace bornlab::io {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalFailure = 3;

struct RunOutput {
  Table table;
  json report;
  std::string summary;
  int exit_code = kExitOk;
};

namespace detail {

inline Cell real(double v) { return Cell(v); }
inline Cell integer(std::int64_t v) { return Cell(v); }

inline json rigidity_json(const RigidityReport& r) {
  json intervals = json::array();
  for (const auto& iv : r.convexity_intervals) intervals.push_back({{"lo", iv.lo}, {"hi", iv.hi}, {"sign", iv.sign}});
  return {{"rule_id", r.rule_id},
          {"grid_step", r.grid_step},
          {"grid_intervals", r.grid_intervals},
          {"max_gap", r.max_gap},
          {"witness", {{"p1", r.witness.p1}, {"p2", r.witness.p2}, {"lambda", r.witness.lambda}, {"gap", r.witness.gap}}},
          {"max_midpoint_gap", r.max_midpoint_gap},
          {"max_identity_deviation", r.max_identity_deviation},
          {"deviation_point", r.deviation_point},
          {"endpoint_defect", r.endpoint_defect},
          {"convexity_intervals", intervals},
          {"affine_residual", r.affine_residual}};
}

inline RunOutput run_tau(const TauParams& p) {
  RunOutput out;
  out.table.columns = {"dim", "tau_closed", "tau_optimized", "abs_difference", "iterations", "residual", "converged"};
  const TransitionResult closed = tau_closed(p.psi, p.phi);
  TransitionResult opt;
  bool converged = true;
  try {
    opt = tau_optimized(p.psi, p.phi, p.optimizer);
  } catch (const NonConvergence& e) {
    opt = e.best();
    converged = false;
    out.exit_code = kExitNumericalFailure;
  }
  out.table.rows.push_back({integer(p.psi.dim()), real(closed.value), real(opt.value),
                            real(std::abs(closed.value - opt.value)), integer(opt.iterations), real(opt.residual),
                            Cell(converged)});
  out.summary = "tau=" + format_short(closed.value) + " (closed_form=" + format_short(closed.value) +
                ", optimized=" + format_short(opt.value) + (converged ? "" : ", NOT CONVERGED") + ")";
  return out;
}

inline RunOutput run_steer(const SteerParams& p) {
  RunOutput out;
  out.table.columns = {"outcome", "target_weight", "probability", "weight_error", "fidelity"};
  const DensityMatrix omega = barycenter(p.ensemble);
  const BipartiteState purification = purify(omega);
  const Povm povm = hjw_povm(purification, p.ensemble);
  const auto outcomes = steer(purification, povm);
  double max_err = 0.0;
  double min_fid = 1.0;
  for (const auto& o : outcomes) {
    const bool member = o.outcome_index < p.ensemble.size();
    const double target = member ? p.ensemble[o.outcome_index].weight : 0.0;
    const double err = std::abs(o.probability - target);
    max_err = std::max(max_err, err);
    Cell fid = std::string();
    if (member && o.conditional_state) {
      const double f = fidelity(p.ensemble[o.outcome_index].state, *o.conditional_state);
      min_fid = std::min(min_fid, f);
      fid = f;
    }
    out.table.rows.push_back({integer(static_cast<std::int64_t>(o.outcome_index)), real(target),
                              real(o.probability), real(err), fid});
  }
  out.summary = "max_weight_error=" + format_short(max_err) + ", min_fidelity=" + format_short(min_fid);
  return out;
}

inline RunOutput run_grid(const PhiRule& rule, const GridParams& p, bool full_pipeline) {
  RunOutput out;
  if (full_pipeline) {
    out.table.columns = {"p1", "p2", "lambda", "prob_split", "prob_direct", "gap", "analytic_gap",
                         "pipeline_discrepancy"};
  } else {
    out.table.columns = {"p1", "p2", "lambda", "gap"};
  }
  double last = 0.0;
  double max_abs_gap = 0.0;
  double max_disc = 0.0;
  for (double p1 : p.p1) {
    for (double p2 : p.p2) {
      for (double lambda : p.lambda) {
        if (full_pipeline) {
          const ExperimentRecord r = run_steering_experiment(rule, build_two_level_scenario(p1, p2, lambda));
          out.table.rows.push_back({real(p1), real(p2), real(lambda), real(r.prob_split), real(r.prob_direct),
                                    real(r.gap), real(r.analytic_gap), real(r.pipeline_discrepancy)});
          last = r.gap;
          max_disc = std::max(max_disc, r.pipeline_discrepancy);
        } else {
          last = jensen_gap(rule, p1, p2, lambda);
          out.table.rows.push_back({real(p1), real(p2), real(lambda), real(last)});
        }
        max_abs_gap = std::max(max_abs_gap, std::abs(last));
      }
    }
  }
  if (out.table.rows.size() == 1) {
    out.summary = "gap=" + format_short(last);
  } else {
    out.summary = "max_abs_gap=" + format_short(max_abs_gap);
  }
  if (full_pipeline) out.summary += ", max_pipeline_discrepancy=" + format_short(max_disc);
  return out;
}

inline RunOutput run_detect(const PhiRule& rule, const DetectParams& p, std::uint64_t seed) {
  RunOutput out;
  out.table.columns = {"seed", "successes_split", "successes_direct", "freq_split", "freq_direct",
                       "z_statistic", "p_value", "reject", "insufficient_sample"};
  const SteeringScenario scenario = build_two_level_scenario(p.p1, p.p2, p.lambda);
  std::int64_t rejections = 0;
  DetectabilityReport first;
  for (std::int64_t k = 0; k < p.repetitions; ++k) {
    const auto r = detectability(rule, scenario, p.n_samples, seed + static_cast<std::uint64_t>(k), p.alpha);
    if (k == 0) first = r;
    rejections += r.reject ? 1 : 0;
    out.table.rows.push_back({integer(static_cast<std::int64_t>(r.seed)), integer(r.successes_split),
                              integer(r.successes_direct), real(r.freq_split), real(r.freq_direct),
                              real(r.z_statistic), real(r.p_value), Cell(r.reject), Cell(r.insufficient_sample)});
  }
  const double rate = static_cast<double>(rejections) / static_cast<double>(p.repetitions);
  out.report = {{"scenario", {{"p1", p.p1}, {"p2", p.p2}, {"lambda", p.lambda}, {"degenerate", scenario.degenerate}}},
                {"n_samples", p.n_samples},
                {"repetitions", p.repetitions},
                {"alpha", p.alpha},
                {"prob_split", first.prob_split},
                {"prob_direct", first.prob_direct},
                {"analytic_gap", first.analytic_gap},
                {"required_samples", first.required_samples},
                {"rejections", rejections},
                {"rejection_rate", rate}};
  if (p.repetitions == 1) {
    out.summary = "p_value=" + format_short(first.p_value) + ", reject=" + (first.reject ? "true" : "false") +
                  (first.insufficient_sample ? ", insufficient_sample=true" : "");
  } else {
    out.summary = "rejection_rate=" + format_short(rate) + " over " + std::to_string(p.repetitions) + " repetitions";
  }
  return out;
}

inline RunOutput run_scan(const PhiRule& rule, const ScanParams& p) {
  RunOutput out;
  const IdentityCertificate cert = certify_identity(rule, p.gap_tolerance, p.grid_step);
  const RigidityReport& r = cert.report;
  out.table.columns = {"p", "phi", "deviation"};
  for (std::size_t k = 0; k <= r.grid_intervals; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(r.grid_intervals);
    const double y = phi_eval(rule, x);
    out.table.rows.push_back({real(x), real(y), real(y - x)});
  }
  json certificate = {{"certified", cert.certified},
                      {"gap_tolerance", cert.gap_tolerance},
                      {"derived_bound", cert.bound},
                      {"bound_derivation", kBoundDerivation}};
  if (cert.gap_witness) {
    certificate["signaling_witness"] = {{"p1", cert.gap_witness->p1},
                                        {"p2", cert.gap_witness->p2},
                                        {"lambda", cert.gap_witness->lambda},
                                        {"gap", cert.gap_witness->gap}};
  }
  if (cert.deviation_witness) certificate["deviation_witness"] = *cert.deviation_witness;
  out.report = {{"rigidity", rigidity_json(r)}, {"certificate", certificate}};
  out.summary = "max_gap=" + format_short(r.max_gap) + ", certified=" + (cert.certified ? "true" : "false");
  return out;
}

inline RunOutput run_fock(const FockParams& p) {
  RunOutput out;
  out.table.columns = {"N", "tau_truncated", "tau_analytic", "error"};
  const double exact = tau_coherent_analytic(p.alpha, p.beta);
  const auto rows = truncation_convergence(p.alpha, p.beta, p.n_list);
  for (const auto& e : rows) out.table.rows.push_back({integer(e.n), real(e.tau_truncated), real(exact), real(e.error)});
  out.summary = "error(N=" + std::to_string(rows.back().n) + ")=" + format_short(rows.back().error);
  return out;
}

inline RunOutput run_sigma(const PhiRule& rule, const SigmaParams& p) {
  RunOutput out;
  out.table.columns = {"N", "value", "deviation", "tail_bound", "within_bound"};
  const auto rows = sigma_affinity_convergence(rule, p.r, p.phi, p.n_list, p.padding);
  double max_dev = 0.0;
  bool all_within = true;
  for (const auto& d : rows) {
    const bool within = d.deviation <= d.tail_bound;
    all_within = all_within && within;
    max_dev = std::max(max_dev, d.deviation);
    out.table.rows.push_back({integer(d.n), real(d.value), real(d.deviation), real(d.tail_bound), Cell(within)});
  }
  out.summary = "max_deviation=" + format_short(max_dev) + ", within_tail_bound=" + (all_within ? "true" : "false");
  return out;
}

}  // namespace detail

/// Runs the configured command. Throws std::invalid_argument (or a subclass)
/// for inputs that pass validation but are rejected by the numerics, such as
/// an ensemble that does not decompose its own barycenter.
inline RunOutput run(const ScenarioConfig& cfg) {
  return std::visit(
      [&](const auto& p) -> RunOutput {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, TauParams>) return detail::run_tau(p);
        else if constexpr (std::is_same_v<T, SteerParams>) return detail::run_steer(p);
        else if constexpr (std::is_same_v<T, GridParams>) return detail::run_grid(cfg.rule, p, cfg.command == Command::experiment);
        else if constexpr (std::is_same_v<T, DetectParams>) return detail::run_detect(cfg.rule, p, cfg.seed);
        else if constexpr (std::is_same_v<T, ScanParams>) return detail::run_scan(cfg.rule, p);
        else if constexpr (std::is_same_v<T, FockParams>) return detail::run_fock(p);
        else return detail::run_sigma(cfg.rule, p);
      },
      cfg.parameters);
}

inline Metadata make_metadata(const ScenarioConfig& cfg, const std::string& tool_version) {
  return {tool_version, to_string(cfg.command), cfg.rule.id(), cfg.rule_spec, cfg.seed, std::string(Rng::kName)};
}

inline void write_artifact(std::ostream& os, OutputFormat format, const Metadata& meta, const RunOutput& out) {
  if (format == OutputFormat::csv) write_csv(os, meta, out.table);
  else write_json(os, meta, out.table, out.report);
}

}  // namespace bornlab::io
