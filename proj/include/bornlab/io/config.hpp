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

// Scenario configuration: a JSON document naming a command, a probability
// rule, command parameters, a seed and an output target. See README.md for
// the grammar. validate() reports every problem it finds in one pass.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "bornlab/ensemble.hpp"
#include "bornlab/fock.hpp"
#include "bornlab/phi_rule.hpp"
#include "bornlab/transition.hpp"

namespace bornlab::io {

using json = nlohmann::json;

enum class Command { tau, steer, jensen, experiment, detect, scan, fock_converge, sigma_affinity };
enum class OutputFormat { csv, json };

inline const std::map<std::string, Command>& command_names() {
  static const std::map<std::string, Command> names = {
      {"tau", Command::tau},         {"steer", Command::steer},
      {"jensen", Command::jensen},   {"experiment", Command::experiment},
      {"detect", Command::detect},   {"scan", Command::scan},
      {"fock_converge", Command::fock_converge}, {"sigma_affinity", Command::sigma_affinity}};
  return names;
}

inline std::string to_string(Command c) {
  for (const auto& [name, value] : command_names())
    if (value == c) return name;
  return "?";
}

inline std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

/// Nested reports default to JSON, tables to CSV.
inline OutputFormat default_format(Command c) {
  return (c == Command::scan || c == Command::detect) ? OutputFormat::json : OutputFormat::csv;
}

struct TauParams {
  StateVector psi;
  StateVector phi;
  OptimizerConfig optimizer;
};

struct SteerParams {
  Ensemble ensemble;
};

/// jensen / experiment: each of p1, p2, lambda may be a list; runs the
/// cartesian product in p1-major order.
struct GridParams {
  std::vector<double> p1;
  std::vector<double> p2;
  std::vector<double> lambda;
};

struct DetectParams {
  double p1;
  double p2;
  double lambda;
  std::int64_t n_samples;
  std::int64_t repetitions;
  double alpha;
};

struct ScanParams {
  double grid_step;
  double gap_tolerance;
};

struct FockParams {
  Complex alpha;
  Complex beta;
  std::vector<int> n_list;
};

struct SigmaParams {
  double r;
  StateVector phi;
  std::vector<int> n_list;
  int padding;
};

using Parameters =
    std::variant<TauParams, SteerParams, GridParams, DetectParams, ScanParams, FockParams, SigmaParams>;

struct ScenarioConfig {
  Command command;
  PhiRule rule = PhiRule::identity();
  json rule_spec = json{{"kind", "identity"}};
  Parameters parameters;
  std::uint64_t seed = 0;
  std::optional<std::string> output_path;
  std::optional<OutputFormat> output_format;
};

struct ValidationResult {
  std::optional<ScenarioConfig> config;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return config.has_value() && errors.empty(); }
};

namespace detail {

/// Collects errors keyed by dotted field path while reading a JSON tree.
class Reader {
 public:
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  void error(const std::string& field, const std::string& msg) { errors.push_back(field + ": " + msg); }

  const json* find(const json& obj, const std::string& key) const {
    if (!obj.is_object()) return nullptr;
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  std::optional<double> number(const json& obj, const std::string& key, const std::string& path, bool required,
                               std::optional<double> fallback = std::nullopt) {
    const json* v = find(obj, key);
    if (!v) {
      if (required && !fallback) error(path, "required number is missing");
      return fallback;
    }
    if (!v->is_number()) {
      error(path, "must be a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<double> in_range(const json& obj, const std::string& key, const std::string& path, double lo,
                                 double hi, bool open_lo, bool open_hi, std::optional<double> fallback = std::nullopt) {
    auto v = number(obj, key, path, true, fallback);
    if (!v) return v;
    const bool ok = (open_lo ? *v > lo : *v >= lo) && (open_hi ? *v < hi : *v <= hi);
    if (!ok) {
      error(path, std::string("must be in ") + (open_lo ? "(" : "[") + fmt(lo) + ", " + fmt(hi) +
                      (open_hi ? ")" : "]") + ", got " + fmt(*v));
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::vector<double>> number_list(const json& obj, const std::string& key, const std::string& path,
                                                 double lo, double hi, bool open_lo, bool open_hi) {
    const json* v = find(obj, key);
    if (!v) {
      error(path, "required number (or list of numbers) is missing");
      return std::nullopt;
    }
    std::vector<double> out;
    const json items = v->is_array() ? *v : json::array({*v});
    if (items.empty()) {
      error(path, "list must not be empty");
      return std::nullopt;
    }
    bool ok = true;
    for (std::size_t i = 0; i < items.size(); ++i) {
      json wrapper = {{"x", items[i]}};
      const std::string p = v->is_array() ? path + "[" + std::to_string(i) + "]" : path;
      auto x = in_range(wrapper, "x", p, lo, hi, open_lo, open_hi);
      if (x) out.push_back(*x); else ok = false;
    }
    if (!ok) return std::nullopt;
    return out;
  }

  std::optional<std::int64_t> integer(const json& obj, const std::string& key, const std::string& path,
                                      std::int64_t min, std::optional<std::int64_t> fallback = std::nullopt) {
    const json* v = find(obj, key);
    if (!v) {
      if (!fallback) error(path, "required integer is missing");
      return fallback;
    }
    if (!v->is_number_integer()) {
      error(path, "must be an integer");
      return std::nullopt;
    }
    const auto x = v->get<std::int64_t>();
    if (x < min) {
      error(path, "must be >= " + std::to_string(min) + ", got " + std::to_string(x));
      return std::nullopt;
    }
    return x;
  }

  std::optional<std::vector<int>> ascending_ints(const json& obj, const std::string& key, const std::string& path,
                                                 int min) {
    const json* v = find(obj, key);
    if (!v) {
      error(path, "required list of integers is missing");
      return std::nullopt;
    }
    if (!v->is_array() || v->empty()) {
      error(path, "must be a nonempty list of integers");
      return std::nullopt;
    }
    std::vector<int> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const json& x = (*v)[i];
      if (!x.is_number_integer() || x.get<std::int64_t>() < min || x.get<std::int64_t>() > 100000) {
        error(path + "[" + std::to_string(i) + "]", "must be an integer in [" + std::to_string(min) + ", 100000]");
        return std::nullopt;
      }
      out.push_back(x.get<int>());
      if (i > 0 && out[i] <= out[i - 1]) {
        error(path, "must be strictly ascending");
        return std::nullopt;
      }
    }
    return out;
  }

  std::optional<Complex> complex(const json& obj, const std::string& key, const std::string& path) {
    const json* v = find(obj, key);
    if (!v) {
      error(path, "required complex number is missing");
      return std::nullopt;
    }
    return complex_value(*v, path);
  }

  std::optional<Complex> complex_value(const json& v, const std::string& path) {
    if (v.is_number()) return Complex(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
      return Complex(v[0].get<double>(), v[1].get<double>());
    }
    error(path, "must be a number or a [re, im] pair");
    return std::nullopt;
  }

  /// Amplitude list, normalized on read; a warning is emitted if the input
  /// norm was off by more than the validation tolerance.
  std::optional<StateVector> state(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) {
      error(path, "must be a nonempty list of amplitudes");
      return std::nullopt;
    }
    CVector amps(static_cast<Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      auto c = complex_value(v[i], path + "[" + std::to_string(i) + "]");
      if (!c) return std::nullopt;
      amps(static_cast<Index>(i)) = *c;
    }
    const double n = amps.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
      error(path, "amplitudes must have positive finite norm");
      return std::nullopt;
    }
    if (std::abs(n - 1.0) > tol::kValidation) warnings.push_back(path + ": amplitudes normalized (norm was " + fmt(n) + ")");
    return StateVector::normalized(amps);
  }

  std::optional<StateVector> state_field(const json& obj, const std::string& key, const std::string& path) {
    const json* v = find(obj, key);
    if (!v) {
      error(path, "required amplitude list is missing");
      return std::nullopt;
    }
    return state(*v, path);
  }

  static std::string fmt(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
  }
};

inline std::optional<PhiRule> read_rule(Reader& rd, const json& spec, const std::string& path) {
  if (!spec.is_object()) {
    rd.error(path, "must be an object with a \"kind\" field");
    return std::nullopt;
  }
  const json* kind = rd.find(spec, "kind");
  if (!kind || !kind->is_string()) {
    rd.error(path + ".kind", "must be one of identity, power, piecewise_affine, custom");
    return std::nullopt;
  }
  const std::string k = kind->get<std::string>();
  try {
    if (k == "identity") return PhiRule::identity();
    if (k == "power") {
      auto a = rd.in_range(spec, "alpha", path + ".alpha", 0.0, std::numeric_limits<double>::max(), true, false);
      if (!a) return std::nullopt;
      return PhiRule::power(*a);
    }
    if (k == "piecewise_affine") {
      const json* knots = rd.find(spec, "knots");
      if (!knots || !knots->is_array()) {
        rd.error(path + ".knots", "must be a list of [x, y] pairs");
        return std::nullopt;
      }
      std::vector<Knot> kn;
      for (std::size_t i = 0; i < knots->size(); ++i) {
        const json& p = (*knots)[i];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
          rd.error(path + ".knots[" + std::to_string(i) + "]", "must be an [x, y] pair");
          return std::nullopt;
        }
        kn.push_back({p[0].get<double>(), p[1].get<double>()});
      }
      return PhiRule::piecewise_affine(std::move(kn));
    }
    if (k == "custom") {
      const json* values = rd.find(spec, "values");
      if (!values || !values->is_array()) {
        rd.error(path + ".values", "must be a list of values on a uniform grid over [0, 1]");
        return std::nullopt;
      }
      std::vector<double> v;
      for (const auto& x : *values) {
        if (!x.is_number()) {
          rd.error(path + ".values", "must contain only numbers");
          return std::nullopt;
        }
        v.push_back(x.get<double>());
      }
      return PhiRule::tabulated(std::move(v));
    }
  } catch (const std::invalid_argument& e) {
    rd.error(path, e.what());
    return std::nullopt;
  }
  rd.error(path + ".kind", "unknown rule kind \"" + k + "\" (expected identity, power, piecewise_affine, custom)");
  return std::nullopt;
}

inline std::optional<Ensemble> read_ensemble(Reader& rd, const json& spec, const std::string& path) {
  if (!spec.is_object()) {
    rd.error(path, "must be an object with \"members\"");
    return std::nullopt;
  }
  const json* kind = rd.find(spec, "kind");
  const std::string k = kind && kind->is_string() ? kind->get<std::string>() : "finite";
  if (k != "finite" && k != "truncated_countable") {
    rd.error(path + ".kind", "must be finite or truncated_countable");
    return std::nullopt;
  }
  const json* members = rd.find(spec, "members");
  if (!members || !members->is_array() || members->empty()) {
    rd.error(path + ".members", "must be a nonempty list of {weight, amplitudes}");
    return std::nullopt;
  }
  std::vector<EnsembleMember> out;
  for (std::size_t i = 0; i < members->size(); ++i) {
    const std::string mp = path + ".members[" + std::to_string(i) + "]";
    auto w = rd.in_range((*members)[i], "weight", mp + ".weight", 0.0, 1.0, false, false);
    auto s = rd.state_field((*members)[i], "amplitudes", mp + ".amplitudes");
    if (!w || !s) return std::nullopt;
    out.push_back({*w, std::move(*s)});
  }
  double tail = 0.0;
  if (k == "truncated_countable") {
    auto t = rd.in_range(spec, "tail_weight", path + ".tail_weight", 0.0, 1.0, false, false);
    if (!t) return std::nullopt;
    tail = *t;
  }
  try {
    return k == "finite" ? Ensemble::finite(std::move(out)) : Ensemble::truncated_countable(std::move(out), tail);
  } catch (const std::invalid_argument& e) {
    rd.error(path, e.what());
    return std::nullopt;
  }
}

inline std::optional<StateVector> coherent_state(Reader& rd, Complex alpha, int n, const std::string& path) {
  try {
    return coherent_vector(CoherentSpec(alpha, n)).state;
  } catch (const std::invalid_argument& e) {
    rd.error(path, e.what());
    return std::nullopt;
  }
}

inline std::optional<Parameters> read_parameters(Reader& rd, Command cmd, const json& p) {
  const std::string base = "parameters";
  switch (cmd) {
    case Command::tau: {
      auto psi = rd.state_field(p, "psi", base + ".psi");
      auto phi = rd.state_field(p, "phi", base + ".phi");
      OptimizerConfig oc;
      auto tolerance = rd.in_range(p, "tolerance", base + ".tolerance", 0.0, 1.0, true, false, oc.tolerance);
      auto iters = rd.integer(p, "max_iters", base + ".max_iters", 1, oc.max_iters);
      auto max_dim = rd.integer(p, "max_dim", base + ".max_dim", 1, oc.max_dim);
      if (psi && phi && psi->dim() != phi->dim()) rd.error(base + ".phi", "dimension differs from psi");
      if (psi && max_dim && psi->dim() > *max_dim) rd.error(base + ".psi", "dimension exceeds max_dim");
      if (!psi || !phi || !tolerance || !iters || !max_dim) return std::nullopt;
      oc.tolerance = *tolerance;
      oc.max_iters = static_cast<int>(*iters);
      oc.max_dim = *max_dim;
      return TauParams{std::move(*psi), std::move(*phi), oc};
    }
    case Command::steer: {
      const json* e = rd.find(p, "ensemble");
      if (!e) {
        rd.error(base + ".ensemble", "required ensemble is missing");
        return std::nullopt;
      }
      auto ens = read_ensemble(rd, *e, base + ".ensemble");
      if (!ens) return std::nullopt;
      return SteerParams{std::move(*ens)};
    }
    case Command::jensen:
    case Command::experiment: {
      auto p1 = rd.number_list(p, "p1", base + ".p1", 0.0, 1.0, false, false);
      auto p2 = rd.number_list(p, "p2", base + ".p2", 0.0, 1.0, false, false);
      auto lambda = rd.number_list(p, "lambda", base + ".lambda", 0.0, 1.0, true, true);
      if (!p1 || !p2 || !lambda) return std::nullopt;
      return GridParams{*p1, *p2, *lambda};
    }
    case Command::detect: {
      auto p1 = rd.in_range(p, "p1", base + ".p1", 0.0, 1.0, false, false);
      auto p2 = rd.in_range(p, "p2", base + ".p2", 0.0, 1.0, false, false);
      auto lambda = rd.in_range(p, "lambda", base + ".lambda", 0.0, 1.0, true, true);
      auto n = rd.integer(p, "n_samples", base + ".n_samples", 1);
      auto reps = rd.integer(p, "repetitions", base + ".repetitions", 1, 1);
      auto alpha = rd.in_range(p, "alpha", base + ".alpha", 0.0, 1.0, true, true, 0.05);
      if (!p1 || !p2 || !lambda || !n || !reps || !alpha) return std::nullopt;
      return DetectParams{*p1, *p2, *lambda, *n, *reps, *alpha};
    }
    case Command::scan: {
      auto step = rd.in_range(p, "grid_step", base + ".grid_step", 0.0, 0.1, true, false, 0.01);
      auto tol = rd.in_range(p, "gap_tolerance", base + ".gap_tolerance", 0.0, 1.0, true, false, 1e-10);
      if (!step || !tol) return std::nullopt;
      return ScanParams{*step, *tol};
    }
    case Command::fock_converge: {
      auto a = rd.complex(p, "alpha", base + ".alpha");
      auto b = rd.complex(p, "beta", base + ".beta");
      auto ns = rd.ascending_ints(p, "N_list", base + ".N_list", 0);
      if (!a || !b || !ns) return std::nullopt;
      return FockParams{*a, *b, *ns};
    }
    case Command::sigma_affinity: {
      auto r = rd.in_range(p, "r", base + ".r", 0.0, 1.0, true, true);
      auto ns = rd.ascending_ints(p, "N_list", base + ".N_list", 0);
      auto padding = rd.integer(p, "padding", base + ".padding", 0, kReferencePadding);
      std::optional<StateVector> phi;
      const json* phi_spec = rd.find(p, "phi");
      if (!phi_spec) {
        rd.error(base + ".phi", "required state is missing (amplitude list or {\"coherent\": {alpha, N}})");
      } else if (phi_spec->is_object()) {
        const json* coh = rd.find(*phi_spec, "coherent");
        if (!coh) {
          rd.error(base + ".phi", "object form must be {\"coherent\": {\"alpha\": ..., \"N\": ...}}");
        } else {
          auto alpha = rd.complex(*coh, "alpha", base + ".phi.coherent.alpha");
          auto n = rd.integer(*coh, "N", base + ".phi.coherent.N", 1);
          if (alpha && n) phi = coherent_state(rd, *alpha, static_cast<int>(*n), base + ".phi.coherent");
        }
      } else {
        phi = rd.state(*phi_spec, base + ".phi");
      }
      if (phi && ns && phi->dim() < ns->back() + 1) {
        rd.error(base + ".phi", "must live in a Fock truncation >= max(N_list) (dimension " +
                                    std::to_string(phi->dim()) + " < " + std::to_string(ns->back() + 1) + ")");
        return std::nullopt;
      }
      if (!r || !ns || !padding || !phi) return std::nullopt;
      return SigmaParams{*r, std::move(*phi), *ns, static_cast<int>(*padding)};
    }
  }
  return std::nullopt;
}

}  // namespace detail

inline ValidationResult validate(const std::string& config_text) {
  ValidationResult result;
  json doc;
  try {
    doc = json::parse(config_text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line and column.
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, config_text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (config_text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    result.errors.push_back("syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                            ": " + e.what());
    return result;
  }
  if (!doc.is_object()) {
    result.errors.push_back("config: top level must be an object");
    return result;
  }

  detail::Reader rd;
  for (const auto& [key, _] : doc.items()) {
    static const std::vector<std::string> known = {"command", "rule", "parameters", "seed", "output"};
    if (std::find(known.begin(), known.end(), key) == known.end()) rd.warnings.push_back(key + ": unknown field ignored");
  }

  std::optional<Command> cmd;
  if (const json* c = rd.find(doc, "command"); !c || !c->is_string()) {
    rd.error("command", "required string is missing");
  } else if (auto it = command_names().find(c->get<std::string>()); it == command_names().end()) {
    rd.error("command", "unknown command \"" + c->get<std::string>() +
                            "\" (expected tau, steer, jensen, experiment, detect, scan, fock_converge, sigma_affinity)");
  } else {
    cmd = it->second;
  }

  std::optional<PhiRule> rule = PhiRule::identity();
  json rule_spec = json{{"kind", "identity"}};
  if (const json* r = rd.find(doc, "rule")) {
    rule = detail::read_rule(rd, *r, "rule");
    rule_spec = *r;
  } else if (cmd && *cmd != Command::tau && *cmd != Command::steer && *cmd != Command::fock_converge) {
    rd.error("rule", "required for command " + to_string(*cmd));
    rule.reset();
  }
  if (rule && !rule->admissible()) {
    rd.warnings.push_back("rule: " + rule->id() + " is not admissible (" +
                          check_admissibility(*rule, PhiRule::kDefaultGridStep).reason + ")");
  }

  std::uint64_t seed = 0;
  if (const json* s = rd.find(doc, "seed")) {
    if (!s->is_number_unsigned()) rd.error("seed", "must be a nonnegative integer");
    else seed = s->get<std::uint64_t>();
  } else {
    rd.warnings.push_back("seed: missing, defaulting to 0");
  }

  std::optional<std::string> out_path;
  std::optional<OutputFormat> out_format;
  if (const json* o = rd.find(doc, "output")) {
    if (!o->is_object()) {
      rd.error("output", "must be an object with optional \"path\" and \"format\"");
    } else {
      if (const json* p = rd.find(*o, "path")) {
        if (!p->is_string() || p->get<std::string>().empty()) rd.error("output.path", "must be a nonempty string");
        else out_path = p->get<std::string>();
      }
      if (const json* f = rd.find(*o, "format")) {
        if (*f == "csv") out_format = OutputFormat::csv;
        else if (*f == "json") out_format = OutputFormat::json;
        else rd.error("output.format", "must be \"csv\" or \"json\"");
      }
    }
  }

  std::optional<Parameters> params;
  if (cmd) {
    const json* p = rd.find(doc, "parameters");
    const json empty = json::object();
    if (p && !p->is_object()) rd.error("parameters", "must be an object");
    else params = detail::read_parameters(rd, *cmd, p ? *p : empty);
  }

  result.errors = std::move(rd.errors);
  result.warnings = std::move(rd.warnings);
  if (result.errors.empty() && cmd && rule && params) {
    result.config = ScenarioConfig{*cmd, std::move(*rule), rule_spec, std::move(*params), seed, out_path, out_format};
  }
  return result;
}

}  // namespace bornlab::io
