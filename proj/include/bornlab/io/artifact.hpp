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

// Tabular artifacts with a metadata block, written as CSV or JSON.

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace bornlab::io {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Metadata {
  std::string tool_version;
  std::string command;
  std::string rule;
  nlohmann::json rule_spec;
  std::uint64_t seed = 0;
  std::string rng;
};

/// 17 significant digits, '.' separator, locale-independent.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

/// Shortest round-trip form, for human-facing summaries.
inline std::string format_short(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return format_real(v);
        else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return v;
      },
      c);
}

inline nlohmann::json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          return v;
        } else {
          return v;
        }
      },
      c);
}

}  // namespace detail

inline nlohmann::json metadata_json(const Metadata& m) {
  return {{"tool_version", m.tool_version}, {"command", m.command}, {"rule", m.rule_spec},
          {"rule_id", m.rule},              {"seed", m.seed},       {"rng", m.rng}};
}

/// '#'-prefixed metadata lines, then an RFC-4180 header row and data rows
/// (CRLF-free; '\n' line endings).
inline void write_csv(std::ostream& os, const Metadata& m, const Table& t) {
  os << "# tool_version=" << m.tool_version << '\n'
     << "# command=" << m.command << '\n'
     << "# rule=" << m.rule << '\n'
     << "# seed=" << m.seed << '\n'
     << "# rng=" << m.rng << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << detail::csv_escape(t.columns[i]);
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << detail::csv_escape(detail::cell_text(row[i]));
    os << '\n';
  }
}

/// {"metadata", "columns", "rows", "report"}; keys sorted, two-space indent.
inline void write_json(std::ostream& os, const Metadata& m, const Table& t, const nlohmann::json& report) {
  nlohmann::json doc;
  doc["metadata"] = metadata_json(m);
  doc["columns"] = t.columns;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& c : row) r.push_back(detail::cell_json(c));
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  doc["report"] = report.is_null() ? nlohmann::json::object() : report;
  os << doc.dump(2) << '\n';
}

}  // namespace bornlab::io
