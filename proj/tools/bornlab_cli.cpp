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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "bornlab/io/config.hpp"
#include "bornlab/io/runner.hpp"

#ifndef BORNLAB_VERSION
#define BORNLAB_VERSION "0.0.0"
#endif

namespace io = bornlab::io;

int main(int argc, char** argv) {
  CLI::App app{"bornlab: steering, transition-probability and probability-rule rigidity experiments"};
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_path;
  std::optional<std::string> format_name;
  bool quiet = false;
  app.add_option("--config", config_path, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Seed (overrides the config)");
  app.add_option("--out", out_path, "Artifact path (overrides the config)");
  app.add_option("--format", format_name, "Artifact format (overrides the config)")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--quiet", quiet, "Suppress the summary line");
  app.set_version_flag("--version", BORNLAB_VERSION);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return io::kExitConfigError;
  }

  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << config_path << '\n';
    return io::kExitConfigError;
  }
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  io::ValidationResult v = io::validate(text);
  for (const auto& w : v.warnings) {
    if (seed && w.rfind("seed:", 0) == 0) continue;
    std::cerr << "warning: " << w << '\n';
  }
  if (!v.ok()) {
    for (const auto& e : v.errors) std::cerr << "error: " << e << '\n';
    return io::kExitConfigError;
  }
  io::ScenarioConfig cfg = std::move(*v.config);
  if (seed) cfg.seed = *seed;

  io::OutputFormat format = cfg.output_format.value_or(io::default_format(cfg.command));
  if (format_name) format = *format_name == "csv" ? io::OutputFormat::csv : io::OutputFormat::json;
  const std::string path =
      out_path.value_or(cfg.output_path.value_or(io::to_string(cfg.command) + "." + io::to_string(format)));

  io::RunOutput result;
  try {
    result = io::run(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return io::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: numerical failure: " << e.what() << '\n';
    return io::kExitNumericalFailure;
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::cerr << "error: cannot write " << path << '\n';
    return io::kExitConfigError;
  }
  io::write_artifact(out, format, io::make_metadata(cfg, BORNLAB_VERSION), result);
  out.close();

  if (!quiet) std::cout << result.summary << '\n';
  if (result.exit_code == io::kExitNumericalFailure) {
    std::cerr << "error: numerical failure; best-effort artifact written to " << path << '\n';
  }
  return result.exit_code;
}
