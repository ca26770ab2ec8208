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

#include "bornlab/io/config.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <string>

namespace bornlab::io {
namespace {

bool any_contains(const std::vector<std::string>& lines, const std::string& needle) {
  return std::any_of(lines.begin(), lines.end(), [&](const std::string& l) { return l.find(needle) != std::string::npos; });
}

TEST(Validate, MinimalJensen) {
  const auto r = validate(R"({"command":"jensen","rule":{"kind":"power","alpha":2},
                              "parameters":{"p1":0,"p2":1,"lambda":0.5},"seed":7})");
  ASSERT_TRUE(r.ok()) << (r.errors.empty() ? "" : r.errors.front());
  EXPECT_TRUE(r.warnings.empty());
  EXPECT_EQ(r.config->command, Command::jensen);
  EXPECT_EQ(r.config->seed, 7u);
  EXPECT_EQ(r.config->rule.id(), "power(alpha=2)");
  const auto& g = std::get<GridParams>(r.config->parameters);
  EXPECT_EQ(g.p1, std::vector<double>{0.0});
  EXPECT_EQ(g.lambda, std::vector<double>{0.5});
}

TEST(Validate, LambdaOutOfRangeNamesFieldAndRange) {
  const auto r = validate(R"({"command":"jensen","rule":{"kind":"identity"},
                              "parameters":{"p1":0,"p2":1,"lambda":1.5},"seed":1})");
  EXPECT_FALSE(r.ok());
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0], "parameters.lambda: must be in (0, 1), got 1.5");
}

TEST(Validate, MissingSeedWarns) {
  const auto r = validate(R"({"command":"scan","rule":{"kind":"identity"}})");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.config->seed, 0u);
  EXPECT_TRUE(any_contains(r.warnings, "seed: missing, defaulting to 0"));
}

TEST(Validate, SyntaxErrorHasPosition) {
  const auto r = validate("{\n  \"command\": \"tau\",\n  \"seed\": 1,,\n}");
  EXPECT_FALSE(r.ok());
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_NE(r.errors[0].find("line 3"), std::string::npos) << r.errors[0];
}

TEST(Validate, ReportsAllErrorsAtOnce) {
  const auto r = validate(R"({"command":"detect","rule":{"kind":"power","alpha":-1},
                              "parameters":{"p1":2,"p2":0.5,"lambda":0.5,"n_samples":0},"seed":-3})");
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(any_contains(r.errors, "rule.alpha"));
  EXPECT_TRUE(any_contains(r.errors, "parameters.p1"));
  EXPECT_TRUE(any_contains(r.errors, "parameters.n_samples"));
  EXPECT_TRUE(any_contains(r.errors, "seed"));
}

TEST(Validate, UnknownCommandAndFields) {
  const auto r = validate(R"({"command":"teleport","colour":"red","seed":0})");
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(any_contains(r.errors, "unknown command \"teleport\""));
  EXPECT_TRUE(any_contains(r.warnings, "colour: unknown field ignored"));
}

TEST(Validate, RuleRequiredWhereItMatters) {
  EXPECT_FALSE(validate(R"({"command":"experiment","parameters":{"p1":0,"p2":1,"lambda":0.5},"seed":0})").ok());
  EXPECT_TRUE(validate(R"({"command":"tau","parameters":{"psi":[1,0],"phi":[0,1]},"seed":0})").ok());
}

TEST(Validate, InadmissibleRuleWarns) {
  const auto r = validate(R"({"command":"jensen","rule":{"kind":"piecewise_affine","knots":[[0,0],[0.3,0.6],[0.6,0.4],[1,1]]},
                              "parameters":{"p1":0,"p2":1,"lambda":0.5},"seed":0})");
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(any_contains(r.warnings, "not admissible"));
}

TEST(Validate, TauStatesAndOptimizer) {
  const auto r = validate(R"({"command":"tau","parameters":{"psi":[1,[0,1]],"phi":[1,0],"tolerance":1e-8,"max_iters":100},"seed":0})");
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(any_contains(r.warnings, "parameters.psi: amplitudes normalized"));
  const auto& t = std::get<TauParams>(r.config->parameters);
  EXPECT_NEAR(std::abs(t.psi[1] - Complex(0, 1.0 / std::sqrt(2.0))), 0.0, 1e-15);
  EXPECT_EQ(t.optimizer.max_iters, 100);
  EXPECT_EQ(t.optimizer.tolerance, 1e-8);

  EXPECT_FALSE(validate(R"({"command":"tau","parameters":{"psi":[1,0,0],"phi":[1,0]}})").ok());
}

TEST(Validate, SteerEnsemble) {
  const auto r = validate(R"({"command":"steer","parameters":{"ensemble":{"members":[
      {"weight":0.5,"amplitudes":[1,0]},{"weight":0.5,"amplitudes":[0,1]}]}},"seed":0})");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(std::get<SteerParams>(r.config->parameters).ensemble.size(), 2u);
  const auto bad = validate(R"({"command":"steer","parameters":{"ensemble":{"members":[
      {"weight":0.7,"amplitudes":[1,0]},{"weight":0.5,"amplitudes":[0,1]}]}},"seed":0})");
  EXPECT_FALSE(bad.ok());
  EXPECT_TRUE(any_contains(bad.errors, "parameters.ensemble"));
}

TEST(Validate, FockAndSigma) {
  const auto f = validate(R"({"command":"fock_converge","parameters":{"alpha":[0.5,-1],"beta":2,"N_list":[5,10,20]},"seed":0})");
  ASSERT_TRUE(f.ok());
  EXPECT_EQ(std::get<FockParams>(f.config->parameters).alpha, Complex(0.5, -1));
  EXPECT_FALSE(validate(R"({"command":"fock_converge","parameters":{"alpha":0,"beta":1,"N_list":[10,5]}})").ok());

  const auto s = validate(R"({"command":"sigma_affinity","rule":{"kind":"power","alpha":2},
      "parameters":{"r":0.5,"phi":{"coherent":{"alpha":1,"N":30}},"N_list":[0,10,30]},"seed":0})");
  ASSERT_TRUE(s.ok()) << s.errors.front();
  EXPECT_EQ(std::get<SigmaParams>(s.config->parameters).phi.dim(), 31);
  EXPECT_EQ(std::get<SigmaParams>(s.config->parameters).padding, kReferencePadding);

  const auto small = validate(R"({"command":"sigma_affinity","rule":{"kind":"identity"},
      "parameters":{"r":0.5,"phi":[1,0],"N_list":[0,5]},"seed":0})");
  EXPECT_FALSE(small.ok());
  const auto guard = validate(R"({"command":"sigma_affinity","rule":{"kind":"identity"},
      "parameters":{"r":0.5,"phi":{"coherent":{"alpha":3,"N":10}},"N_list":[0,5]},"seed":0})");
  EXPECT_FALSE(guard.ok());
}

TEST(Validate, OutputBlock) {
  const auto r = validate(R"({"command":"scan","rule":{"kind":"identity"},"seed":0,
                              "output":{"path":"x.csv","format":"csv"}})");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(*r.config->output_path, "x.csv");
  EXPECT_EQ(*r.config->output_format, OutputFormat::csv);
  EXPECT_FALSE(validate(R"({"command":"scan","rule":{"kind":"identity"},"output":{"format":"xml"}})").ok());
}

TEST(Validate, CustomRule) {
  const auto r = validate(R"({"command":"scan","rule":{"kind":"custom","values":[0,0.25,0.5,0.75,1]},"seed":0})");
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r.config->rule.admissible());
  EXPECT_FALSE(validate(R"({"command":"scan","rule":{"kind":"custom","values":[0,"a",1]}})").ok());
}

TEST(DefaultFormat, TablesCsvReportsJson) {
  EXPECT_EQ(default_format(Command::scan), OutputFormat::json);
  EXPECT_EQ(default_format(Command::detect), OutputFormat::json);
  EXPECT_EQ(default_format(Command::jensen), OutputFormat::csv);
  EXPECT_EQ(default_format(Command::fock_converge), OutputFormat::csv);
}

}  // namespace
}  // namespace bornlab::io
