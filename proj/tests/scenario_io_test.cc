// Copyright 2026 The coopgame Authors
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

#include "coopgame/harness/scenario_io.h"

#include <string>

#include <gtest/gtest.h>

#include "coopgame/errors.h"

namespace coopgame::harness {
namespace {

constexpr const char* kMinimal = R"(
su:
  - position: [-20, 20]
    workload: 0.15
  - position: [20, 20]
    workload: 0
)";

ErrorCategory CategoryOf(const std::string& text) {
  try {
    ParseScenario(text);
  } catch (const Error& e) {
    return e.category();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return ErrorCategory::kInternal;
}

TEST(ParseScenarioTest, DefaultsApplied) {
  const ScenarioSpec spec = ParseScenario(kMinimal);
  const Scenario& s = spec.scenario;
  EXPECT_EQ(s.system.slot_length, 0.2);
  EXPECT_EQ(s.system.bandwidth, 1.0);
  EXPECT_EQ(s.system.noise_power, 1e-9);
  EXPECT_EQ(s.system.max_tx_power, 0.1);
  EXPECT_EQ(s.system.substitutability, 0.5);
  EXPECT_EQ(s.system.pathloss_constant, 1e-3);
  EXPECT_EQ(s.system.pathloss_exponent, 3.0);
  EXPECT_EQ(s.du.kappa, 1e-28);
  EXPECT_EQ(s.du.cycles_per_mb, 8e8);
  EXPECT_EQ(s.du.f_max, 2.4e9);
  EXPECT_EQ(s.du.workload, 0.6);
  ASSERT_EQ(s.sus.size(), 2u);
  EXPECT_EQ(s.sus[0].id, 1);
  EXPECT_EQ(s.sus[1].id, 2);
  EXPECT_EQ(s.sus[0].params.f_max, 1.5e9);
  EXPECT_EQ(s.sus[0].params.p_rec, 0.01);
  EXPECT_EQ(s.sus[0].params.kappa, 1e-28);
  EXPECT_EQ(s.sus[0].params.workload, 0.15);
  EXPECT_EQ(s.sus[1].params.position.x, 20.0);
  EXPECT_EQ(spec.solver.epsilon, 1e-3);
  EXPECT_EQ(spec.solver.learning_rates, std::vector<double>{0.2});
  EXPECT_EQ(spec.solver.probe_delta, 1e-5);
  EXPECT_EQ(spec.solver.max_iterations, 500);
}

TEST(ParseScenarioTest, RoundTripIsIdempotent) {
  const std::string once = SerializeScenario(ParseScenario(kMinimal));
  const std::string twice = SerializeScenario(ParseScenario(once));
  EXPECT_EQ(once, twice);
  const std::string sweep = std::string(kMinimal) + R"(
solver:
  mode: icig
  update_order: gauss_seidel
  initial_prices: [0.3, 0.25]
  learning_rates: [0.1, 0.2]
experiment:
  mode: sweep
  variable: su.2.workload
  from: 0
  to: 0.1
  step: 0.05
)";
  const ScenarioSpec spec = ParseScenario(sweep);
  EXPECT_EQ(spec.solver.mode, SolverMode::kIcig);
  EXPECT_EQ(spec.solver.order, UpdateOrder::kGaussSeidel);
  const std::string normal = SerializeScenario(spec);
  EXPECT_EQ(SerializeScenario(ParseScenario(normal)), normal);
}

TEST(ParseScenarioTest, Errors) {
  EXPECT_EQ(CategoryOf("su: []\n"), ErrorCategory::kValidation);
  EXPECT_EQ(CategoryOf("system:\n  v: 0.5\n"), ErrorCategory::kValidation);
  EXPECT_EQ(CategoryOf(std::string(kMinimal) + "system:\n  speed: 3\n"),
            ErrorCategory::kParse);
  EXPECT_EQ(CategoryOf(std::string(kMinimal) + "system:\n  v: fast\n"),
            ErrorCategory::kParse);
  EXPECT_EQ(CategoryOf("su:\n  - workload: 0.1\n"), ErrorCategory::kParse);
  EXPECT_EQ(CategoryOf("su: [\n"), ErrorCategory::kParse);
  EXPECT_EQ(CategoryOf(std::string(kMinimal) + "system:\n  v: 1.5\n"),
            ErrorCategory::kValidation);
  EXPECT_EQ(CategoryOf("su:\n  - position: [0, 0]\n"),
            ErrorCategory::kGeometry);
}

TEST(ParseScenarioTest, ParseErrorsCarryLineNumbers) {
  try {
    ParseScenario(std::string(kMinimal) + "system:\n  speed: 3\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 8"), std::string::npos)
        << e.what();
    EXPECT_NE(std::string(e.what()).find("speed"), std::string::npos);
  }
}

TEST(ParseScenarioTest, InfeasibleSweepRejectedAtLoad) {
  const std::string text = std::string(kMinimal) + R"(
experiment:
  mode: sweep
  variable: su.1.workload
  from: 0.3
  to: 0.5
  step: 0.1
)";
  EXPECT_EQ(CategoryOf(text), ErrorCategory::kValidation);
}

TEST(ApplyOverrideTest, DottedAndBareKeys) {
  ScenarioSpec spec = ParseScenario(kMinimal);
  ApplyOverride(spec, "system.v=0.3");
  EXPECT_EQ(spec.scenario.system.substitutability, 0.3);
  ApplyOverride(spec, "v=0");
  EXPECT_EQ(spec.scenario.system.substitutability, 0.0);
  ApplyOverride(spec, "su.2.workload=0.1");
  EXPECT_EQ(spec.scenario.sus[1].params.workload, 0.1);
  ApplyOverride(spec, "su.1.position=[-10, 5]");
  EXPECT_EQ(spec.scenario.sus[0].params.position.x, -10.0);
  ApplyOverride(spec, "epsilon=1e-6");
  EXPECT_EQ(spec.solver.epsilon, 1e-6);
  ApplyOverride(spec, "solver.learning_rates=[0.1, 0.3]");
  EXPECT_EQ(spec.solver.learning_rates, (std::vector<double>{0.1, 0.3}));
  ApplyOverride(spec, "du.workload=0.4");
  EXPECT_EQ(spec.scenario.du.workload, 0.4);
}

TEST(ApplyOverrideTest, Rejections) {
  ScenarioSpec spec = ParseScenario(kMinimal);
  EXPECT_THROW(ApplyOverride(spec, "system.speed=1"), Error);
  EXPECT_THROW(ApplyOverride(spec, "su.9.workload=0.1"), Error);
  EXPECT_THROW(ApplyOverride(spec, "nonsense"), Error);
  EXPECT_THROW(ApplyOverride(spec, "system.v=2"), Error);
  EXPECT_EQ(spec.scenario.system.substitutability, 0.5);
}

TEST(ExperimentSpecTest, Points) {
  ExperimentSpec e;
  e.mode = ExperimentMode::kSweep;
  e.from = 0;
  e.to = 0.15;
  e.step = 0.05;
  const std::vector<double> p = e.Points();
  ASSERT_EQ(p.size(), 4u);
  EXPECT_DOUBLE_EQ(p[3], 0.15);
}

TEST(LoadScenarioTest, MissingFileIsIoError) {
  try {
    LoadScenario("/nonexistent/scenario.yaml");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kIo);
  }
}

}  // namespace
}  // namespace coopgame::harness
