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

#ifndef COOPGAME_HARNESS_SCENARIO_IO_H_
#define COOPGAME_HARNESS_SCENARIO_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "coopgame/scenario.h"
#include "coopgame/solvers.h"

// Scenario files are YAML with five top-level sections:
//
//   system:     slot_length, bandwidth, noise_power, max_tx_power,
//               pathloss_constant, pathloss_exponent, v, su_cost_baseline
//   du:         position, kappa, cycles_per_mb, f_max, workload
//   su:         list of {id, position, kappa, cycles_per_mb, f_max, p_rec,
//               workload}; position is required
//   solver:     mode, update_order, initial_prices, epsilon, max_iterations,
//               probe_delta, learning_rates
//   experiment: mode, variable, from, to, step
//
// Omitted fields take the reference simulation defaults. Unknown keys are
// rejected.

namespace coopgame::harness {

enum class ExperimentMode { kSolve, kSweep };

struct ExperimentSpec {
  ExperimentMode mode = ExperimentMode::kSolve;
  std::string variable;  // dotted override key, e.g. su.3.workload
  double from = 0.0;
  double to = 0.0;
  double step = 0.0;

  // from, from + step, ..., up to `to` inclusive (empty for kSolve).
  std::vector<double> Points() const;
};

struct ScenarioSpec {
  Scenario scenario;
  SolverConfig solver;
  ExperimentSpec experiment;
};

// Throws Error(kParse) with the line number for malformed YAML, unknown
// keys and wrongly typed values, Error(kValidation)/Error(kGeometry) for
// out-of-range parameters, including sweep points that would break
// own-task feasibility.
ScenarioSpec ParseScenario(std::string_view text);
// Also throws Error(kIo) when the file cannot be read.
ScenarioSpec LoadScenario(const std::filesystem::path& path);

// Canonical YAML text; ParseScenario(SerializeScenario(s)) reproduces s.
std::string SerializeScenario(const ScenarioSpec& spec);

// Sets one field by dotted path ("system.v", "su.2.workload",
// "solver.epsilon") from a YAML scalar or flow sequence, then revalidates.
// A bare key is looked up in system, solver, experiment and du, in that
// order.
void ApplyOverride(ScenarioSpec& spec, std::string_view key,
                   std::string_view value);
// Same with "key=value".
void ApplyOverride(ScenarioSpec& spec, std::string_view assignment);

void ValidateScenarioSpec(const ScenarioSpec& spec);

}  // namespace coopgame::harness

#endif  // COOPGAME_HARNESS_SCENARIO_IO_H_
