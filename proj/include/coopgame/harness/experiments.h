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

#ifndef COOPGAME_HARNESS_EXPERIMENTS_H_
#define COOPGAME_HARNESS_EXPERIMENTS_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coopgame/harness/result_table.h"
#include "coopgame/harness/scenario_io.h"
#include "coopgame/scenario.h"
#include "coopgame/selection.h"
#include "coopgame/solvers.h"

namespace coopgame::harness {

// Long format: one row per (iteration, supplier).
ResultTable TrajectoryTable(const EquilibriumResult& result,
                            const Scenario& scenario,
                            std::optional<int> round = std::nullopt);
// One row per supplier, with the DU aggregates repeated on each row.
ResultTable EquilibriumSummaryTable(const EquilibriumResult& result,
                                    const Scenario& scenario);
ResultTable SelectionTable(const SelectionOutcome& outcome,
                           const Scenario& scenario);
ResultTable StabilityTable(const StabilityReport& report);

struct PriceConvergenceResult {
  ResultTable table;  // iter, q_1, q_2, mode
  EquilibriumResult cig;
  EquilibriumResult icig;
};

// Price trajectories of both solvers from the same starting prices.
PriceConvergenceResult RunPriceConvergence(const Scenario& scenario,
                             const SolverConfig& cig,
                             const SolverConfig& icig);

struct PurchaseConvergenceResult {
  ResultTable workload;  // iter, l_1, l_2
  ResultTable utility;   // iter, u_0, u_1, u_2
  EquilibriumResult icig;
};

PurchaseConvergenceResult RunPurchaseConvergence(const Scenario& scenario,
                               const SolverConfig& icig);

struct SweepPoint {
  double value = 0.0;
  SelectionOutcome outcome;
  // Final allocation per supplier in scenario order, 0 when not selected.
  std::vector<double> alloc;
  std::vector<std::optional<double>> price;
};

struct DistributionSweepResult {
  ResultTable table;  // L_3, l_1, l_2, l_3
  std::vector<SweepPoint> points;
};

// Selection plus equilibrium for each own workload of the third supplier.
// Points run concurrently; rows keep the order of `workloads`.
DistributionSweepResult RunDistributionSweep(const Scenario& scenario,
                        std::span<const double> workloads,
                        const SolverConfig& config);

struct SweepResult {
  ResultTable table;  // <variable>, q_<id>, l_<id> ..., u_0, rounds
  std::vector<SweepPoint> points;
};

// Runs the experiment block of a sweep spec.
SweepResult RunSweep(const ScenarioSpec& spec);

struct ReproConfig {
  // Convergence traces (Figs. 1-3).
  SolverConfig convergence;
  SolverConfig icig;
  // Tightly converged equilibria for the ordering and sweep checks.
  SolverConfig equilibrium;
  std::vector<double> sweep_workloads = {0.0, 0.05, 0.10, 0.15};
};

ReproConfig DefaultReproConfig();

struct ReproCheck {
  std::string name;
  std::string observed;
  bool passed = false;
};

struct ReproReport {
  ResultTable prices;        // price trajectories, both solvers
  ResultTable workloads;     // purchase trajectory
  ResultTable utilities;     // utility trajectory
  ResultTable distribution;  // allocation per swept workload
  ResultTable equilibrium;
  ResultTable summary;  // check, observed, result
  std::vector<ReproCheck> checks;
  bool AllPassed() const;
};

ReproReport RunRepro(const ReproConfig& config = DefaultReproConfig());

// Writes the trajectory, sweep, equilibrium and summary tables plus plot.gp into
// `directory`, which must exist.
void WriteRepro(const ReproReport& report, const std::filesystem::path& directory,
                OutputFormat format);

// gnuplot script for the CSV files written by WriteRepro.
std::string GnuplotScript();

}  // namespace coopgame::harness

#endif  // COOPGAME_HARNESS_EXPERIMENTS_H_
