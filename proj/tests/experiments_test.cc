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

#include "coopgame/harness/experiments.h"

#include <cmath>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "coopgame/errors.h"
#include "test_support.h"

namespace coopgame::harness {
namespace {

namespace ref = testing::reference;

std::vector<std::string> ColumnNames(const ResultTable& t) {
  std::vector<std::string> names;
  for (const Column& c : t.columns()) names.push_back(c.name);
  return names;
}

TEST(PriceConvergenceTest, SchemaAndOrdering) {
  const ReproConfig config = DefaultReproConfig();
  const PriceConvergenceResult r = RunPriceConvergence(ReferencePairScenario(),
                                         config.convergence, config.icig);
  EXPECT_EQ(ColumnNames(r.table),
            (std::vector<std::string>{"iter", "q_1", "q_2", "mode"}));
  EXPECT_EQ(r.table.size(),
            r.cig.trajectory.size() + r.icig.trajectory.size() + 2);
  EXPECT_LE(r.cig.iterations_used, 15);
  EXPECT_LT(r.cig.final_profile.price[1], r.cig.final_profile.price[0]);
}

TEST(PriceConvergenceTest, ThreeSuppliersUnsupported) {
  const ReproConfig config = DefaultReproConfig();
  EXPECT_THROW(RunPriceConvergence(ReferenceTripleScenario(0.0), config.convergence,
                                 config.icig),
               Error);
}

TEST(PurchaseConvergenceTest, WorkloadAndUtilityTables) {
  const PurchaseConvergenceResult r =
      RunPurchaseConvergence(ReferencePairScenario(), DefaultReproConfig().icig);
  EXPECT_EQ(ColumnNames(r.workload),
            (std::vector<std::string>{"iter", "l_1", "l_2"}));
  EXPECT_EQ(ColumnNames(r.utility),
            (std::vector<std::string>{"iter", "u_0", "u_1", "u_2"}));
  const std::size_t last = r.workload.size() - 1;
  EXPECT_GT(r.workload.Number(last, "l_2"), r.workload.Number(last, "l_1"));
  EXPECT_GT(r.utility.Number(last, "u_0"), 0.0);
  EXPECT_GT(r.utility.Number(last, "u_2"), r.utility.Number(last, "u_1"));
  EXPECT_GT(r.utility.Number(last, "u_1"), 0.0);
}

TEST(DistributionSweepTest, MatchesReferenceSweep) {
  SolverConfig tight;
  tight.epsilon = 1e-12;
  tight.max_iterations = 1000;
  const std::vector<double> w = {0.0, 0.05, 0.10, 0.15};
  const DistributionSweepResult r = RunDistributionSweep(ReferenceTripleScenario(0.0), w, tight);
  EXPECT_EQ(ColumnNames(r.table),
            (std::vector<std::string>{"L_3", "l_1", "l_2", "l_3"}));
  ASSERT_EQ(r.points.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(r.table.Number(i, "L_3"), w[i]);
    for (std::size_t n = 0; n < 3; ++n) {
      EXPECT_NEAR(r.points[i].alloc[n], ref::kSweepAlloc[i][n], 1e-10);
    }
  }
}

TEST(DistributionSweepTest, InfeasibleWorkloadRejectedBeforeRunning) {
  const std::vector<double> w = {0.0, 0.5};
  EXPECT_THROW(RunDistributionSweep(ReferenceTripleScenario(0.0), w, SolverConfig{}),
               Error);
}

TEST(SweepTest, GenericSweepTable) {
  ScenarioSpec spec;
  spec.scenario = ReferenceTripleScenario(0.0);
  spec.solver.epsilon = 1e-12;
  spec.solver.max_iterations = 1000;
  spec.experiment = {ExperimentMode::kSweep, "su.3.workload", 0.0, 0.15, 0.05};
  const SweepResult r = RunSweep(spec);
  ASSERT_EQ(r.table.size(), 4u);
  EXPECT_EQ(r.table.columns().front().name, "su.3.workload");
  EXPECT_NEAR(r.table.Number(2, "l_3"), r.table.Number(2, "l_2"), 1e-9);
  spec.experiment.mode = ExperimentMode::kSolve;
  EXPECT_THROW(RunSweep(spec), Error);
}

TEST(ReproTest, AllChecksPassAndOutputIsStable) {
  const ReproReport a = RunRepro();
  EXPECT_TRUE(a.AllPassed());
  EXPECT_EQ(a.checks.size(), 9u);
  const ReproReport b = RunRepro();
  EXPECT_EQ(ToCsv(a.prices), ToCsv(b.prices));
  EXPECT_EQ(ToCsv(a.distribution), ToCsv(b.distribution));
  EXPECT_EQ(ToCsv(a.summary), ToCsv(b.summary));
}

TEST(ReproTest, WritesAllFiles) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "coopgame_repro_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  WriteRepro(RunRepro(), dir, OutputFormat::kCsv);
  for (const char* name :
       {"price_convergence.csv", "workload_convergence.csv", "utility_convergence.csv",
        "workload_distribution.csv", "equilibrium.csv", "summary.csv", "plot.gp"}) {
    EXPECT_TRUE(fs::exists(dir / name)) << name;
  }
  fs::remove_all(dir);
}

TEST(TablesTest, TrajectoryAndStability) {
  const Scenario s = ReferencePairScenario();
  const EquilibriumResult r =
      SolveCig(s, AllSupplyDevices(s), SolverConfig{});
  const ResultTable t = TrajectoryTable(r, s, 3);
  EXPECT_EQ(ColumnNames(t),
            (std::vector<std::string>{"round", "iteration", "su_id", "price",
                                      "allocation", "utility_su",
                                      "utility_du", "gradient"}));
  EXPECT_EQ(t.size(), 2 * r.trajectory.size());
  const ResultTable st = StabilityTable(*r.stability);
  EXPECT_LT(st.Number(0, "spectral_radius"), 1.0);
  const ResultTable summary = EquilibriumSummaryTable(r, s);
  EXPECT_EQ(summary.size(), 2u);
}

}  // namespace
}  // namespace coopgame::harness
