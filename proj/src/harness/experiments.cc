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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>

#include <fmt/format.h>

#include "coopgame/errors.h"

namespace coopgame::harness {
namespace {

long long Int(std::size_t x) { return static_cast<long long>(x); }

std::string Tag(const Scenario& scenario, const ActiveSet& active,
                std::size_t n, std::string_view prefix) {
  return fmt::format("{}_{}", prefix, scenario.sus.at(active.at(n)).id);
}

// Runs `job` for every point concurrently and returns results in input order.
template <typename T>
std::vector<T> ParallelMap(std::size_t count,
                           const std::function<T(std::size_t)>& job) {
  std::vector<std::future<T>> futures;
  futures.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    futures.push_back(std::async(std::launch::async, job, i));
  }
  std::vector<T> results;
  results.reserve(count);
  for (auto& f : futures) results.push_back(f.get());
  return results;
}

SweepPoint RunPoint(const Scenario& scenario, const SolverConfig& config,
                    double value) {
  SweepPoint point;
  point.value = value;
  point.outcome =
      SelectSupplyDevices(scenario, AllSupplyDevices(scenario), config);
  point.alloc.assign(scenario.sus.size(), 0.0);
  point.price.assign(scenario.sus.size(), std::nullopt);
  if (point.outcome.final_equilibrium) {
    const EquilibriumResult& ne = *point.outcome.final_equilibrium;
    for (std::size_t n = 0; n < ne.active.size(); ++n) {
      point.alloc[ne.active[n]] = ne.final_profile.alloc[n];
      point.price[ne.active[n]] = ne.final_profile.price[n];
    }
  }
  return point;
}

std::string Fixed(double x) { return fmt::format("{:.6g}", x); }

}  // namespace

ResultTable TrajectoryTable(const EquilibriumResult& result,
                            const Scenario& scenario,
                            std::optional<int> round) {
  std::vector<Column> columns;
  if (round) columns.push_back({"round", ""});
  for (Column c : std::vector<Column>{{"iteration", ""},
                                      {"su_id", ""},
                                      {"price", "J/Mb"},
                                      {"allocation", "Mb"},
                                      {"utility_su", "J"},
                                      {"utility_du", "J"},
                                      {"gradient", "Mb"}}) {
    columns.push_back(std::move(c));
  }
  ResultTable table(std::move(columns));
  for (const IterationRecord& record : result.trajectory) {
    for (std::size_t n = 0; n < result.active.size(); ++n) {
      std::vector<Cell> row;
      if (round) row.emplace_back(static_cast<long long>(*round));
      row.emplace_back(static_cast<long long>(record.iteration));
      row.emplace_back(
          static_cast<long long>(scenario.sus.at(result.active[n]).id));
      row.emplace_back(record.profile.price[n]);
      row.emplace_back(record.profile.alloc[n]);
      row.emplace_back(record.su_utility[n]);
      row.emplace_back(record.du_utility);
      row.emplace_back(record.gradient[n]);
      table.AddRow(std::move(row));
    }
  }
  return table;
}

ResultTable EquilibriumSummaryTable(const EquilibriumResult& result,
                                    const Scenario& scenario) {
  ResultTable table({{"su_id", ""},
                     {"price", "J/Mb"},
                     {"allocation", "Mb"},
                     {"utility_su", "J"},
                     {"utility_du", "J"},
                     {"mode", ""},
                     {"iterations", ""},
                     {"converged", ""},
                     {"stop_reason", ""},
                     {"spectral_radius", ""}});
  for (std::size_t n = 0; n < result.active.size(); ++n) {
    Cell radius = std::string();
    if (result.stability) radius = result.stability->spectral_radius;
    table.AddRow({static_cast<long long>(scenario.sus.at(result.active[n]).id),
                  result.final_profile.price[n], result.final_profile.alloc[n],
                  result.utilities.su[n], result.utilities.du,
                  std::string(ModeName(result.mode)),
                  static_cast<long long>(result.iterations_used),
                  std::string(result.converged ? "true" : "false"),
                  std::string(StopReasonName(result.stop_reason)), radius});
  }
  return table;
}

ResultTable SelectionTable(const SelectionOutcome& outcome,
                           const Scenario& scenario) {
  ResultTable table({{"round", ""},
                     {"su_id", ""},
                     {"price", "J/Mb"},
                     {"allocation", "Mb"},
                     {"status", ""},
                     {"detail", ""}});
  for (const Removal& r : outcome.prefiltered) {
    table.AddRow({0LL, static_cast<long long>(scenario.sus.at(r.su_index).id),
                  std::string(), std::string(),
                  std::string(RemovalReasonName(r.reason)), r.detail});
  }
  for (const SelectionRound& round : outcome.rounds) {
    const EquilibriumResult& ne = round.equilibrium;
    for (std::size_t n = 0; n < ne.active.size(); ++n) {
      std::string status = "kept";
      std::string detail;
      for (const Removal& r : round.removed) {
        if (r.su_index == ne.active[n]) {
          status = std::string(RemovalReasonName(r.reason));
          detail = r.detail;
        }
      }
      table.AddRow({static_cast<long long>(round.round),
                    static_cast<long long>(scenario.sus.at(ne.active[n]).id),
                    ne.final_profile.price[n], ne.final_profile.alloc[n],
                    status, detail});
    }
  }
  return table;
}

ResultTable StabilityTable(const StabilityReport& report) {
  ResultTable table({{"j12", ""},
                     {"j21", ""},
                     {"eigenvalue_1_re", ""},
                     {"eigenvalue_1_im", ""},
                     {"eigenvalue_2_re", ""},
                     {"eigenvalue_2_im", ""},
                     {"spectral_radius", ""},
                     {"regime_1", ""},
                     {"regime_2", ""}});
  auto regime = [](int r) -> Cell {
    return std::string(r == 0 ? "floor" : r == 1 ? "interior" : "ceiling");
  };
  table.AddRow({report.j12, report.j21, report.eigenvalues[0].real(),
                report.eigenvalues[0].imag(), report.eigenvalues[1].real(),
                report.eigenvalues[1].imag(), report.spectral_radius,
                regime(report.regime[0]), regime(report.regime[1])});
  return table;
}

PriceConvergenceResult RunPriceConvergence(const Scenario& scenario, const SolverConfig& cig,
                             const SolverConfig& icig) {
  const ActiveSet active = AllSupplyDevices(scenario);
  if (active.size() != 2) {
    throw Error(ErrorCategory::kUnsupported,
                "the price convergence experiment needs two suppliers");
  }
  SolverConfig cig_config = cig;
  cig_config.mode = SolverMode::kCig;
  SolverConfig icig_config = icig;
  icig_config.mode = SolverMode::kIcig;
  if (icig_config.initial_prices.empty()) {
    icig_config.initial_prices = cig_config.initial_prices;
  }

  PriceConvergenceResult result;
  result.cig = SolveCig(scenario, active, cig_config);
  result.icig = SolveIcig(scenario, active, icig_config);
  result.table = ResultTable({{"iter", ""},
                              {Tag(scenario, active, 0, "q"), "J/Mb"},
                              {Tag(scenario, active, 1, "q"), "J/Mb"},
                              {"mode", ""}});
  for (const EquilibriumResult* run : {&result.cig, &result.icig}) {
    const std::string mode(ModeName(run->mode));
    result.table.AddRow({0LL, run->initial_profile.price[0],
                         run->initial_profile.price[1], mode});
    for (const IterationRecord& r : run->trajectory) {
      result.table.AddRow({static_cast<long long>(r.iteration),
                           r.profile.price[0], r.profile.price[1], mode});
    }
  }
  return result;
}

PurchaseConvergenceResult RunPurchaseConvergence(const Scenario& scenario,
                               const SolverConfig& icig) {
  const ActiveSet active = AllSupplyDevices(scenario);
  if (active.size() != 2) {
    throw Error(ErrorCategory::kUnsupported,
                "the workload/utility experiment needs two suppliers");
  }
  SolverConfig config = icig;
  config.mode = SolverMode::kIcig;
  PurchaseConvergenceResult result;
  result.icig = SolveIcig(scenario, active, config);
  result.workload = ResultTable({{"iter", ""},
                                 {Tag(scenario, active, 0, "l"), "Mb"},
                                 {Tag(scenario, active, 1, "l"), "Mb"}});
  result.utility = ResultTable({{"iter", ""},
                                {"u_0", "J"},
                                {Tag(scenario, active, 0, "u"), "J"},
                                {Tag(scenario, active, 1, "u"), "J"}});
  const UtilityReport start =
      EvaluateUtilities(result.icig.initial_profile, scenario, active);
  result.workload.AddRow({0LL, result.icig.initial_profile.alloc[0],
                          result.icig.initial_profile.alloc[1]});
  result.utility.AddRow({0LL, start.du, start.su[0], start.su[1]});
  for (const IterationRecord& r : result.icig.trajectory) {
    const auto iter = static_cast<long long>(r.iteration);
    result.workload.AddRow({iter, r.profile.alloc[0], r.profile.alloc[1]});
    result.utility.AddRow({iter, r.du_utility, r.su_utility[0],
                           r.su_utility[1]});
  }
  return result;
}

DistributionSweepResult RunDistributionSweep(const Scenario& scenario,
                        std::span<const double> workloads,
                        const SolverConfig& config) {
  if (scenario.sus.size() != 3) {
    throw Error(ErrorCategory::kUnsupported,
                "the workload distribution sweep needs three suppliers");
  }
  std::vector<Scenario> variants;
  for (double w : workloads) {
    Scenario s = scenario;
    s.sus[2].params.workload = w;
    ValidateScenario(s);
    variants.push_back(std::move(s));
  }
  DistributionSweepResult result;
  result.points = ParallelMap<SweepPoint>(
      variants.size(), [&](std::size_t i) {
        return RunPoint(variants[i], config, workloads[i]);
      });
  const ActiveSet all = AllSupplyDevices(scenario);
  result.table = ResultTable({{Tag(scenario, all, 2, "L"), "Mb"},
                              {Tag(scenario, all, 0, "l"), "Mb"},
                              {Tag(scenario, all, 1, "l"), "Mb"},
                              {Tag(scenario, all, 2, "l"), "Mb"}});
  for (const SweepPoint& p : result.points) {
    result.table.AddRow({p.value, p.alloc[0], p.alloc[1], p.alloc[2]});
  }
  return result;
}

SweepResult RunSweep(const ScenarioSpec& spec) {
  if (spec.experiment.mode != ExperimentMode::kSweep) {
    throw Error(ErrorCategory::kValidation,
                "scenario has no sweep experiment (experiment.mode: sweep)");
  }
  const std::vector<double> values = spec.experiment.Points();
  std::vector<ScenarioSpec> variants;
  for (double v : values) {
    ScenarioSpec s = spec;
    s.experiment.mode = ExperimentMode::kSolve;
    ApplyOverride(s, spec.experiment.variable, fmt::format("{}", v));
    variants.push_back(std::move(s));
  }
  SweepResult result;
  result.points = ParallelMap<SweepPoint>(variants.size(), [&](std::size_t i) {
    return RunPoint(variants[i].scenario, variants[i].solver, values[i]);
  });

  const Scenario& base = spec.scenario;
  const ActiveSet all = AllSupplyDevices(base);
  std::vector<Column> columns = {{spec.experiment.variable, ""}};
  for (std::size_t n = 0; n < all.size(); ++n) {
    columns.push_back({Tag(base, all, n, "q"), "J/Mb"});
  }
  for (std::size_t n = 0; n < all.size(); ++n) {
    columns.push_back({Tag(base, all, n, "l"), "Mb"});
  }
  columns.push_back({"u_0", "J"});
  columns.push_back({"selected", ""});
  columns.push_back({"rounds", ""});
  result.table = ResultTable(std::move(columns));
  for (const SweepPoint& p : result.points) {
    std::vector<Cell> row = {p.value};
    for (const auto& q : p.price) {
      row.push_back(q ? Cell(*q) : Cell(std::string()));
    }
    for (double l : p.alloc) row.push_back(l);
    const auto& ne = p.outcome.final_equilibrium;
    row.push_back(ne ? Cell(ne->utilities.du) : Cell(std::string()));
    row.push_back(Int(p.outcome.active.size()));
    row.push_back(Int(p.outcome.rounds.size()));
    result.table.AddRow(std::move(row));
  }
  return result;
}

ReproConfig DefaultReproConfig() {
  ReproConfig config;
  config.convergence.mode = SolverMode::kCig;
  config.convergence.epsilon = 1e-3;
  config.icig.mode = SolverMode::kIcig;
  config.icig.epsilon = 1e-3;
  config.icig.learning_rates = {0.2};
  config.icig.probe_delta = 1e-5;
  config.equilibrium.mode = SolverMode::kCig;
  config.equilibrium.epsilon = 1e-12;
  config.equilibrium.max_iterations = 1000;
  return config;
}

bool ReproReport::AllPassed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ReproCheck& c) { return c.passed; });
}

ReproReport RunRepro(const ReproConfig& config) {
  ReproReport report;
  const Scenario two = ReferencePairScenario();
  const ActiveSet pair = AllSupplyDevices(two);

  const PriceConvergenceResult convergence = RunPriceConvergence(two, config.convergence, config.icig);
  const PurchaseConvergenceResult purchases = RunPurchaseConvergence(two, config.icig);
  const EquilibriumResult ne = SolveCig(two, pair, config.equilibrium);
  const DistributionSweepResult sweep = RunDistributionSweep(ReferenceTripleScenario(0.0),
                                       config.sweep_workloads,
                                       config.equilibrium);
  report.prices = convergence.table;
  report.workloads = purchases.workload;
  report.utilities = purchases.utility;
  report.distribution = sweep.table;
  report.equilibrium = EquilibriumSummaryTable(ne, two);

  auto add = [&](std::string name, std::string observed, bool passed) {
    report.checks.push_back({std::move(name), std::move(observed), passed});
  };

  add("cig_converges_within_15_iterations",
      fmt::format("{} iterations, converged={}", convergence.cig.iterations_used,
                  convergence.cig.converged),
      convergence.cig.converged && convergence.cig.iterations_used <= 15);

  double icig_gap = 0.0;
  for (std::size_t n = 0; n < 2; ++n) {
    const double reference = convergence.cig.final_profile.price[n];
    icig_gap = std::max(icig_gap,
                        std::abs(convergence.icig.final_profile.price[n] - reference) /
                            std::abs(reference));
  }
  add("icig_reaches_cig_prices",
      fmt::format("{} iterations, relative gap {:.3g}",
                  convergence.icig.iterations_used, icig_gap),
      convergence.icig.converged && convergence.icig.iterations_used <= 100 &&
          icig_gap <= 1e-2);

  const auto& q = ne.final_profile.price;
  const auto& l = ne.final_profile.alloc;
  const auto& u = ne.utilities;
  add("su2_price_below_su1", fmt::format("q_1={} q_2={}", Fixed(q[0]), Fixed(q[1])),
      q[1] < q[0]);
  add("su2_accepts_more_work",
      fmt::format("l_1={} l_2={}", Fixed(l[0]), Fixed(l[1])), l[1] > l[0]);
  add("all_utilities_positive",
      fmt::format("u_0={} u_1={} u_2={}", Fixed(u.du), Fixed(u.su[0]),
                  Fixed(u.su[1])),
      u.du > 0 && u.su[0] > 0 && u.su[1] > 0);
  add("su2_utility_above_su1",
      fmt::format("u_1={} u_2={}", Fixed(u.su[0]), Fixed(u.su[1])),
      u.su[1] > u.su[0]);

  bool su3_down = true;
  bool others_up = true;
  for (std::size_t i = 1; i < sweep.points.size(); ++i) {
    const auto& prev = sweep.points[i - 1].alloc;
    const auto& cur = sweep.points[i].alloc;
    su3_down = su3_down && cur[2] <= prev[2];
    others_up = others_up && cur[0] >= prev[0] && cur[1] >= prev[1];
  }
  std::string l3_trace;
  for (const SweepPoint& p : sweep.points) {
    l3_trace += (l3_trace.empty() ? "" : " ") + Fixed(p.alloc[2]);
  }
  add("su3_allocation_non_increasing", "l_3: " + l3_trace, su3_down);
  add("su1_su2_allocation_non_decreasing",
      others_up ? "monotone" : "not monotone", others_up);

  std::optional<double> gap;
  for (const SweepPoint& p : sweep.points) {
    if (std::abs(p.value - 0.1) < 1e-12) {
      gap = std::abs(p.alloc[2] - p.alloc[1]);
    }
  }
  add("symmetric_suppliers_equal_allocation",
      gap ? fmt::format("|l_3 - l_2| = {:.3g}", *gap) : "point 0.1 not swept",
      gap && *gap <= 1e-6);

  report.summary = ResultTable({{"check", ""}, {"observed", ""}, {"result", ""}});
  for (const ReproCheck& c : report.checks) {
    report.summary.AddRow(
        {c.name, c.observed, std::string(c.passed ? "pass" : "fail")});
  }
  return report;
}

void WriteRepro(const ReproReport& report,
                const std::filesystem::path& directory, OutputFormat format) {
  const std::string ext = format == OutputFormat::kCsv ? ".csv" : ".txt";
  const std::pair<const char*, const ResultTable*> tables[] = {
      {"price_convergence", &report.prices},       {"workload_convergence", &report.workloads},
      {"utility_convergence", &report.utilities},    {"workload_distribution", &report.distribution},
      {"equilibrium", &report.equilibrium}, {"summary", &report.summary}};
  for (const auto& [name, table] : tables) {
    EmitResults(*table, format, directory / (std::string(name) + ext));
  }
  const std::filesystem::path script = directory / "plot.gp";
  std::ofstream out(script, std::ios::binary);
  out << GnuplotScript();
  if (!out) {
    throw Error(ErrorCategory::kIo,
                fmt::format("cannot write {}", script.string()));
  }
}

std::string GnuplotScript() {
  return R"gp(set datafile separator ","
set terminal pngcairo size 800,500
set key outside

set output "price_convergence.png"
set xlabel "iteration"
set ylabel "price (J/Mb)"
plot "price_convergence.csv" skip 2 using 1:(strcol(4) eq "cig" ? $2 : NaN) with linespoints title "q_1 CIG", \
     "" skip 2 using 1:(strcol(4) eq "cig" ? $3 : NaN) with linespoints title "q_2 CIG", \
     "" skip 2 using 1:(strcol(4) eq "icig" ? $2 : NaN) with lines title "q_1 ICIG", \
     "" skip 2 using 1:(strcol(4) eq "icig" ? $3 : NaN) with lines title "q_2 ICIG"

set output "workload_convergence.png"
set ylabel "offloaded workload (Mb)"
plot for [c=2:3] "workload_convergence.csv" skip 2 using 1:c with lines title columnhead(c)

set output "utility_convergence.png"
set ylabel "utility (J)"
plot for [c=2:4] "utility_convergence.csv" skip 2 using 1:c with lines title columnhead(c)

set output "workload_distribution.png"
set xlabel "SU 3 own workload (Mb)"
set ylabel "offloaded workload (Mb)"
set style data histogram
set style fill solid
plot for [c=2:4] "workload_distribution.csv" skip 2 using c:xtic(1) title columnhead(c)
)gp";
}

}  // namespace coopgame::harness
