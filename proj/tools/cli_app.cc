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

#include "cli_app.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "coopgame/errors.h"
#include "coopgame/harness/experiments.h"
#include "coopgame/harness/result_table.h"
#include "coopgame/harness/scenario_io.h"
#include "coopgame/selection.h"
#include "coopgame/solvers.h"

namespace coopgame::cli {
namespace {

namespace fs = std::filesystem;
using harness::OutputFormat;
using harness::ResultTable;
using harness::ScenarioSpec;

constexpr const char* kExitCodeHelp =
    "Exit codes: 0 success, 1 reproduction check failed, 2 usage error,\n"
    "3 scenario/validation/unsupported case, 4 solver did not converge,\n"
    "5 I/O error, 6 internal error.\n"
    "Scenario paths that do not exist are also looked up in $" 
    "COOPGAME_SCENARIO_DIR.";

int ExitCodeFor(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kIo: return kExitIo;
    case ErrorCategory::kSolver: return kExitNotConverged;
    case ErrorCategory::kInternal: return kExitInternal;
    default: return kExitScenario;
  }
}

fs::path ResolveScenario(const std::string& name) {
  const fs::path direct(name);
  if (fs::exists(direct) || direct.is_absolute()) return direct;
  if (const char* dir = std::getenv(kScenarioDirEnv); dir && *dir) {
    fs::path candidate = fs::path(dir) / direct;
    if (fs::exists(candidate)) return candidate;
    if (!candidate.has_extension()) {
      candidate += ".yaml";
      if (fs::exists(candidate)) return candidate;
    }
  }
  return direct;
}

class Runner {
 public:
  Runner(const Options& options, std::ostream& out, std::ostream& err)
      : options_(options), out_(out), err_(err) {
    format_ = *harness::ParseOutputFormat(options.format);
  }

  ScenarioSpec Load() const {
    if (options_.scenario.empty()) {
      throw Error(ErrorCategory::kValidation, "--scenario is required");
    }
    ScenarioSpec spec = harness::LoadScenario(ResolveScenario(options_.scenario));
    for (const std::string& o : options_.overrides) {
      harness::ApplyOverride(spec, o);
    }
    if (!options_.quiet) {
      err_ << "# effective scenario\n" << harness::SerializeScenario(spec);
    }
    return spec;
  }

  void Emit(const ResultTable& table) const {
    if (options_.output.empty() || options_.output == "-") {
      harness::EmitResults(table, format_, out_);
    } else {
      harness::EmitResults(table, format_, fs::path(options_.output));
    }
  }

  void EmitTrajectory(const ResultTable& table) const {
    if (!options_.trajectory.empty()) {
      harness::EmitResults(table, format_, fs::path(options_.trajectory));
    }
  }

  int ReportConvergence(const EquilibriumResult& result) const {
    if (result.converged) return kExitOk;
    err_ << fmt::format(
        "error: solver did not converge after {} iterations (epsilon {}); "
        "last price change {:.3g}\n",
        result.iterations_used, options_epsilon_,
        result.trajectory.empty() ? 0.0
                                  : result.trajectory.back().max_price_change);
    return kExitNotConverged;
  }

  int Solve(SolverMode mode) {
    ScenarioSpec spec = Load();
    spec.solver.mode = mode;
    options_epsilon_ = spec.solver.epsilon;
    const EquilibriumResult result = coopgame::Solve(
        spec.scenario, AllSupplyDevices(spec.scenario), spec.solver);
    Emit(harness::EquilibriumSummaryTable(result, spec.scenario));
    EmitTrajectory(harness::TrajectoryTable(result, spec.scenario));
    return ReportConvergence(result);
  }

  int Select() {
    const ScenarioSpec spec = Load();
    options_epsilon_ = spec.solver.epsilon;
    SelectionOutcome outcome;
    try {
      outcome = SelectSupplyDevices(spec.scenario,
                                    AllSupplyDevices(spec.scenario),
                                    spec.solver);
    } catch (const SelectionError& e) {
      err_ << fmt::format("error: selection stopped after {} rounds\n",
                          e.rounds().size());
      throw;
    }
    Emit(harness::SelectionTable(outcome, spec.scenario));
    if (!options_.trajectory.empty()) {
      ResultTable all;
      for (const SelectionRound& round : outcome.rounds) {
        ResultTable part = harness::TrajectoryTable(round.equilibrium,
                                                    spec.scenario, round.round);
        if (all.columns().empty()) all = ResultTable(part.columns());
        for (const auto& row : part.rows()) all.AddRow(row);
      }
      EmitTrajectory(all);
    }
    for (const SelectionRound& round : outcome.rounds) {
      if (!round.equilibrium.converged) {
        return ReportConvergence(round.equilibrium);
      }
    }
    if (!options_.quiet) {
      const ConstraintAudit audit = FeasibilityReport(outcome, spec.scenario);
      err_ << fmt::format("# selected {} supplier(s) in {} round(s); "
                          "constraints {}\n",
                          outcome.active.size(), outcome.rounds.size(),
                          audit.AllSatisfied() ? "satisfied" : "VIOLATED");
    }
    return kExitOk;
  }

  int Sweep() {
    const ScenarioSpec spec = Load();
    const harness::SweepResult result = harness::RunSweep(spec);
    Emit(result.table);
    for (const auto& point : result.points) {
      for (const SelectionRound& round : point.outcome.rounds) {
        if (!round.equilibrium.converged) {
          options_epsilon_ = spec.solver.epsilon;
          return ReportConvergence(round.equilibrium);
        }
      }
    }
    return kExitOk;
  }

  int Stability() {
    ScenarioSpec spec = Load();
    if (spec.scenario.sus.size() != 2) {
      throw Error(ErrorCategory::kUnsupported,
                  fmt::format("stability analysis covers exactly two "
                              "suppliers; the scenario has {}",
                              spec.scenario.sus.size()));
    }
    options_epsilon_ = spec.solver.epsilon;
    const EquilibriumResult result = coopgame::Solve(
        spec.scenario, AllSupplyDevices(spec.scenario), spec.solver);
    Emit(harness::StabilityTable(*result.stability));
    return ReportConvergence(result);
  }

  int Repro() {
    const harness::ReproReport report = harness::RunRepro();
    if (!options_.output_dir.empty()) {
      fs::create_directories(options_.output_dir);
      harness::WriteRepro(report, options_.output_dir, format_);
    }
    Emit(report.summary);
    return report.AllPassed() ? kExitOk : kExitCheckFailed;
  }

 private:
  const Options& options_;
  std::ostream& out_;
  std::ostream& err_;
  OutputFormat format_ = OutputFormat::kCsv;
  double options_epsilon_ = 0.0;
};

void AddCommon(CLI::App* sub, Options& o, bool scenario, bool trajectory) {
  if (scenario) {
    sub->add_option("-s,--scenario", o.scenario,
                    "Scenario YAML file (or name under $COOPGAME_SCENARIO_DIR)")
        ->required();
    sub->add_option("--override", o.overrides,
                    "Set a scenario field, e.g. system.v=0.3 or "
                    "su.2.workload=0.1 (repeatable)");
  }
  sub->add_option("-o,--output", o.output,
                  "Write the result table here instead of standard output");
  sub->add_option("-f,--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "text"}));
  if (trajectory) {
    sub->add_option("--trajectory", o.trajectory,
                    "Also write the per-iteration trajectory table here");
  }
  sub->add_flag("-q,--quiet", o.quiet,
                "Do not echo the effective configuration to standard error");
}

}  // namespace

std::unique_ptr<CLI::App> BuildApp(Options& o) {
  auto app = std::make_unique<CLI::App>(
      "Price competition among supply devices selling computation to a "
      "demand device: equilibrium solvers, supplier selection and the "
      "reference experiments.",
      "coopgame");
  app->require_subcommand(1);
  app->footer(kExitCodeHelp);

  CLI::App* cig = app->add_subcommand(
      "solve-cig", "Best-response iteration with complete information");
  AddCommon(cig, o, true, true);
  CLI::App* icig = app->add_subcommand(
      "solve-icig", "Projected-gradient price dynamics with probed gradients");
  AddCommon(icig, o, true, true);
  CLI::App* select = app->add_subcommand(
      "select", "Iterative supplier selection, then the final equilibrium");
  AddCommon(select, o, true, true);
  CLI::App* sweep = app->add_subcommand(
      "sweep", "Run the scenario's experiment block (experiment.mode: sweep)");
  AddCommon(sweep, o, true, false);
  CLI::App* stability = app->add_subcommand(
      "stability", "Jacobian eigenvalues at the equilibrium (two suppliers)");
  AddCommon(stability, o, true, false);
  CLI::App* repro = app->add_subcommand(
      "repro", "Run all reference experiments and the qualitative checks");
  AddCommon(repro, o, false, false);
  repro->add_option("--output-dir", o.output_dir,
                    "Write every table and plot.gp into this directory");
  return app;
}

int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  Options options;
  std::unique_ptr<CLI::App> app = BuildApp(options);
  try {
    app->parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app->help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* sub = nullptr;
    for (const CLI::App* s : app->get_subcommands()) sub = s;
    err << (sub ? sub->help() : app->help());
    return kExitUsage;
  }

  const CLI::App* sub = app->get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    Runner runner(options, out, err);
    if (name == "solve-cig") return runner.Solve(SolverMode::kCig);
    if (name == "solve-icig") return runner.Solve(SolverMode::kIcig);
    if (name == "select") return runner.Select();
    if (name == "sweep") return runner.Sweep();
    if (name == "stability") return runner.Stability();
    return runner.Repro();
  } catch (const Error& e) {
    err << fmt::format("error [{}]: {}\n", CategoryName(e.category()),
                       e.what());
    return ExitCodeFor(e.category());
  } catch (const fs::filesystem_error& e) {
    err << "error [io]: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error [internal]: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace coopgame::cli
