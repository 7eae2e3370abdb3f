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

// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <fmt/format.h>

#include "coopgame/errors.h"
#include "coopgame/game_core.h"
#include "coopgame/harness/experiments.h"
#include "coopgame/harness/oracles.h"
#include "coopgame/scenario.h"
#include "coopgame/selection.h"
#include "coopgame/solvers.h"
#include "test_support.h"

namespace coopgame {
namespace {

using harness::ReproCheck;
using harness::ReproReport;

struct Verdict {
  bool passed = true;
  std::string detail;

  void Fail(std::string why) {
    if (passed) detail = std::move(why);
    passed = false;
  }
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

SolverConfig TightCig() {
  SolverConfig config;
  config.epsilon = 1e-12;
  config.max_iterations = 1000;
  return config;
}

// The randomized 2-supplier set shared by several criteria.
struct RandomCase {
  Scenario scenario;
  ActiveSet active;
  EquilibriumResult ne;
};

const std::vector<RandomCase>& RandomCases() {
  static const std::vector<RandomCase> cases = [] {
    std::mt19937_64 rng(20260418);
    std::vector<RandomCase> out;
    while (out.size() < 50) {
      RandomCase c;
      c.scenario = testing::RandomScenario(rng, 2);
      c.active = AllSupplyDevices(c.scenario);
      c.ne = SolveCig(c.scenario, c.active, TightCig());
      out.push_back(std::move(c));
    }
    return out;
  }();
  return cases;
}

const ReproReport& Repro() {
  static const ReproReport report = harness::RunRepro();
  return report;
}

const ReproCheck* FindCheck(const std::string& name) {
  for (const ReproCheck& c : Repro().checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

Verdict FromChecks(const std::vector<std::string>& names) {
  Verdict v;
  std::string observed;
  for (const std::string& name : names) {
    const ReproCheck* c = FindCheck(name);
    if (!c) {
      v.Fail("missing check " + name);
      continue;
    }
    if (!c->passed) v.Fail(name + ": " + c->observed);
    observed += (observed.empty() ? "" : "; ") + c->observed;
  }
  if (v.passed) v.detail = observed;
  return v;
}

Verdict PriceConvergence() {
  const auto start = Clock::now();
  const harness::ReproConfig config = harness::DefaultReproConfig();
  const Scenario scenario = ReferencePairScenario();
  const harness::PriceConvergenceResult convergence =
      harness::RunPriceConvergence(scenario, config.convergence, config.icig);
  const double elapsed = Seconds(start);
  Verdict v;
  if (!convergence.cig.converged || convergence.cig.iterations_used > 15) {
    v.Fail(fmt::format("complete-information solver used {} iterations",
                       convergence.cig.iterations_used));
  }
  double gap = 0.0;
  for (std::size_t n = 0; n < 2; ++n) {
    const double ref = convergence.cig.final_profile.price[n];
    gap = std::max(gap, std::abs(convergence.icig.final_profile.price[n] - ref) / ref);
  }
  if (!convergence.icig.converged || convergence.icig.iterations_used > 100 || gap > 1e-2) {
    v.Fail(fmt::format("gradient dynamics: {} iterations, gap {:.3g}",
                       convergence.icig.iterations_used, gap));
  }
  if (elapsed >= 1.0) v.Fail(fmt::format("took {:.3f} s", elapsed));
  if (v.passed) {
    v.detail = fmt::format(
        "cig {} iterations, icig {} iterations, relative gap {:.2e}, {:.3f} s",
        convergence.cig.iterations_used, convergence.icig.iterations_used, gap, elapsed);
  }
  return v;
}

Verdict QualitativeOrdering() {
  return FromChecks({"su2_price_below_su1", "su2_accepts_more_work",
                     "all_utilities_positive", "su2_utility_above_su1"});
}

Verdict SweepTrend() {
  const auto start = Clock::now();
  const harness::DistributionSweepResult sweep = harness::RunDistributionSweep(
      ReferenceTripleScenario(0.0), std::vector<double>{0.0, 0.05, 0.10, 0.15},
      TightCig());
  const double elapsed = Seconds(start);
  Verdict v;
  for (std::size_t i = 1; i < sweep.points.size(); ++i) {
    const auto& a = sweep.points[i - 1].alloc;
    const auto& b = sweep.points[i].alloc;
    if (b[2] > a[2]) v.Fail(fmt::format("l_3 rises at point {}", i));
    if (b[0] < a[0] || b[1] < a[1]) {
      v.Fail(fmt::format("l_1 or l_2 falls at point {}", i));
    }
  }
  const double gap = std::abs(sweep.points[2].alloc[2] - sweep.points[2].alloc[1]);
  if (gap > 1e-6) v.Fail(fmt::format("symmetric gap {:.3g}", gap));
  if (elapsed >= 5.0) v.Fail(fmt::format("took {:.3f} s", elapsed));
  if (v.passed) {
    v.detail = fmt::format("monotone over 4 points, symmetric gap {:.1e}, "
                           "{:.3f} s",
                           gap, elapsed);
  }
  return v;
}

Verdict OracleEquivalence() {
  Verdict v;
  double worst_alloc = 0.0;
  double worst_price = 0.0;
  for (std::size_t i = 0; i < RandomCases().size(); ++i) {
    const RandomCase& c = RandomCases()[i];
    const std::vector<double>& prices = c.ne.final_profile.price;
    const GameCoefficients coeffs =
        ComputeCoefficients(c.scenario, c.active, prices);
    const std::vector<double> closed = DuBestResponse(coeffs, prices);
    const std::vector<double> grid =
        harness::OracleDuAllocation(c.scenario, c.active, prices);
    for (std::size_t n = 0; n < 2; ++n) {
      const double d = std::abs(closed[n] - grid[n]);
      worst_alloc = std::max(worst_alloc, d);
      if (d > harness::kOracleAllocStep * (1 + 1e-9)) {
        v.Fail(fmt::format("case {} su {}: allocation off by {:.3g}", i, n, d));
      }
      const double best = SuBestResponsePrice(
          n, coeffs, c.scenario.sus[c.active[n]].params,
          c.scenario.system.slot_length);
      const harness::PriceOracleResult oracle =
          harness::OracleSuPrice(c.scenario, c.active, prices, n);
      const double dp = std::abs(best - oracle.price);
      worst_price = std::max(worst_price, dp);
      if (dp > harness::kOraclePriceStep * (1 + 1e-9)) {
        v.Fail(fmt::format("case {} su {}: price off by {:.3g}", i, n, dp));
      }
    }
  }
  if (v.passed) {
    v.detail = fmt::format("50 scenarios, worst allocation gap {:.2e} Mb, "
                           "worst price gap {:.2e} J/Mb",
                           worst_alloc, worst_price);
  }
  return v;
}

Verdict Concavity() {
  Verdict v;
  double worst_mismatch = 0.0;
  double worst_curvature = -1e300;
  for (std::size_t i = 0; i < RandomCases().size(); ++i) {
    const RandomCase& c = RandomCases()[i];
    const GameCoefficients coeffs = ComputeCoefficients(
        c.scenario, c.active, c.ne.final_profile.price);
    for (std::size_t n = 0; n < 2; ++n) {
      const double lo = std::max(0.0, coeffs.PriceFloor(n));
      const double hi = coeffs.PriceCeiling(n);
      std::vector<double> grid;
      for (int k = 0; k < 100; ++k) grid.push_back(lo + (hi - lo) * k / 99.0);
      const ConcavityCheck check =
          VerifyConcavity(n, coeffs, c.scenario.sus[c.active[n]].params,
                          c.scenario.system.slot_length, grid);
      worst_mismatch = std::max(worst_mismatch, check.max_relative_mismatch);
      worst_curvature =
          std::max(worst_curvature, check.max_second_derivative);
      if (!check.concave) {
        v.Fail(fmt::format("case {} su {}: not concave at {}", i, n,
                           *check.violating_price));
      }
      if (check.max_relative_mismatch > 1e-6) {
        v.Fail(fmt::format("case {} su {}: curvature mismatch {:.3g}", i, n,
                           check.max_relative_mismatch));
      }
    }
  }
  if (v.passed) {
    v.detail = fmt::format("100 points x 100 suppliers, max second "
                           "derivative {:.4g}, worst relative mismatch {:.2e}",
                           worst_curvature, worst_mismatch);
  }
  return v;
}

Verdict JacobianSuite() {
  Verdict v;
  double worst_radius = 0.0;
  double worst_gap = 0.0;
  int checked = 0;
  for (std::size_t i = 0; i < RandomCases().size(); ++i) {
    const RandomCase& c = RandomCases()[i];
    if (!c.ne.converged) continue;
    ++checked;
    const StabilityReport& s = *c.ne.stability;
    worst_radius = std::max(worst_radius, s.spectral_radius);
    if (!(s.spectral_radius < 1.0)) {
      v.Fail(fmt::format("case {}: spectral radius {}", i, s.spectral_radius));
    }
    const auto numeric = harness::NumericalBestResponseJacobian(
        c.scenario, c.active, c.ne.final_profile.price);
    const double gap = std::max(
        {std::abs(numeric[0][1] - s.j12), std::abs(numeric[1][0] - s.j21),
         std::abs(numeric[0][0]), std::abs(numeric[1][1])});
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-4) {
      v.Fail(fmt::format("case {}: Jacobian gap {:.3g}", i, gap));
    }
  }
  if (checked == 0) v.Fail("no converged equilibrium");
  if (v.passed) {
    v.detail = fmt::format("{} equilibria, max spectral radius {:.4f}, worst "
                           "entry gap {:.2e}",
                           checked, worst_radius, worst_gap);
  }
  return v;
}

Verdict NashVerification() {
  Verdict v;
  int checked = 0;
  double worst = 0.0;
  auto verify = [&](const EquilibriumResult& ne, const Scenario& scenario,
                    const std::string& label) {
    if (!ne.converged) return;
    ++checked;
    const NashCheck check = VerifyNash(ne.final_profile, scenario, ne.active);
    worst = std::max(worst, check.worst_improvement);
    if (!check.is_nash) {
      v.Fail(fmt::format("{}: player {} gains {:.3g}", label,
                         *check.witness == kDuPlayer
                             ? std::string("du")
                             : std::to_string(*check.witness),
                         check.worst_improvement));
    }
  };
  for (std::size_t i = 0; i < RandomCases().size(); ++i) {
    verify(RandomCases()[i].ne, RandomCases()[i].scenario,
           fmt::format("random case {}", i));
  }
  const Scenario two = ReferencePairScenario();
  verify(SolveCig(two, AllSupplyDevices(two), TightCig()), two,
         "reference pair");
  for (double w : {0.0, 0.05, 0.1, 0.15}) {
    const Scenario three = ReferenceTripleScenario(w);
    verify(SolveCig(three, AllSupplyDevices(three), TightCig()), three,
           fmt::format("reference triple {}", w));
  }
  if (v.passed) {
    v.detail = fmt::format("{} equilibria, largest improvement {:.2e}",
                           checked, worst);
  }
  return v;
}

Verdict SelectionInvariants() {
  Verdict v;
  std::mt19937_64 rng(77);
  int oversubscribed = 0;
  int max_rounds = 0;
  for (int i = 0; i < 20; ++i) {
    const Scenario s = testing::RandomOversubscribedScenario(rng);
    const ActiveSet candidates = AllSupplyDevices(s);
    const SelectionOutcome outcome =
        SelectSupplyDevices(s, candidates, TightCig());
    const int rounds = static_cast<int>(outcome.rounds.size());
    max_rounds = std::max(max_rounds, rounds);
    double first_total = 0.0;
    for (double l : outcome.rounds.front().equilibrium.final_profile.alloc) {
      first_total += l;
    }
    if (first_total > s.du.workload) ++oversubscribed;
    if (rounds > static_cast<int>(candidates.size())) {
      v.Fail(fmt::format("instance {}: {} rounds for {} candidates", i, rounds,
                         candidates.size()));
    }
    if (!outcome.final_equilibrium) {
      v.Fail(fmt::format("instance {}: no final equilibrium", i));
      continue;
    }
    double total = 0.0;
    for (double l : outcome.final_equilibrium->final_profile.alloc) {
      total += l;
      if (!(l > kZeroAllocationThreshold)) {
        v.Fail(fmt::format("instance {}: retained allocation {:.3g}", i, l));
      }
    }
    if (total > s.du.workload * (1 + 1e-12)) {
      v.Fail(fmt::format("instance {}: total {} > {}", i, total,
                         s.du.workload));
    }
  }
  if (oversubscribed == 0) v.Fail("no instance was over-subscribed");
  if (v.passed) {
    v.detail = fmt::format("20 instances ({} over-subscribed), at most {} "
                           "rounds",
                           oversubscribed, max_rounds);
  }
  return v;
}

Verdict MaclaurinFidelity() {
  Verdict v;
  const Scenario s = ReferencePairScenario();
  const ActiveSet active = AllSupplyDevices(s);
  const std::vector<double> prices = {testing::reference::kNeQ1,
                                      testing::reference::kNeQ2};
  const GameCoefficients coeffs = ComputeCoefficients(s, active, prices);
  double worst_ratio = 0.0;
  int points = 0;
  for (int i = 0; i <= 50; ++i) {
    for (int j = 0; j <= 50; ++j) {
      const std::vector<double> alloc = {i * 1e-3, j * 1e-3};
      const StrategyProfile profile{alloc, prices};
      const double gap = std::abs(DuUtilityExact(profile, s, active) -
                                  DuUtilityQuadratic(alloc, prices, coeffs));
      const double bound = harness::MaclaurinRemainderBound(s, active, alloc);
      ++points;
      if (gap > bound * (1 + 1e-9) + 1e-15) {
        v.Fail(fmt::format("({}, {}): gap {:.3g} > bound {:.3g}", alloc[0],
                           alloc[1], gap, bound));
      }
      if (bound > 0) worst_ratio = std::max(worst_ratio, gap / bound);
    }
  }
  if (v.passed) {
    v.detail = fmt::format("{} allocations in [0, 0.05]^2, largest gap/bound "
                           "{:.4f}",
                           points, worst_ratio);
  }
  return v;
}

std::string ReadAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict Determinism() {
  Verdict v;
  namespace fs = std::filesystem;
  const fs::path root =
      fs::temp_directory_path() / fmt::format("coopgame_accept_{}", ::getpid());
  std::vector<fs::path> dirs = {root / "a", root / "b"};
  for (const fs::path& d : dirs) {
    fs::create_directories(d);
    harness::WriteRepro(harness::RunRepro(), d, harness::OutputFormat::kCsv);
  }
  int files = 0;
  for (const auto& entry : fs::directory_iterator(dirs[0])) {
    ++files;
    const fs::path other = dirs[1] / entry.path().filename();
    if (ReadAll(entry.path()) != ReadAll(other)) {
      v.Fail(entry.path().filename().string() + " differs");
    }
  }
  fs::remove_all(root);
  if (v.passed) v.detail = fmt::format("{} files byte-identical", files);
  return v;
}

}  // namespace
}  // namespace coopgame

int main() {
  using coopgame::Verdict;
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria =
      {{"price convergence (2 suppliers)", coopgame::PriceConvergence},
       {"qualitative ordering at equilibrium", coopgame::QualitativeOrdering},
       {"workload distribution sweep trend", coopgame::SweepTrend},
       {"closed forms match grid oracles", coopgame::OracleEquivalence},
       {"supplier utility concavity", coopgame::Concavity},
       {"best-response Jacobian stability", coopgame::JacobianSuite},
       {"equilibria survive unilateral deviations", coopgame::NashVerification},
       {"supplier selection invariants", coopgame::SelectionInvariants},
       {"quadratic surrogate within remainder bound",
        coopgame::MaclaurinFidelity},
       {"repro output determinism", coopgame::Determinism}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.passed = false;
      v.detail = std::string("exception: ") + e.what();
    }
    if (!v.passed) ++failed;
    std::printf("criterion %zu: %s - %s: %s\n", i + 1,
                v.passed ? "PASS" : "FAIL", criteria[i].first,
                v.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
