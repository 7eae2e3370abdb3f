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

#ifndef COOPGAME_SOLVERS_H_
#define COOPGAME_SOLVERS_H_

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "coopgame/game_core.h"
#include "coopgame/scenario.h"

namespace coopgame {

enum class SolverMode { kCig, kIcig };
// kJacobi: every supplier responds to the previous iteration's prices.
// kGaussSeidel: suppliers respond in index order to the freshest prices.
enum class UpdateOrder { kJacobi, kGaussSeidel };

std::string_view ModeName(SolverMode mode);

struct SolverConfig {
  SolverMode mode = SolverMode::kCig;
  UpdateOrder order = UpdateOrder::kJacobi;
  // Empty means the midpoint of each supplier's feasible price interval.
  std::vector<double> initial_prices;
  double epsilon = 1e-3;
  int max_iterations = 500;
  double probe_delta = 1e-5;
  // One rate per active supplier; a single entry applies to all of them.
  std::vector<double> learning_rates = {0.2};
};

// Throws Error(kValidation) for non-positive epsilon/probe_delta,
// max_iterations < 1 or negative learning rates.
void ValidateSolverConfig(const SolverConfig& config);

enum class StopReason { kGradientRatio, kPriceChange, kMaxIterations };
std::string_view StopReasonName(StopReason reason);

struct IterationRecord {
  int iteration = 0;
  StrategyProfile profile;
  std::vector<double> su_utility;
  double du_utility = 0.0;
  // dU_n/dq_n at this iteration's prices: analytic in the complete
  // information game, two-sided probe estimate in the incomplete one.
  std::vector<double> gradient;
  double max_price_change = 0.0;
};

struct StabilityReport {
  double j12 = 0.0;  // d q_1[i+1] / d q_2[i]
  double j21 = 0.0;  // d q_2[i+1] / d q_1[i]
  std::array<std::complex<double>, 2> eigenvalues;
  double spectral_radius = 0.0;
  // 0: clamped at the floor, 1: interior stationary price, 2: clamped at
  // the ceiling.
  std::array<int, 2> regime = {1, 1};
};

struct EquilibriumResult {
  SolverMode mode = SolverMode::kCig;
  ActiveSet active;
  StrategyProfile initial_profile;
  StrategyProfile final_profile;
  UtilityReport utilities;
  std::vector<IterationRecord> trajectory;  // one record per iteration
  int iterations_used = 0;
  bool converged = false;
  StopReason stop_reason = StopReason::kMaxIterations;
  // Both stopping tests are tracked separately for diagnostics.
  bool gradient_ratio_met = false;
  bool price_change_met = false;
  std::optional<StabilityReport> stability;  // two suppliers only
};

// Midpoint of [PriceFloor, PriceCeiling] for each supplier, evaluated with
// every opponent at its own ceiling (where nothing is bought from it).
std::vector<double> MidpointPrices(const Scenario& scenario,
                                   const ActiveSet& active);

// One simultaneous best-response round of the complete-information game.
std::vector<double> BestResponseMap(const Scenario& scenario,
                                    const ActiveSet& active,
                                    std::span<const double> prices);

// Throws Error(kFeasibility) if an active supplier has negative capacity,
// Error(kSingularity) from coefficient evaluation. Non-convergence is
// reported through EquilibriumResult::converged.
EquilibriumResult SolveCig(const Scenario& scenario, const ActiveSet& active,
                           const SolverConfig& config);
EquilibriumResult SolveIcig(const Scenario& scenario, const ActiveSet& active,
                            const SolverConfig& config);
// Dispatches on config.mode.
EquilibriumResult Solve(const Scenario& scenario, const ActiveSet& active,
                        const SolverConfig& config);

struct DeviationGrid {
  double alloc_step = 1e-4;
  double price_step = 1e-5;
  double tolerance = 1e-8;
  // Above this many points the DU's joint grid is replaced by one sweep per
  // coordinate with the others held fixed.
  std::size_t max_joint_points = 20'000'000;
};

inline constexpr std::size_t kDuPlayer = static_cast<std::size_t>(-1);

struct NashCheck {
  bool is_nash = true;
  // kDuPlayer for the DU, otherwise the position in the active set.
  std::optional<std::size_t> witness;
  double worst_improvement = 0.0;
  double best_deviation_value = 0.0;  // price or allocation norm of witness
  bool du_grid_exhaustive = true;
};

// Direct check of the equilibrium definition: no supplier gains more than
// grid.tolerance by posting another price on a grid over its feasible
// interval (the DU answering with DuBestResponse), and the DU gains no more
// than grid.tolerance from another allocation on a grid over its box.
NashCheck VerifyNash(const StrategyProfile& profile, const Scenario& scenario,
                     const ActiveSet& active, const DeviationGrid& grid = {});

// Analytic Jacobian of the simultaneous price map for exactly two active
// suppliers. Throws Error(kUnsupported) otherwise.
StabilityReport JacobianStability(const Scenario& scenario,
                                  const ActiveSet& active,
                                  std::span<const double> prices);

// iterations_used <= 10 * log10(1/epsilon) + 5 on a converged run.
bool IterationBoundCheck(const EquilibriumResult& result, double epsilon);

}  // namespace coopgame

#endif  // COOPGAME_SOLVERS_H_
