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

#include "coopgame/solvers.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "coopgame/errors.h"

namespace coopgame {
namespace {

const DeviceParams& Supplier(const Scenario& scenario, const ActiveSet& active,
                             std::size_t n) {
  return scenario.sus.at(active.at(n)).params;
}

void RequireCapacity(const Scenario& scenario, const ActiveSet& active,
                     const GameCoefficients& coeffs) {
  for (std::size_t n = 0; n < active.size(); ++n) {
    if (!coeffs.CapacityFeasible(n)) {
      throw Error(ErrorCategory::kFeasibility,
                  fmt::format("{} is capacity-infeasible (cap {:.6g} Mb)",
                              DeviceName(scenario, active[n]), coeffs.cap[n]));
    }
  }
}

std::vector<double> InitialPrices(const Scenario& scenario,
                                  const ActiveSet& active,
                                  const SolverConfig& config) {
  if (config.initial_prices.empty()) return MidpointPrices(scenario, active);
  if (config.initial_prices.size() != active.size()) {
    throw Error(ErrorCategory::kValidation,
                fmt::format("{} initial prices for {} active suppliers",
                            config.initial_prices.size(), active.size()));
  }
  for (double q : config.initial_prices) {
    if (q < 0.0) {
      throw Error(ErrorCategory::kValidation, "negative initial price");
    }
  }
  return config.initial_prices;
}

std::vector<double> LearningRates(const SolverConfig& config,
                                  std::size_t count) {
  if (config.learning_rates.size() == 1) {
    return std::vector<double>(count, config.learning_rates.front());
  }
  if (config.learning_rates.size() != count) {
    throw Error(ErrorCategory::kValidation,
                fmt::format("{} learning rates for {} active suppliers",
                            config.learning_rates.size(), count));
  }
  return config.learning_rates;
}

std::vector<double> AnalyticGradients(const Scenario& scenario,
                                      const ActiveSet& active,
                                      const GameCoefficients& coeffs,
                                      std::span<const double> prices) {
  std::vector<double> grad(active.size());
  for (std::size_t n = 0; n < active.size(); ++n) {
    grad[n] = SuPriceGradient(n, coeffs, Supplier(scenario, active, n),
                              scenario.system.slot_length, prices[n]);
  }
  return grad;
}

// Two-sided probe: the supplier posts q - delta and q + delta and reads back
// only its own sold quantity each time.
double ProbeGradient(const Scenario& scenario, const ActiveSet& active,
                     std::span<const double> prices, std::size_t n,
                     double delta) {
  const double up =
      SuUtilityAgainstResponse(scenario, active, prices, n, prices[n] + delta);
  const double down =
      SuUtilityAgainstResponse(scenario, active, prices, n, prices[n] - delta);
  return (up - down) / (2.0 * delta);
}

std::vector<double> ProbeGradients(const Scenario& scenario,
                                   const ActiveSet& active,
                                   std::span<const double> prices,
                                   double delta) {
  std::vector<double> grad(active.size());
  for (std::size_t n = 0; n < active.size(); ++n) {
    grad[n] = ProbeGradient(scenario, active, prices, n, delta);
  }
  return grad;
}

IterationRecord MakeRecord(int iteration, const Scenario& scenario,
                           const ActiveSet& active, std::vector<double> prices,
                           std::vector<double> gradient, double change) {
  IterationRecord record;
  record.iteration = iteration;
  const GameCoefficients coeffs = ComputeCoefficients(scenario, active, prices);
  record.profile.alloc = DuBestResponse(coeffs, prices);
  record.profile.price = std::move(prices);
  const UtilityReport report =
      EvaluateUtilities(record.profile, scenario, active);
  record.su_utility = report.su;
  record.du_utility = report.du;
  record.gradient = std::move(gradient);
  record.max_price_change = change;
  return record;
}

bool RatioTest(std::span<const double> grad, std::span<const double> previous,
               double epsilon) {
  for (std::size_t n = 0; n < grad.size(); ++n) {
    if (!(std::abs(grad[n]) <= epsilon * std::abs(previous[n]))) return false;
  }
  return true;
}

// |step_n| <= epsilon * max(1, |reference_n|) for every supplier.
bool StepTest(std::span<const double> step, std::span<const double> reference,
              double epsilon) {
  for (std::size_t n = 0; n < step.size(); ++n) {
    if (!(std::abs(step[n]) <= epsilon * std::max(1.0, std::abs(reference[n]))))
      return false;
  }
  return true;
}

double MaxAbs(std::span<const double> values) {
  double m = 0.0;
  for (double x : values) m = std::max(m, std::abs(x));
  return m;
}

void Finalize(const Scenario& scenario, EquilibriumResult& result) {
  result.iterations_used = static_cast<int>(result.trajectory.size());
  if (result.trajectory.empty()) {
    result.final_profile = result.initial_profile;
  } else {
    result.final_profile = result.trajectory.back().profile;
  }
  result.utilities =
      EvaluateUtilities(result.final_profile, scenario, result.active);
  if (result.active.size() == 2) {
    result.stability = JacobianStability(scenario, result.active,
                                         result.final_profile.price);
  }
}

void CheckActive(const Scenario& scenario, const ActiveSet& active) {
  if (active.empty()) {
    throw Error(ErrorCategory::kValidation, "empty active set");
  }
  for (std::size_t i = 0; i < active.size(); ++i) {
    if (active[i] >= scenario.sus.size() || (i > 0 && active[i] <= active[i - 1]))
      throw Error(ErrorCategory::kValidation,
                  "active set must be ascending indices into the suppliers");
  }
}

}  // namespace

std::string_view ModeName(SolverMode mode) {
  return mode == SolverMode::kCig ? "cig" : "icig";
}

std::string_view StopReasonName(StopReason reason) {
  switch (reason) {
    case StopReason::kGradientRatio: return "gradient_ratio";
    case StopReason::kPriceChange: return "price_change";
    case StopReason::kMaxIterations: return "max_iterations";
  }
  return "unknown";
}

void ValidateSolverConfig(const SolverConfig& config) {
  auto require = [](bool ok, const char* message) {
    if (!ok) throw Error(ErrorCategory::kValidation, message);
  };
  require(config.epsilon > 0, "solver.epsilon must be > 0");
  require(config.probe_delta > 0, "solver.probe_delta must be > 0");
  require(config.max_iterations >= 1, "solver.max_iterations must be >= 1");
  require(!config.learning_rates.empty(), "solver.learning_rates is empty");
  for (double a : config.learning_rates) {
    require(a >= 0, "solver.learning_rates must be >= 0");
  }
}

std::vector<double> MidpointPrices(const Scenario& scenario,
                                   const ActiveSet& active) {
  CheckActive(scenario, active);
  // With every price at local_saving - linear/g the unconstrained purchase
  // is zero for all suppliers, i.e. each sits at its ceiling.
  const std::vector<double> zero(active.size(), 0.0);
  const GameCoefficients probe = ComputeCoefficients(scenario, active, zero);
  std::vector<double> ceiling(active.size());
  for (std::size_t n = 0; n < active.size(); ++n) {
    ceiling[n] = probe.local_saving_rate - probe.tx_cost_linear / probe.gain[n];
  }
  const GameCoefficients coeffs =
      ComputeCoefficients(scenario, active, ceiling);
  std::vector<double> mid(active.size());
  for (std::size_t n = 0; n < active.size(); ++n) {
    mid[n] = std::max(
        0.0, 0.5 * (coeffs.PriceFloor(n) + coeffs.PriceCeiling(n)));
  }
  return mid;
}

std::vector<double> BestResponseMap(const Scenario& scenario,
                                    const ActiveSet& active,
                                    std::span<const double> prices) {
  const GameCoefficients coeffs = ComputeCoefficients(scenario, active, prices);
  std::vector<double> next(active.size());
  for (std::size_t n = 0; n < active.size(); ++n) {
    next[n] = SuBestResponsePrice(n, coeffs, Supplier(scenario, active, n),
                                  scenario.system.slot_length);
  }
  return next;
}

EquilibriumResult SolveCig(const Scenario& scenario, const ActiveSet& active,
                           const SolverConfig& config) {
  ValidateSolverConfig(config);
  CheckActive(scenario, active);
  const double T = scenario.system.slot_length;

  EquilibriumResult result;
  result.mode = SolverMode::kCig;
  result.active = active;
  std::vector<double> prices = InitialPrices(scenario, active, config);
  GameCoefficients coeffs = ComputeCoefficients(scenario, active, prices);
  RequireCapacity(scenario, active, coeffs);
  result.initial_profile = {DuBestResponse(coeffs, prices), prices};
  std::vector<double> gradient =
      AnalyticGradients(scenario, active, coeffs, prices);

  for (int i = 1; i <= config.max_iterations; ++i) {
    std::vector<double> next;
    if (config.order == UpdateOrder::kJacobi) {
      next = BestResponseMap(scenario, active, prices);
    } else {
      next = prices;
      for (std::size_t n = 0; n < active.size(); ++n) {
        const GameCoefficients fresh =
            ComputeCoefficients(scenario, active, next);
        next[n] = SuBestResponsePrice(n, fresh, Supplier(scenario, active, n),
                                      T);
      }
    }
    coeffs = ComputeCoefficients(scenario, active, next);
    std::vector<double> next_gradient =
        AnalyticGradients(scenario, active, coeffs, next);

    std::vector<double> step(active.size());
    for (std::size_t n = 0; n < step.size(); ++n) step[n] = next[n] - prices[n];
    result.gradient_ratio_met =
        RatioTest(next_gradient, gradient, config.epsilon);
    result.price_change_met = StepTest(step, prices, config.epsilon);

    result.trajectory.push_back(
        MakeRecord(i, scenario, active, next, next_gradient, MaxAbs(step)));
    prices = std::move(next);
    gradient = std::move(next_gradient);

    if (result.gradient_ratio_met || result.price_change_met) {
      result.converged = true;
      result.stop_reason = result.gradient_ratio_met
                               ? StopReason::kGradientRatio
                               : StopReason::kPriceChange;
      break;
    }
  }
  Finalize(scenario, result);
  return result;
}

EquilibriumResult SolveIcig(const Scenario& scenario, const ActiveSet& active,
                            const SolverConfig& config) {
  ValidateSolverConfig(config);
  CheckActive(scenario, active);
  const std::vector<double> rates = LearningRates(config, active.size());
  const double delta = config.probe_delta;

  EquilibriumResult result;
  result.mode = SolverMode::kIcig;
  result.active = active;
  std::vector<double> prices = InitialPrices(scenario, active, config);
  const GameCoefficients coeffs = ComputeCoefficients(scenario, active, prices);
  RequireCapacity(scenario, active, coeffs);
  result.initial_profile = {DuBestResponse(coeffs, prices), prices};
  std::vector<double> gradient =
      ProbeGradients(scenario, active, prices, delta);

  for (int i = 1; i <= config.max_iterations; ++i) {
    std::vector<double> next = prices;
    if (config.order == UpdateOrder::kJacobi) {
      for (std::size_t n = 0; n < next.size(); ++n) {
        next[n] = std::max(0.0, prices[n] + rates[n] * gradient[n]);
      }
    } else {
      for (std::size_t n = 0; n < next.size(); ++n) {
        const double g = ProbeGradient(scenario, active, next, n, delta);
        next[n] = std::max(0.0, next[n] + rates[n] * g);
      }
    }
    std::vector<double> next_gradient =
        ProbeGradients(scenario, active, next, delta);

    // Projected-gradient residual with unit step: independent of the
    // learning rate, so a frozen iterate is not mistaken for a stationary
    // one.
    std::vector<double> residual(next.size());
    for (std::size_t n = 0; n < next.size(); ++n) {
      residual[n] = std::max(0.0, next[n] + next_gradient[n]) - next[n];
    }
    std::vector<double> step(next.size());
    for (std::size_t n = 0; n < step.size(); ++n) step[n] = next[n] - prices[n];

    result.gradient_ratio_met =
        RatioTest(next_gradient, gradient, config.epsilon);
    result.price_change_met = StepTest(residual, next, config.epsilon);

    result.trajectory.push_back(
        MakeRecord(i, scenario, active, next, next_gradient, MaxAbs(step)));
    prices = std::move(next);
    gradient = std::move(next_gradient);

    if (result.gradient_ratio_met || result.price_change_met) {
      result.converged = true;
      result.stop_reason = result.gradient_ratio_met
                               ? StopReason::kGradientRatio
                               : StopReason::kPriceChange;
      break;
    }
  }
  Finalize(scenario, result);
  return result;
}

EquilibriumResult Solve(const Scenario& scenario, const ActiveSet& active,
                        const SolverConfig& config) {
  return config.mode == SolverMode::kCig ? SolveCig(scenario, active, config)
                                         : SolveIcig(scenario, active, config);
}

bool IterationBoundCheck(const EquilibriumResult& result, double epsilon) {
  if (!result.converged || !(epsilon > 0)) return false;
  return result.iterations_used <= 10.0 * std::log10(1.0 / epsilon) + 5.0;
}

}  // namespace coopgame
