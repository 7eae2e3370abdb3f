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

#include "coopgame/harness/oracles.h"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "coopgame/energy_model.h"
#include "coopgame/errors.h"
#include "coopgame/game_core.h"
#include "coopgame/solvers.h"

namespace coopgame::harness {
namespace {

// 0, h, 2h, ... below `upper`, then `upper` itself.
std::vector<double> Axis(double upper, double step) {
  std::vector<double> axis;
  for (long long k = 0;; ++k) {
    const double x = static_cast<double>(k) * step;
    if (x >= upper - 1e-15) break;
    axis.push_back(x);
  }
  axis.push_back(std::max(0.0, upper));
  return axis;
}

}  // namespace

std::vector<double> OracleDuAllocation(const Scenario& scenario,
                                       const ActiveSet& active,
                                       std::span<const double> prices,
                                       double step, double max_points) {
  if (!(step > 0.0)) {
    throw Error(ErrorCategory::kValidation, "oracle grid step must be > 0");
  }
  const GameCoefficients coeffs =
      ComputeCoefficients(scenario, active, prices);
  const std::size_t count = active.size();
  std::vector<std::vector<double>> axes(count);
  double total = 1.0;
  for (std::size_t n = 0; n < count; ++n) {
    axes[n] = Axis(coeffs.cap[n], step);
    total *= static_cast<double>(axes[n].size());
  }
  if (total > max_points) {
    throw Error(ErrorCategory::kValidation,
                fmt::format("allocation grid has {:.3g} points, above the "
                            "{:.3g} limit; use a coarser step",
                            total, max_points));
  }
  std::vector<std::size_t> index(count, 0);
  std::vector<double> point(count), best(count);
  double best_value = -std::numeric_limits<double>::infinity();
  while (true) {
    for (std::size_t n = 0; n < count; ++n) point[n] = axes[n][index[n]];
    const double value = DuUtilityQuadratic(point, prices, coeffs);
    if (value > best_value) {
      best_value = value;
      best = point;
    }
    std::size_t d = 0;
    while (d < count && ++index[d] == axes[d].size()) index[d++] = 0;
    if (d == count) break;
  }
  return best;
}

PriceOracleResult OracleSuPrice(const Scenario& scenario,
                                const ActiveSet& active,
                                std::span<const double> prices, std::size_t n,
                                double step) {
  if (!(step > 0.0)) {
    throw Error(ErrorCategory::kValidation, "oracle grid step must be > 0");
  }
  const GameCoefficients coeffs =
      ComputeCoefficients(scenario, active, prices);
  const double ceiling = coeffs.PriceCeiling(n);
  const double lower = std::max(0.0, coeffs.PriceFloor(n));
  PriceOracleResult result;
  if (!(ceiling > lower)) {
    result.price = std::max(0.0, ceiling);
    result.utility =
        SuUtilityAgainstResponse(scenario, active, prices, n, result.price);
    result.points = 1;
    return result;
  }
  // The ceiling itself sells nothing and drops the receive cost, a jump
  // outside the smooth game; it is sampled only through its neighbours.
  std::vector<double> values;
  std::vector<double> grid;
  for (long long k = 0;; ++k) {
    const double q = lower + static_cast<double>(k) * step;
    if (q >= ceiling) break;
    grid.push_back(q);
    values.push_back(SuUtilityAgainstResponse(scenario, active, prices, n, q));
  }
  std::size_t arg = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[arg]) arg = i;
  }
  const double slack = 1e-15;
  for (std::size_t i = 1; i <= arg; ++i) {
    if (values[i] < values[i - 1] - slack) result.unimodal = false;
  }
  for (std::size_t i = arg + 1; i < values.size(); ++i) {
    if (values[i] > values[i - 1] + slack) result.unimodal = false;
  }
  result.price = grid[arg];
  result.utility = values[arg];
  result.points = grid.size();
  return result;
}

std::array<std::array<double, 2>, 2> NumericalBestResponseJacobian(
    const Scenario& scenario, const ActiveSet& active,
    std::span<const double> prices, double step) {
  if (active.size() != 2) {
    throw Error(ErrorCategory::kUnsupported,
                "numerical Jacobian needs exactly two suppliers");
  }
  std::array<std::array<double, 2>, 2> jacobian{};
  for (std::size_t j = 0; j < 2; ++j) {
    std::vector<double> up(prices.begin(), prices.end());
    std::vector<double> down = up;
    up[j] += step;
    down[j] -= step;
    const std::vector<double> hi = BestResponseMap(scenario, active, up);
    const std::vector<double> lo = BestResponseMap(scenario, active, down);
    for (std::size_t i = 0; i < 2; ++i) {
      jacobian[i][j] = (hi[i] - lo[i]) / (2.0 * step);
    }
  }
  return jacobian;
}

double MaclaurinRemainderBound(const Scenario& scenario,
                               const ActiveSet& active,
                               std::span<const double> alloc) {
  const SystemParams& sys = scenario.system;
  const double window = energy::SlotShare(active.size(), sys.slot_length);
  const double rate = std::numbers::ln2 / (sys.bandwidth * window);
  double bound = 0.0;
  for (std::size_t n = 0; n < active.size(); ++n) {
    const double gain = energy::ChannelGain(
        scenario.du.position, scenario.sus.at(active[n]).params.position, sys);
    const double l = alloc[n];
    bound += std::pow(rate, 3) * (sys.noise_power * window / gain) *
             std::exp(rate * l) * l * l * l / 6.0;
  }
  return bound;
}

}  // namespace coopgame::harness
