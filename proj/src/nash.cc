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

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "coopgame/errors.h"
#include "coopgame/solvers.h"

namespace coopgame {
namespace {

// Points lo <= anchor + k*step <= hi, plus lo and hi themselves, ascending.
std::vector<double> AnchoredGrid(double anchor, double lo, double hi,
                                 double step) {
  std::vector<double> grid;
  if (hi < lo) return grid;
  const double first = std::ceil((lo - anchor) / step);
  const double last = std::floor((hi - anchor) / step);
  grid.reserve(static_cast<std::size_t>(std::max(0.0, last - first)) + 3);
  grid.push_back(lo);
  for (double k = first; k <= last; k += 1.0) {
    const double x = anchor + k * step;
    if (x > lo && x < hi) grid.push_back(x);
  }
  if (hi > lo) grid.push_back(hi);
  return grid;
}

void Consider(NashCheck& check, std::size_t player, double improvement,
              double deviation, double tolerance) {
  if (improvement > check.worst_improvement) {
    check.worst_improvement = improvement;
    if (improvement > tolerance) {
      check.is_nash = false;
      check.witness = player;
      check.best_deviation_value = deviation;
    }
  }
}

}  // namespace

NashCheck VerifyNash(const StrategyProfile& profile, const Scenario& scenario,
                     const ActiveSet& active, const DeviationGrid& grid) {
  if (profile.alloc.size() != active.size() ||
      profile.price.size() != active.size()) {
    throw Error(ErrorCategory::kValidation, "profile/active set size mismatch");
  }
  NashCheck check;
  const std::size_t count = active.size();
  const GameCoefficients coeffs =
      ComputeCoefficients(scenario, active, profile.price);

  // Suppliers: unilateral price deviations, the DU re-optimizing.
  for (std::size_t n = 0; n < count; ++n) {
    const double current = SuUtility(n, profile, scenario, active);
    const double lo =
        std::max(0.0, coeffs.PriceFloor(n) - 10.0 * grid.price_step);
    const double hi = std::max(lo, coeffs.PriceCeiling(n) +
                                       10.0 * grid.price_step);
    for (double q : AnchoredGrid(profile.price[n], lo, hi, grid.price_step)) {
      const double value = SuUtilityAgainstResponse(scenario, active,
                                                    profile.price, n, q);
      Consider(check, n, value - current, q, grid.tolerance);
    }
  }

  // DU: allocation deviations scored on the quadratic objective it solves.
  const double current =
      DuUtilityQuadratic(profile.alloc, profile.price, coeffs);
  std::vector<std::vector<double>> axes(count);
  double joint = 1.0;
  for (std::size_t n = 0; n < count; ++n) {
    axes[n] = AnchoredGrid(profile.alloc[n], 0.0, std::max(0.0, coeffs.cap[n]),
                           grid.alloc_step);
    if (axes[n].empty()) axes[n] = {0.0};
    joint *= static_cast<double>(axes[n].size());
  }
  std::vector<double> trial = profile.alloc;
  if (joint <= static_cast<double>(grid.max_joint_points)) {
    std::vector<std::size_t> odometer(count, 0);
    while (true) {
      for (std::size_t n = 0; n < count; ++n) trial[n] = axes[n][odometer[n]];
      const double value = DuUtilityQuadratic(trial, profile.price, coeffs);
      Consider(check, kDuPlayer, value - current, trial.front(),
               grid.tolerance);
      std::size_t digit = 0;
      while (digit < count && ++odometer[digit] == axes[digit].size()) {
        odometer[digit++] = 0;
      }
      if (digit == count) break;
    }
  } else {
    check.du_grid_exhaustive = false;
    for (std::size_t n = 0; n < count; ++n) {
      trial = profile.alloc;
      for (double l : axes[n]) {
        trial[n] = l;
        const double value = DuUtilityQuadratic(trial, profile.price, coeffs);
        Consider(check, kDuPlayer, value - current, l, grid.tolerance);
      }
    }
  }
  return check;
}

}  // namespace coopgame
