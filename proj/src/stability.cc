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

#include <cmath>

#include <fmt/format.h>

#include "coopgame/errors.h"
#include "coopgame/solvers.h"

namespace coopgame {

StabilityReport JacobianStability(const Scenario& scenario,
                                  const ActiveSet& active,
                                  std::span<const double> prices) {
  if (active.size() != 2) {
    throw Error(ErrorCategory::kUnsupported,
                fmt::format("stability analysis covers exactly two active "
                            "suppliers, got {}",
                            active.size()));
  }
  const GameCoefficients coeffs = ComputeCoefficients(scenario, active, prices);
  const double v = coeffs.substitutability;
  const double T = scenario.system.slot_length;

  StabilityReport report;
  std::array<double, 2> off_diagonal{};
  for (std::size_t n = 0; n < 2; ++n) {
    const std::size_t k = 1 - n;
    const DeviceParams& su = scenario.sus.at(active[n]).params;
    // The self price never enters the own intercept, so the diagonal is 0.
    const double d_intercept =
        v / (coeffs.ReducedCurvature(k) * coeffs.ReducedCurvature(n) *
             (v * coeffs.coupling_sum + 1.0));
    const double pass_through = d_intercept / coeffs.demand_slope[n];

    const double ceiling = coeffs.PriceCeiling(n);
    if (!(ceiling > 0.0)) {
      report.regime[n] = 2;
      off_diagonal[n] = 0.0;  // pinned at a zero price
      continue;
    }
    const double mu = StationaryPrice(n, coeffs, su, T);
    if (mu < coeffs.PriceFloor(n)) {
      report.regime[n] = 0;
      off_diagonal[n] = pass_through;
    } else if (mu > ceiling) {
      report.regime[n] = 2;
      off_diagonal[n] = pass_through;
    } else {
      report.regime[n] = 1;
      const double F = CubicCostCoefficient(su, T);
      const double beta = coeffs.demand_slope[n];
      const double zeta = 6.0 * su.workload * F * beta +
                          3.0 * F * coeffs.demand_intercept[n] * beta + 1.0;
      off_diagonal[n] = (1.0 - 1.0 / (2.0 * std::sqrt(zeta))) * pass_through;
    }
  }
  report.j12 = off_diagonal[0];
  report.j21 = off_diagonal[1];
  // Zero diagonal: eigenvalues are +/- sqrt(j12 * j21).
  const std::complex<double> root =
      std::sqrt(std::complex<double>(report.j12 * report.j21, 0.0));
  report.eigenvalues = {root, -root};
  report.spectral_radius = std::abs(root);
  return report;
}

}  // namespace coopgame
