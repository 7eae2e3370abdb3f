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

#ifndef COOPGAME_HARNESS_ORACLES_H_
#define COOPGAME_HARNESS_ORACLES_H_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "coopgame/scenario.h"

// Brute-force references for the closed-form responses. They share only the
// utility functions with the library, never the response formulas.

namespace coopgame::harness {

inline constexpr double kOracleAllocStep = 1e-4;  // Mb
inline constexpr double kOraclePriceStep = 1e-5;  // J/Mb

// Argmax of the DU's quadratic utility over the box of per-supplier caps,
// sampled on multiples of `step` plus each upper edge. Throws
// Error(kValidation) when the grid exceeds `max_points`.
std::vector<double> OracleDuAllocation(const Scenario& scenario,
                                       const ActiveSet& active,
                                       std::span<const double> prices,
                                       double step = kOracleAllocStep,
                                       double max_points = 1e8);

struct PriceOracleResult {
  double price = 0.0;
  double utility = 0.0;
  std::size_t points = 0;
  // Sampled utility rises up to the argmax and falls after it.
  bool unimodal = true;
};

// Grid argmax of supplier n's utility against the DU's response, over its
// feasible price interval with the others' prices fixed. A degenerate
// interval returns its single price.
PriceOracleResult OracleSuPrice(const Scenario& scenario,
                                const ActiveSet& active,
                                std::span<const double> prices, std::size_t n,
                                double step = kOraclePriceStep);

// Central-difference d(best response)_i / d q_j for a two-supplier game.
std::array<std::array<double, 2>, 2> NumericalBestResponseJacobian(
    const Scenario& scenario, const ActiveSet& active,
    std::span<const double> prices, double step = 1e-6);

// Third-order Lagrange remainder bound on |exact - quadratic| DU utility.
double MaclaurinRemainderBound(const Scenario& scenario,
                               const ActiveSet& active,
                               std::span<const double> alloc);

}  // namespace coopgame::harness

#endif  // COOPGAME_HARNESS_ORACLES_H_
