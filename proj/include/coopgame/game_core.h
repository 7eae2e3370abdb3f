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

#ifndef COOPGAME_GAME_CORE_H_
#define COOPGAME_GAME_CORE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "coopgame/scenario.h"

// Utilities of the buyer (DU) and sellers (SUs), the coefficients of the
// buyer's quadratic surrogate, and the closed-form best responses.
//
// Per-supplier vectors are indexed by position in the active set, not by
// Scenario::sus index.

namespace coopgame {

// alloc[n] is the load the DU buys from the n-th active supplier (Mb) and
// price[n] that supplier's unit price (J/Mb).
struct StrategyProfile {
  std::vector<double> alloc;
  std::vector<double> price;
};

// Snapshot of the surrogate coefficients for one (active set, price profile)
// pair. Recompute rather than mutate when either changes: the window share
// T/|N| enters the transmit terms.
struct GameCoefficients {
  std::size_t active_count = 0;
  double substitutability = 0.0;
  double local_saving_rate = 0.0;  // J saved per offloaded Mb
  double tx_cost_linear = 0.0;     // first-order transmit cost, scaled by 1/g
  double tx_cost_quadratic = 0.0;  // second-order transmit cost, scaled by 1/g
  double coupling_sum = 0.0;       // sum_n 1 / (quadratic/g_n - v + 1)

  std::vector<double> gain;
  std::vector<double> demand_intercept;  // purchase at zero own price, Mb
  std::vector<double> demand_slope;      // purchase drop per unit price
  std::vector<double> upload_cap;        // min(L_0, power-limited upload)
  std::vector<double> cpu_cap;           // frequency-limited extra load
  std::vector<double> cap;               // min(upload_cap, cpu_cap)

  // quadratic/g_n + 1 - v, strictly positive by construction.
  double ReducedCurvature(std::size_t n) const;
  // Price at which the DU buys exactly cap[n].
  double PriceFloor(std::size_t n) const;
  // Price at which the DU stops buying.
  double PriceCeiling(std::size_t n) const;
  bool CapacityFeasible(std::size_t n) const { return cap[n] >= 0.0; }
};

struct TransmitCosts {
  double linear = 0.0;     // ln2/(B T/|N|) * sigma^2 * T/|N|
  double quadratic = 0.0;  // (ln2/(B T/|N|))^2 * sigma^2 * T/|N|
};

// Maclaurin coefficients of the upload energy for |N| active suppliers;
// both are divided by the channel gain of the supplier concerned.
TransmitCosts TransmitCostCoefficients(const SystemParams& system,
                                       std::size_t active_count);

// Throws Error(kSingularity) when some quadratic/g_n - v + 1 <= 0 and
// Error(kValidation) for an empty active set or a size mismatch.
GameCoefficients ComputeCoefficients(const Scenario& scenario,
                                     const ActiveSet& active,
                                     std::span<const double> prices);

struct EnergyBreakdown {
  double du_baseline = 0.0;   // keep everything local
  double du_residual = 0.0;   // run what is left
  double du_offload = 0.0;    // upload energy
  std::vector<double> su_receive;
  std::vector<double> su_compute;  // own task plus accepted load
  std::vector<double> su_own;      // own task alone
};

struct UtilityReport {
  double du = 0.0;
  std::vector<double> su;
  EnergyBreakdown energy;
};

// Exact DU utility: energy saving minus payments minus the substitutability
// penalty 0.5 * (sum l^2 + 2 v sum_{n<k} l_n l_k). Throws Error(kConstraint)
// if an allocation leaves [0, L_0] or needs more than max_tx_power.
double DuUtilityExact(const StrategyProfile& profile, const Scenario& scenario,
                      const ActiveSet& active);

// Second-order expansion of DuUtilityExact in the allocation. Agrees with it
// to third order; this is the objective the closed-form purchase maximizes.
double DuUtilityQuadratic(std::span<const double> alloc,
                          std::span<const double> prices,
                          const GameCoefficients& coeffs);

// Revenue minus receive energy (charged only when something is bought)
// minus the extra compute energy. Zero when alloc is zero. Throws
// Error(kFeasibility) if the accepted load overruns f_max.
double SuUtility(std::size_t n, const StrategyProfile& profile,
                 const Scenario& scenario, const ActiveSet& active);

UtilityReport EvaluateUtilities(const StrategyProfile& profile,
                                const Scenario& scenario,
                                const ActiveSet& active);

// clamp(intercept_n - slope_n * q_n, 0, cap_n) for every supplier.
std::vector<double> DuBestResponse(const GameCoefficients& coeffs,
                                   std::span<const double> prices);

// kappa * C^3 / T^2.
double CubicCostCoefficient(const DeviceParams& su, double T);

// Smaller root of the first-order condition of the supplier's utility along
// the DU's linear purchase response.
double StationaryPrice(std::size_t n, const GameCoefficients& coeffs,
                       const DeviceParams& su, double T);

// Stationary price clamped to [PriceFloor, PriceCeiling], then to q >= 0.
double SuBestResponsePrice(std::size_t n, const GameCoefficients& coeffs,
                           const DeviceParams& su, double T);

// dU_n/dq_n and d2U_n/dq_n2 along the unclamped purchase response.
double SuPriceGradient(std::size_t n, const GameCoefficients& coeffs,
                       const DeviceParams& su, double T, double price);
double SuPriceCurvature(std::size_t n, const GameCoefficients& coeffs,
                        const DeviceParams& su, double T, double price);

// Supplier utility along the unclamped purchase response, with the receive
// energy charged unconditionally. Smooth in price; used for curvature
// checks.
double SuSmoothUtility(std::size_t n, const GameCoefficients& coeffs,
                       const DeviceParams& su, double T, double receive_energy,
                       double price);

// Utility of active supplier n when it posts `price`, the others keep
// `prices`, and the DU answers with DuBestResponse. This is all a supplier
// can observe in the incomplete-information game.
double SuUtilityAgainstResponse(const Scenario& scenario,
                                const ActiveSet& active,
                                std::span<const double> prices, std::size_t n,
                                double price);

struct ConcavityCheck {
  bool concave = true;
  std::optional<double> violating_price;
  double max_second_derivative = 0.0;   // least negative value seen
  double max_relative_mismatch = 0.0;   // analytic vs finite difference
};

// Central-difference second derivative of SuSmoothUtility at each price in
// the grid, compared against SuPriceCurvature.
ConcavityCheck VerifyConcavity(std::size_t n, const GameCoefficients& coeffs,
                               const DeviceParams& su, double T,
                               std::span<const double> price_grid,
                               double step = 1e-3);

}  // namespace coopgame

#endif  // COOPGAME_GAME_CORE_H_
