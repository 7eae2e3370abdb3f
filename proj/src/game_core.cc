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

#include "coopgame/game_core.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "coopgame/energy_model.h"
#include "coopgame/errors.h"

namespace coopgame {
namespace {

constexpr double kFrequencySlack = 1e-12;
constexpr double kPowerSlack = 1e-9;

const DeviceParams& Supplier(const Scenario& scenario, const ActiveSet& active,
                             std::size_t n) {
  return scenario.sus.at(active.at(n)).params;
}

void CheckProfileShape(const StrategyProfile& profile,
                       const ActiveSet& active) {
  if (profile.alloc.size() != active.size() ||
      profile.price.size() != active.size()) {
    throw Error(ErrorCategory::kValidation,
                fmt::format("profile has {} allocations and {} prices for {} "
                            "active suppliers",
                            profile.alloc.size(), profile.price.size(),
                            active.size()));
  }
}

// 0.5 * (sum l^2 + 2 v sum_{n<k} l_n l_k).
double SubstitutabilityPenalty(std::span<const double> alloc, double v) {
  double squares = 0.0;
  double cross = 0.0;
  for (std::size_t n = 0; n < alloc.size(); ++n) {
    squares += alloc[n] * alloc[n];
    for (std::size_t k = n + 1; k < alloc.size(); ++k) {
      cross += alloc[n] * alloc[k];
    }
  }
  return 0.5 * (squares + 2.0 * v * cross);
}

// (L + l)^3 - L^3 without cancellation.
double CubeIncrement(double base, double increment) {
  return increment *
         (3.0 * base * base + 3.0 * base * increment + increment * increment);
}

// Compute energy above the baseline the supplier's utility subtracts.
double ExtraComputeEnergy(const DeviceParams& su, const SystemParams& system,
                          const DeviceParams& du, double accepted) {
  const double F = CubicCostCoefficient(su, system.slot_length);
  if (system.su_cost_baseline == CostBaseline::kOwnTask) {
    return F * CubeIncrement(su.workload, accepted);
  }
  const double total = su.workload + accepted;
  return F * (total * total * total -
              du.workload * du.workload * du.workload);
}

}  // namespace

double GameCoefficients::ReducedCurvature(std::size_t n) const {
  return tx_cost_quadratic / gain[n] - substitutability + 1.0;
}

double GameCoefficients::PriceFloor(std::size_t n) const {
  return (demand_intercept[n] - cap[n]) / demand_slope[n];
}

double GameCoefficients::PriceCeiling(std::size_t n) const {
  return demand_intercept[n] / demand_slope[n];
}

TransmitCosts TransmitCostCoefficients(const SystemParams& system,
                                       std::size_t active_count) {
  const double window = energy::SlotShare(active_count, system.slot_length);
  // ln(2^{1/(B T/|N|)}): nats per Mb within one receive window.
  const double nats_per_mb = std::numbers::ln2 / (system.bandwidth * window);
  return {nats_per_mb * system.noise_power * window,
          nats_per_mb * nats_per_mb * system.noise_power * window};
}

GameCoefficients ComputeCoefficients(const Scenario& scenario,
                                     const ActiveSet& active,
                                     std::span<const double> prices) {
  if (active.empty()) {
    throw Error(ErrorCategory::kValidation, "empty active set");
  }
  if (prices.size() != active.size()) {
    throw Error(ErrorCategory::kValidation,
                fmt::format("{} prices for {} active suppliers", prices.size(),
                            active.size()));
  }
  const SystemParams& sys = scenario.system;
  const std::size_t count = active.size();
  const double v = sys.substitutability;
  const TransmitCosts tx = TransmitCostCoefficients(sys, count);

  GameCoefficients c;
  c.active_count = count;
  c.substitutability = v;
  c.local_saving_rate = energy::DuMarginalSaving(scenario.du);
  c.tx_cost_linear = tx.linear;
  c.tx_cost_quadratic = tx.quadratic;

  c.gain.resize(count);
  std::vector<double> reduced(count);
  for (std::size_t n = 0; n < count; ++n) {
    c.gain[n] = energy::ChannelGain(scenario.du.position,
                                    Supplier(scenario, active, n).position,
                                    sys);
    reduced[n] = c.ReducedCurvature(n);
    if (!(reduced[n] > 0.0)) {
      throw Error(ErrorCategory::kSingularity,
                  fmt::format("{}: transmit curvature {:.6g} - v + 1 <= 0, "
                              "purchase response undefined",
                              DeviceName(scenario, active[n]),
                              c.tx_cost_quadratic / c.gain[n]));
    }
    c.coupling_sum += 1.0 / reduced[n];
  }

  c.demand_intercept.resize(count);
  c.demand_slope.resize(count);
  c.upload_cap.resize(count);
  c.cpu_cap.resize(count);
  c.cap.resize(count);
  for (std::size_t n = 0; n < count; ++n) {
    double others_coupling = 0.0;  // K - 1/reduced_n
    double others_cost = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      if (k == n) continue;
      others_coupling += 1.0 / reduced[k];
      others_cost += (c.tx_cost_linear / c.gain[k] + prices[k]) / reduced[k];
    }
    const double own_weight = v * others_coupling + 1.0;
    const double denominator = reduced[n] * (v * c.coupling_sum + 1.0);
    c.demand_intercept[n] = (c.local_saving_rate -
                             c.tx_cost_linear / c.gain[n] * own_weight +
                             v * others_cost) /
                            denominator;
    c.demand_slope[n] = own_weight / denominator;

    const DeviceParams& su = Supplier(scenario, active, n);
    c.upload_cap[n] = std::min(scenario.du.workload,
                               energy::MaxUploadLoad(c.gain[n], sys, count));
    c.cpu_cap[n] = energy::MaxAcceptedLoad(su, sys.slot_length);
    c.cap[n] = std::min(c.upload_cap[n], c.cpu_cap[n]);
  }
  return c;
}

double DuUtilityExact(const StrategyProfile& profile, const Scenario& scenario,
                      const ActiveSet& active) {
  CheckProfileShape(profile, active);
  const SystemParams& sys = scenario.system;
  const std::size_t count = active.size();
  std::vector<double> gains(count);
  double offloaded = 0.0;
  double payment = 0.0;
  for (std::size_t n = 0; n < count; ++n) {
    const double l = profile.alloc[n];
    const std::string name = DeviceName(scenario, active[n]);
    if (l < 0.0 || l > scenario.du.workload * (1 + 1e-12)) {
      throw Error(ErrorCategory::kConstraint,
                  fmt::format("allocation bounds: {} gets {:.6g} Mb, outside "
                              "[0, {:.6g}]",
                              name, l, scenario.du.workload));
    }
    gains[n] = energy::ChannelGain(scenario.du.position,
                                   Supplier(scenario, active, n).position, sys);
    const double power = energy::RequiredTxPower(l, gains[n], sys, count);
    if (power > sys.max_tx_power * (1 + kPowerSlack)) {
      throw Error(ErrorCategory::kConstraint,
                  fmt::format("transmit power: {} needs {:.6g} W, above {:.6g} "
                              "W",
                              name, power, sys.max_tx_power));
    }
    offloaded += l;
    payment += profile.price[n] * l;
  }
  // Baseline minus residual compute energy is linear in the offloaded total.
  const double saving = energy::DuMarginalSaving(scenario.du) * offloaded;
  const double upload = energy::DuOffloadEnergy(profile.alloc, gains, sys);
  return saving - upload - payment -
         SubstitutabilityPenalty(profile.alloc, sys.substitutability);
}

double DuUtilityQuadratic(std::span<const double> alloc,
                          std::span<const double> prices,
                          const GameCoefficients& coeffs) {
  double value = 0.0;
  double cross = 0.0;
  for (std::size_t n = 0; n < alloc.size(); ++n) {
    const double l = alloc[n];
    const double curvature = coeffs.tx_cost_quadratic / coeffs.gain[n] + 1.0;
    const double slope = coeffs.local_saving_rate -
                         coeffs.tx_cost_linear / coeffs.gain[n] - prices[n];
    value += slope * l - 0.5 * curvature * l * l;
    for (std::size_t k = n + 1; k < alloc.size(); ++k) cross += l * alloc[k];
  }
  return value - coeffs.substitutability * cross;
}

double SuUtility(std::size_t n, const StrategyProfile& profile,
                 const Scenario& scenario, const ActiveSet& active) {
  CheckProfileShape(profile, active);
  const DeviceParams& su = Supplier(scenario, active, n);
  const SystemParams& sys = scenario.system;
  const double l = profile.alloc.at(n);
  if (l < 0.0) {
    throw Error(ErrorCategory::kConstraint, "negative allocation");
  }
  const double frequency = su.cycles_per_mb * (su.workload + l) /
                           sys.slot_length;
  if (frequency > su.f_max * (1 + kFrequencySlack)) {
    throw Error(ErrorCategory::kFeasibility,
                fmt::format("cpu frequency: {} needs {:.6g} cycles/s, above "
                            "{:.6g}",
                            DeviceName(scenario, active[n]), frequency,
                            su.f_max));
  }
  const double receive =
      l > 0.0 ? energy::SuReceiveEnergy(su, active.size(), sys.slot_length)
              : 0.0;
  return profile.price[n] * l - receive -
         ExtraComputeEnergy(su, sys, scenario.du, l);
}

UtilityReport EvaluateUtilities(const StrategyProfile& profile,
                                const Scenario& scenario,
                                const ActiveSet& active) {
  CheckProfileShape(profile, active);
  const SystemParams& sys = scenario.system;
  const std::size_t count = active.size();
  UtilityReport report;
  report.du = DuUtilityExact(profile, scenario, active);

  std::vector<double> gains(count);
  double offloaded = 0.0;
  for (std::size_t n = 0; n < count; ++n) {
    gains[n] = energy::ChannelGain(scenario.du.position,
                                   Supplier(scenario, active, n).position, sys);
    offloaded += profile.alloc[n];
  }
  EnergyBreakdown& e = report.energy;
  e.du_baseline = energy::DuBaselineEnergy(scenario.du);
  e.du_residual =
      energy::DuMarginalSaving(scenario.du) * (scenario.du.workload - offloaded);
  e.du_offload = energy::DuOffloadEnergy(profile.alloc, gains, sys);

  report.su.resize(count);
  for (std::size_t n = 0; n < count; ++n) {
    const DeviceParams& su = Supplier(scenario, active, n);
    report.su[n] = SuUtility(n, profile, scenario, active);
    e.su_receive.push_back(
        profile.alloc[n] > 0.0
            ? energy::SuReceiveEnergy(su, count, sys.slot_length)
            : 0.0);
    e.su_compute.push_back(
        energy::SuComputeEnergy(su, profile.alloc[n], sys.slot_length));
    e.su_own.push_back(
        energy::LocalExecEnergy(su, su.workload, sys.slot_length));
  }
  return report;
}

std::vector<double> DuBestResponse(const GameCoefficients& coeffs,
                                   std::span<const double> prices) {
  std::vector<double> alloc(coeffs.active_count);
  for (std::size_t n = 0; n < alloc.size(); ++n) {
    if (!coeffs.CapacityFeasible(n)) {
      throw Error(ErrorCategory::kFeasibility,
                  fmt::format("supplier #{} has negative capacity {:.6g} Mb",
                              n, coeffs.cap[n]));
    }
    const double unclamped =
        coeffs.demand_intercept[n] - coeffs.demand_slope[n] * prices[n];
    alloc[n] = std::clamp(unclamped, 0.0, coeffs.cap[n]);
  }
  return alloc;
}

double CubicCostCoefficient(const DeviceParams& su, double T) {
  const double c = su.cycles_per_mb;
  return su.kappa * c * c * c / (T * T);
}

double StationaryPrice(std::size_t n, const GameCoefficients& coeffs,
                       const DeviceParams& su, double T) {
  const double F = CubicCostCoefficient(su, T);
  const double L = su.workload;
  const double alpha = coeffs.demand_intercept[n];
  const double beta = coeffs.demand_slope[n];
  const double discriminant = 6.0 * L * F * beta + 3.0 * F * alpha * beta + 1.0;
  if (discriminant < 0.0) {
    throw Error(ErrorCategory::kInternal,
                fmt::format("negative discriminant {:.6g} for supplier #{}",
                            discriminant, n));
  }
  // Rationalized form of the smaller root: the post-purchase load
  // L + alpha - beta q equals (2L + alpha) / (1 + sqrt(discriminant)).
  const double loaded = (2.0 * L + alpha) / (1.0 + std::sqrt(discriminant));
  return (L + alpha - loaded) / beta;
}

double SuBestResponsePrice(std::size_t n, const GameCoefficients& coeffs,
                           const DeviceParams& su, double T) {
  const double ceiling = coeffs.PriceCeiling(n);
  if (!(ceiling > 0.0)) return 0.0;  // nothing sells at a nonnegative price
  const double floor = coeffs.PriceFloor(n);
  if (floor > ceiling) {
    throw Error(ErrorCategory::kFeasibility,
                fmt::format("supplier #{} has an empty price interval", n));
  }
  const double mu = StationaryPrice(n, coeffs, su, T);
  return std::max(0.0, std::clamp(mu, floor, ceiling));
}

double SuPriceGradient(std::size_t n, const GameCoefficients& coeffs,
                       const DeviceParams& su, double T, double price) {
  const double F = CubicCostCoefficient(su, T);
  const double beta = coeffs.demand_slope[n];
  const double l = coeffs.demand_intercept[n] - beta * price;
  const double loaded = su.workload + l;
  return l - beta * price + 3.0 * F * beta * loaded * loaded;
}

double SuPriceCurvature(std::size_t n, const GameCoefficients& coeffs,
                        const DeviceParams& su, double T, double price) {
  const double F = CubicCostCoefficient(su, T);
  const double beta = coeffs.demand_slope[n];
  const double l = coeffs.demand_intercept[n] - beta * price;
  return -2.0 * beta - 6.0 * F * beta * beta * (su.workload + l);
}

double SuSmoothUtility(std::size_t n, const GameCoefficients& coeffs,
                       const DeviceParams& su, double T, double receive_energy,
                       double price) {
  const double l = coeffs.demand_intercept[n] - coeffs.demand_slope[n] * price;
  return price * l - receive_energy -
         CubicCostCoefficient(su, T) * CubeIncrement(su.workload, l);
}

double SuUtilityAgainstResponse(const Scenario& scenario,
                                const ActiveSet& active,
                                std::span<const double> prices, std::size_t n,
                                double price) {
  StrategyProfile profile;
  profile.price.assign(prices.begin(), prices.end());
  profile.price.at(n) = price;
  const GameCoefficients coeffs =
      ComputeCoefficients(scenario, active, profile.price);
  profile.alloc = DuBestResponse(coeffs, profile.price);
  return SuUtility(n, profile, scenario, active);
}

ConcavityCheck VerifyConcavity(std::size_t n, const GameCoefficients& coeffs,
                               const DeviceParams& su, double T,
                               std::span<const double> price_grid,
                               double step) {
  ConcavityCheck check;
  check.max_second_derivative = -std::numeric_limits<double>::infinity();
  const double receive = su.p_rec * T / static_cast<double>(coeffs.active_count);
  auto utility = [&](double q) {
    return SuSmoothUtility(n, coeffs, su, T, receive, q);
  };
  for (double q : price_grid) {
    const double numeric =
        (utility(q + step) - 2.0 * utility(q) + utility(q - step)) /
        (step * step);
    const double analytic = SuPriceCurvature(n, coeffs, su, T, q);
    check.max_second_derivative = std::max(check.max_second_derivative, numeric);
    check.max_relative_mismatch =
        std::max(check.max_relative_mismatch,
                 std::abs(numeric - analytic) / std::abs(analytic));
    if (!(numeric < 0.0) && check.concave) {
      check.concave = false;
      check.violating_price = q;
    }
  }
  return check;
}

}  // namespace coopgame
