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

#include "coopgame/selection.h"

#include <algorithm>
#include <map>
#include <numeric>

#include <fmt/format.h>

#include "coopgame/energy_model.h"

namespace coopgame {
namespace {

constexpr double kTieTolerance = 1e-12;

std::vector<Removal> PreFilter(const Scenario& scenario, ActiveSet& active) {
  std::vector<Removal> removed;
  const SystemParams& sys = scenario.system;
  const TransmitCosts tx = TransmitCostCoefficients(sys, active.size());
  ActiveSet kept;
  for (std::size_t index : active) {
    const DeviceParams& su = scenario.sus.at(index).params;
    const double gain =
        energy::ChannelGain(scenario.du.position, su.position, sys);
    const double reduced = tx.quadratic / gain - sys.substitutability + 1.0;
    const double cap = std::min(
        {scenario.du.workload, energy::MaxUploadLoad(gain, sys, active.size()),
         energy::MaxAcceptedLoad(su, sys.slot_length)});
    if (!(reduced > 0.0)) {
      removed.push_back({index, RemovalReason::kPreFiltered,
                         fmt::format("singular purchase response ({:.6g})",
                                     reduced)});
    } else if (cap < 0.0) {
      removed.push_back({index, RemovalReason::kPreFiltered,
                         fmt::format("negative capacity {:.6g} Mb", cap)});
    } else {
      kept.push_back(index);
    }
  }
  active = std::move(kept);
  return removed;
}

}  // namespace

std::string_view RemovalReasonName(RemovalReason reason) {
  switch (reason) {
    case RemovalReason::kPreFiltered: return "prefiltered";
    case RemovalReason::kZeroAllocation: return "zero_allocation";
    case RemovalReason::kHighestPrice: return "highest_price";
  }
  return "unknown";
}

SelectionOutcome SelectSupplyDevices(const Scenario& scenario,
                                     const ActiveSet& candidates,
                                     const SolverConfig& config) {
  if (candidates.empty()) {
    throw Error(ErrorCategory::kValidation, "no candidate suppliers");
  }
  SelectionOutcome outcome;
  ActiveSet active = candidates;
  std::sort(active.begin(), active.end());
  active.erase(std::unique(active.begin(), active.end()), active.end());
  outcome.prefiltered = PreFilter(scenario, active);

  std::map<std::size_t, double> warm_prices;
  for (int round = 1; !active.empty(); ++round) {
    SolverConfig round_config = config;
    if (!warm_prices.empty()) {
      round_config.initial_prices.clear();
      for (std::size_t index : active) {
        round_config.initial_prices.push_back(warm_prices.at(index));
      }
    } else if (round_config.initial_prices.size() != active.size()) {
      round_config.initial_prices.clear();
    }
    if (round_config.learning_rates.size() != 1 &&
        round_config.learning_rates.size() != active.size()) {
      round_config.learning_rates = {round_config.learning_rates.front()};
    }

    SelectionRound log;
    log.round = round;
    log.candidates = active;
    try {
      log.equilibrium = Solve(scenario, active, round_config);
    } catch (const Error& e) {
      throw SelectionError(e, outcome.rounds);
    }
    const StrategyProfile& ne = log.equilibrium.final_profile;

    ActiveSet survivors;
    double total = 0.0;
    for (std::size_t n = 0; n < active.size(); ++n) {
      if (ne.alloc[n] < kZeroAllocationThreshold) {
        log.removed.push_back(
            {active[n], RemovalReason::kZeroAllocation,
             fmt::format("allocation {:.3g} Mb", ne.alloc[n])});
      } else {
        survivors.push_back(active[n]);
        total += ne.alloc[n];
      }
    }
    if (total > scenario.du.workload) {
      std::size_t drop = active.size();
      double highest = 0.0;
      for (std::size_t n = 0; n < active.size(); ++n) {
        if (ne.alloc[n] < kZeroAllocationThreshold) continue;
        if (drop == active.size() ||
            ne.price[n] > highest + kTieTolerance * std::max(1.0, highest)) {
          highest = ne.price[n];
          drop = n;
        }
      }
      log.removed.push_back(
          {active[drop], RemovalReason::kHighestPrice,
           fmt::format("price {:.6g} J/Mb, total purchase {:.6g} > {:.6g} Mb",
                       highest, total, scenario.du.workload)});
      survivors.erase(
          std::find(survivors.begin(), survivors.end(), active[drop]));
    }

    const bool done = log.removed.empty();
    warm_prices.clear();
    for (std::size_t n = 0; n < active.size(); ++n) {
      warm_prices[active[n]] = ne.price[n];
    }
    if (done) outcome.final_equilibrium = log.equilibrium;
    outcome.rounds.push_back(std::move(log));
    if (done) break;
    active = std::move(survivors);
  }
  outcome.active = active;
  return outcome;
}

bool ConstraintAudit::AllSatisfied() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ConstraintCheck& c) { return c.satisfied(); });
}

const ConstraintCheck* ConstraintAudit::Find(std::string_view constraint,
                                             std::optional<int> su_id) const {
  for (const auto& c : checks) {
    if (c.constraint == constraint && c.su_id == su_id) return &c;
  }
  return nullptr;
}

ConstraintAudit AuditProfile(const StrategyProfile& profile,
                             const Scenario& scenario,
                             const ActiveSet& active) {
  if (profile.alloc.size() != active.size() ||
      profile.price.size() != active.size()) {
    throw Error(ErrorCategory::kValidation, "profile/active set size mismatch");
  }
  ConstraintAudit audit;
  const SystemParams& sys = scenario.system;
  const double L0 = scenario.du.workload;
  double total = 0.0;
  for (std::size_t n = 0; n < active.size(); ++n) {
    const SupplyDevice& su = scenario.sus.at(active[n]);
    const double l = profile.alloc[n];
    total += l;
    audit.checks.push_back({"alloc_bounds", su.id, std::min(l, L0 - l)});
    const double gain =
        energy::ChannelGain(scenario.du.position, su.params.position, sys);
    // Expressed as load headroom so an allocation clamped to the power
    // limit has slack exactly zero.
    audit.checks.push_back(
        {"tx_power", su.id,
         energy::MaxUploadLoad(gain, sys, active.size()) - l});
    audit.checks.push_back({"price_nonnegative", su.id, profile.price[n]});
    audit.checks.push_back(
        {"cpu_frequency", su.id,
         energy::MaxAcceptedLoad(su.params, sys.slot_length) - l});
  }
  audit.checks.push_back({"total_offload", std::nullopt, L0 - total});
  return audit;
}

ConstraintAudit FeasibilityReport(const SelectionOutcome& outcome,
                                  const Scenario& scenario) {
  if (!outcome.final_equilibrium) return {};
  return AuditProfile(outcome.final_equilibrium->final_profile, scenario,
                      outcome.final_equilibrium->active);
}

}  // namespace coopgame
