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

#ifndef COOPGAME_SELECTION_H_
#define COOPGAME_SELECTION_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coopgame/errors.h"
#include "coopgame/solvers.h"

// Supplier selection: who the DU should cooperate with. Starts from every
// candidate, solves the game, drops suppliers that sell nothing and, while
// the DU would buy more than its own workload, the most expensive one.

namespace coopgame {

inline constexpr double kZeroAllocationThreshold = 1e-9;

enum class RemovalReason { kPreFiltered, kZeroAllocation, kHighestPrice };
std::string_view RemovalReasonName(RemovalReason reason);

struct Removal {
  std::size_t su_index = 0;  // into Scenario::sus
  RemovalReason reason = RemovalReason::kZeroAllocation;
  std::string detail;
};

struct SelectionRound {
  int round = 0;
  ActiveSet candidates;
  EquilibriumResult equilibrium;
  std::vector<Removal> removed;
};

struct SelectionOutcome {
  ActiveSet active;
  std::vector<Removal> prefiltered;
  std::vector<SelectionRound> rounds;
  std::optional<EquilibriumResult> final_equilibrium;
};

// Raised when a round's solve fails; carries the rounds completed so far.
class SelectionError : public Error {
 public:
  SelectionError(const Error& cause, std::vector<SelectionRound> rounds)
      : Error(cause.category(), cause.what()), rounds_(std::move(rounds)) {}
  const std::vector<SelectionRound>& rounds() const { return rounds_; }

 private:
  std::vector<SelectionRound> rounds_;
};

// Suppliers with a singular purchase response or negative capacity are
// dropped before the first round. Each later round re-solves on the
// shrunken set, warm-started from the surviving prices, with all
// |N|-dependent coefficients recomputed. Ties on the highest price remove
// the lowest index.
SelectionOutcome SelectSupplyDevices(const Scenario& scenario,
                                     const ActiveSet& candidates,
                                     const SolverConfig& config);

struct ConstraintCheck {
  std::string constraint;  // alloc_bounds, total_offload, tx_power, ...
  std::optional<int> su_id;
  double slack = 0.0;      // >= 0 when satisfied
  bool satisfied() const { return slack >= 0.0; }
};

struct ConstraintAudit {
  std::vector<ConstraintCheck> checks;
  bool AllSatisfied() const;
  const ConstraintCheck* Find(std::string_view constraint,
                              std::optional<int> su_id = std::nullopt) const;
};

// Slack of every buyer and seller constraint on a profile:
//   alloc_bounds      min(l_n, L_0 - l_n)            Mb
//   total_offload     L_0 - sum l_n                  Mb
//   tx_power          load uploadable at P - l_n     Mb
//   price_nonnegative q_n                            J/Mb
//   cpu_frequency     (T f_max / C - L_n) - l_n      Mb
ConstraintAudit AuditProfile(const StrategyProfile& profile,
                             const Scenario& scenario, const ActiveSet& active);

// Audit of the final equilibrium; empty when nothing was selected.
ConstraintAudit FeasibilityReport(const SelectionOutcome& outcome,
                                  const Scenario& scenario);

}  // namespace coopgame

#endif  // COOPGAME_SELECTION_H_
