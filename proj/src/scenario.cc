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

#include "coopgame/scenario.h"

#include <cmath>

#include <fmt/format.h>

#include "coopgame/errors.h"

namespace coopgame {
namespace {

void Require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCategory::kValidation, message);
}

}  // namespace

double Distance(Position a, Position b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

DeviceParams DefaultDemandDevice() {
  DeviceParams du;
  du.f_max = kDefaultDuFmax;
  du.workload = kDefaultDuWorkload;
  return du;
}

DeviceParams DefaultSupplyDevice() { return DeviceParams{}; }

void ValidateSystem(const SystemParams& s) {
  Require(s.slot_length > 0, "system.slot_length must be > 0");
  Require(s.bandwidth > 0, "system.bandwidth must be > 0");
  Require(s.noise_power > 0, "system.noise_power must be > 0");
  Require(s.max_tx_power > 0, "system.max_tx_power must be > 0");
  Require(s.pathloss_constant > 0, "system.pathloss_constant must be > 0");
  Require(s.pathloss_exponent > 0, "system.pathloss_exponent must be > 0");
  Require(s.substitutability >= 0 && s.substitutability <= 1,
          "system.v must lie in [0, 1]");
}

void ValidateDevice(const DeviceParams& d, const SystemParams& system,
                    std::string_view name) {
  Require(d.kappa > 0, fmt::format("{}.kappa must be > 0", name));
  Require(d.cycles_per_mb > 0, fmt::format("{}.cycles_per_mb must be > 0", name));
  Require(d.f_max > 0, fmt::format("{}.f_max must be > 0", name));
  Require(d.p_rec >= 0, fmt::format("{}.p_rec must be >= 0", name));
  Require(d.workload >= 0, fmt::format("{}.workload must be >= 0", name));
  const double frequency = d.cycles_per_mb * d.workload / system.slot_length;
  Require(frequency <= d.f_max * (1 + 1e-12),
          fmt::format("{}: own task needs {:.6g} cycles/s, above f_max {:.6g}",
                      name, frequency, d.f_max));
}

void ValidateScenario(const Scenario& scenario) {
  ValidateSystem(scenario.system);
  ValidateDevice(scenario.du, scenario.system, "du");
  Require(!scenario.sus.empty(), "scenario has no supply devices");
  for (std::size_t i = 0; i < scenario.sus.size(); ++i) {
    const auto& su = scenario.sus[i];
    Require(su.id > 0, "su ids must be positive");
    for (std::size_t j = 0; j < i; ++j) {
      Require(scenario.sus[j].id != su.id,
              fmt::format("duplicate su id {}", su.id));
    }
    const std::string name = DeviceName(scenario, i);
    ValidateDevice(su.params, scenario.system, name);
    if (Distance(scenario.du.position, su.params.position) < kMinDistance) {
      throw Error(ErrorCategory::kGeometry,
                  fmt::format("{} coincides with the du", name));
    }
  }
}

ActiveSet AllSupplyDevices(const Scenario& scenario) {
  ActiveSet all(scenario.sus.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return all;
}

std::string DeviceName(const Scenario& scenario, std::size_t su_index) {
  return fmt::format("su.{}", scenario.sus.at(su_index).id);
}

Scenario ReferencePairScenario() {
  Scenario s;
  s.du = DefaultDemandDevice();
  SupplyDevice su1{1, DefaultSupplyDevice()};
  su1.params.position = {-20, 20};
  su1.params.workload = 0.15;
  SupplyDevice su2{2, DefaultSupplyDevice()};
  su2.params.position = {20, 20};
  su2.params.workload = 0.0;
  s.sus = {su1, su2};
  return s;
}

Scenario ReferenceTripleScenario(double su3_workload) {
  Scenario s = ReferencePairScenario();
  s.sus[1].params.workload = 0.1;
  SupplyDevice su3{3, DefaultSupplyDevice()};
  su3.params.position = {20, -20};
  su3.params.workload = su3_workload;
  s.sus.push_back(su3);
  return s;
}

}  // namespace coopgame
