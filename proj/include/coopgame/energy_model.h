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

#ifndef COOPGAME_ENERGY_MODEL_H_
#define COOPGAME_ENERGY_MODEL_H_

#include <cstddef>
#include <span>

#include "coopgame/scenario.h"

// Energy, rate and power relations of the cooperative-computation model.
// Everything here is a pure function of its arguments.

namespace coopgame::energy {

// kappa * (C * load)^3 / T^2: running `load` Mb within one slot at the
// lowest sufficient frequency. Throws kFeasibility if C*load/T > f_max.
double LocalExecEnergy(const DeviceParams& device, double load, double T);

// pathloss_constant / d^pathloss_exponent. Throws kGeometry when the two
// positions are closer than kMinDistance.
double ChannelGain(Position tx, Position rx, const SystemParams& system);

// Equal receive window T / |N| per active supplier.
double SlotShare(std::size_t active_count, double T);

// B * log2(1 + p g / sigma^2), Mb/s.
double AchievableRate(double power, double gain, const SystemParams& system);

// Smallest power that moves `load` Mb within the supplier's receive window.
double RequiredTxPower(double load, double gain, const SystemParams& system,
                       std::size_t active_count);

// Largest load the DU can upload within one window at max_tx_power.
double MaxUploadLoad(double gain, const SystemParams& system,
                     std::size_t active_count);

// Sum over suppliers of RequiredTxPower * window. |N| is alloc.size().
double DuOffloadEnergy(std::span<const double> alloc,
                       std::span<const double> gains,
                       const SystemParams& system);

// Energy the DU spends when it keeps the whole task: the CPU is pinned at
// f_max, so this is kappa * f_max^2 * C * L_0.
double DuBaselineEnergy(const DeviceParams& du);

// kappa * f_max^2 * C * (L_0 - offloaded). Throws kConstraint when the
// offloaded total exceeds L_0.
double DuResidualEnergy(const DeviceParams& du, double total_offloaded);

// J per offloaded Mb saved by the DU: kappa * f_max^2 * C.
double DuMarginalSaving(const DeviceParams& du);

double SuReceiveEnergy(const DeviceParams& su, std::size_t active_count,
                       double T);

// kappa * C^3 * (L_n + accepted)^3 / T^2. Throws kFeasibility if the
// combined load needs more than f_max.
double SuComputeEnergy(const DeviceParams& su, double accepted, double T);

// T * f_max / C - L_n: extra load the supplier can still finish in a slot.
double MaxAcceptedLoad(const DeviceParams& su, double T);

}  // namespace coopgame::energy

#endif  // COOPGAME_ENERGY_MODEL_H_
