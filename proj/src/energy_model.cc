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

#include "coopgame/energy_model.h"

#include <cmath>

#include <fmt/format.h>

#include "coopgame/errors.h"

namespace coopgame::energy {
namespace {

// Relative slack for frequency comparisons so that a load computed as
// exactly T*f_max/C is not rejected by rounding.
constexpr double kFrequencySlack = 1e-12;

void CheckFrequency(const DeviceParams& device, double load, double T,
                    const char* what) {
  const double frequency = device.cycles_per_mb * load / T;
  if (frequency > device.f_max * (1 + kFrequencySlack)) {
    throw Error(ErrorCategory::kFeasibility,
                fmt::format("{}: device at ({}, {}) needs {:.6g} cycles/s for "
                            "{:.6g} Mb, above f_max {:.6g}",
                            what, device.position.x, device.position.y,
                            frequency, load, device.f_max));
  }
}

double Cube(double x) { return x * x * x; }

}  // namespace

double LocalExecEnergy(const DeviceParams& device, double load, double T) {
  if (load < 0) {
    throw Error(ErrorCategory::kValidation, "negative load");
  }
  CheckFrequency(device, load, T, "local execution");
  return device.kappa * Cube(device.cycles_per_mb * load) / (T * T);
}

double ChannelGain(Position tx, Position rx, const SystemParams& system) {
  const double d = Distance(tx, rx);
  if (d < kMinDistance) {
    throw Error(ErrorCategory::kGeometry,
                fmt::format("transmitter and receiver at distance {:.3g} m",
                            d));
  }
  return system.pathloss_constant / std::pow(d, system.pathloss_exponent);
}

double SlotShare(std::size_t active_count, double T) {
  if (active_count == 0) {
    throw Error(ErrorCategory::kValidation,
                "no active supplier to schedule a receive window for");
  }
  return T / static_cast<double>(active_count);
}

double AchievableRate(double power, double gain, const SystemParams& system) {
  return system.bandwidth *
         std::log2(1.0 + power * gain / system.noise_power);
}

double RequiredTxPower(double load, double gain, const SystemParams& system,
                       std::size_t active_count) {
  const double window_capacity =
      system.bandwidth * SlotShare(active_count, system.slot_length);
  return std::expm1(std::log(2.0) * load / window_capacity) *
         system.noise_power / gain;
}

double MaxUploadLoad(double gain, const SystemParams& system,
                     std::size_t active_count) {
  return AchievableRate(system.max_tx_power, gain, system) *
         SlotShare(active_count, system.slot_length);
}

double DuOffloadEnergy(std::span<const double> alloc,
                       std::span<const double> gains,
                       const SystemParams& system) {
  if (alloc.size() != gains.size()) {
    throw Error(ErrorCategory::kInternal, "allocation/gain size mismatch");
  }
  if (alloc.empty()) return 0.0;
  const double window = SlotShare(alloc.size(), system.slot_length);
  double total = 0.0;
  for (std::size_t n = 0; n < alloc.size(); ++n) {
    if (alloc[n] < 0) {
      throw Error(ErrorCategory::kConstraint, "negative allocation");
    }
    total += RequiredTxPower(alloc[n], gains[n], system, alloc.size()) * window;
  }
  return total;
}

double DuMarginalSaving(const DeviceParams& du) {
  return du.kappa * du.f_max * du.f_max * du.cycles_per_mb;
}

double DuBaselineEnergy(const DeviceParams& du) {
  return DuMarginalSaving(du) * du.workload;
}

double DuResidualEnergy(const DeviceParams& du, double total_offloaded) {
  if (total_offloaded < 0) {
    throw Error(ErrorCategory::kConstraint, "negative offloaded total");
  }
  if (total_offloaded > du.workload * (1 + 1e-12)) {
    throw Error(ErrorCategory::kConstraint,
                fmt::format("offloaded {:.6g} Mb exceeds the DU workload "
                            "{:.6g} Mb",
                            total_offloaded, du.workload));
  }
  return DuMarginalSaving(du) * (du.workload - total_offloaded);
}

double SuReceiveEnergy(const DeviceParams& su, std::size_t active_count,
                       double T) {
  return su.p_rec * SlotShare(active_count, T);
}

double SuComputeEnergy(const DeviceParams& su, double accepted, double T) {
  if (accepted < 0) {
    throw Error(ErrorCategory::kValidation, "negative accepted load");
  }
  CheckFrequency(su, su.workload + accepted, T, "supplier compute");
  return su.kappa * Cube(su.cycles_per_mb * (su.workload + accepted)) /
         (T * T);
}

double MaxAcceptedLoad(const DeviceParams& su, double T) {
  return T * su.f_max / su.cycles_per_mb - su.workload;
}

}  // namespace coopgame::energy
