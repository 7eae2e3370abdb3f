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

#ifndef COOPGAME_SCENARIO_H_
#define COOPGAME_SCENARIO_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Units throughout: Mb for data, seconds, Watts, Joules, cycles/s. The
// bandwidth is expressed in Mb/s per unit of log2(1 + SNR), so a 1 MHz
// channel enters as bandwidth = 1.

namespace coopgame {

struct Position {
  double x = 0.0;
  double y = 0.0;
};

double Distance(Position a, Position b);

// Physical constants of one user device.
struct DeviceParams {
  double kappa = 1e-28;          // effective switched capacitance
  double cycles_per_mb = 8e8;    // CPU cycles per Mb of input
  double f_max = 1.5e9;          // cycles/s
  double p_rec = 0.01;           // receiver circuit power, W
  Position position;
  double workload = 0.0;         // own task input, Mb
};

// Which cube is subtracted from a supplier's compute cost. kOwnTask charges
// only the extra energy of the accepted load; kDemandTask subtracts the
// demand device's workload cube instead.
enum class CostBaseline { kOwnTask, kDemandTask };

struct SystemParams {
  double slot_length = 0.2;
  double bandwidth = 1.0;
  double noise_power = 1e-9;
  double max_tx_power = 0.1;
  double pathloss_constant = 1e-3;
  double pathloss_exponent = 3.0;
  double substitutability = 0.5;
  CostBaseline su_cost_baseline = CostBaseline::kOwnTask;
};

struct SupplyDevice {
  int id = 0;  // 1-based, as reported in result tables
  DeviceParams params;
};

struct Scenario {
  SystemParams system;
  DeviceParams du;
  std::vector<SupplyDevice> sus;
};

// Indices into Scenario::sus, kept in ascending order.
using ActiveSet = std::vector<std::size_t>;

inline constexpr double kDefaultDuFmax = 2.4e9;
inline constexpr double kDefaultDuWorkload = 0.6;
inline constexpr double kMinDistance = 1e-6;

DeviceParams DefaultDemandDevice();
DeviceParams DefaultSupplyDevice();

void ValidateSystem(const SystemParams& system);
void ValidateDevice(const DeviceParams& device, const SystemParams& system,
                    std::string_view name);
// Checks every invariant including own-task frequency feasibility and the
// minimum DU/SU separation. Throws Error(kValidation or kGeometry).
void ValidateScenario(const Scenario& scenario);

ActiveSet AllSupplyDevices(const Scenario& scenario);
std::string DeviceName(const Scenario& scenario, std::size_t su_index);

// Two suppliers at (-20,20) and (20,20) serving a DU at the origin with
// L_0 = 0.6, L_1 = 0.15, L_2 = 0.
Scenario ReferencePairScenario();
// Adds a third supplier at (20,-20); L_1 = 0.15, L_2 = 0.1.
Scenario ReferenceTripleScenario(double su3_workload);

}  // namespace coopgame

#endif  // COOPGAME_SCENARIO_H_
