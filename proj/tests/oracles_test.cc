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

#include "coopgame/harness/oracles.h"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "coopgame/errors.h"
#include "coopgame/game_core.h"
#include "coopgame/solvers.h"
#include "test_support.h"

namespace coopgame::harness {
namespace {

namespace ref = testing::reference;

TEST(OracleDuAllocationTest, SingleSupplierMatchesClosedForm) {
  Scenario s = ReferencePairScenario();
  s.sus.resize(1);
  const ActiveSet active = AllSupplyDevices(s);
  const std::vector<double> q = {0.3};
  const GameCoefficients c = ComputeCoefficients(s, active, q);
  const double closed = DuBestResponse(c, q)[0];
  EXPECT_NEAR(OracleDuAllocation(s, active, q)[0], closed, kOracleAllocStep);
}

TEST(OracleDuAllocationTest, CeilingPricesBuyNothing) {
  const Scenario s = ReferencePairScenario();
  const ActiveSet active = AllSupplyDevices(s);
  std::vector<double> q = {1.0, 1.0};
  const std::vector<double> alloc = OracleDuAllocation(s, active, q);
  EXPECT_EQ(alloc, (std::vector<double>{0.0, 0.0}));
}

TEST(OracleDuAllocationTest, ReferencePairMatchesClosedForm) {
  const Scenario s = ReferencePairScenario();
  const ActiveSet active = AllSupplyDevices(s);
  const std::vector<double> q = {ref::kNeQ1, ref::kNeQ2};
  const std::vector<double> grid = OracleDuAllocation(s, active, q);
  EXPECT_NEAR(grid[0], ref::kNeL1, kOracleAllocStep);
  EXPECT_NEAR(grid[1], ref::kNeL2, kOracleAllocStep);
}

TEST(OracleDuAllocationTest, RefusesHugeGrid) {
  const Scenario s = ReferenceTripleScenario(0.0);
  try {
    OracleDuAllocation(s, AllSupplyDevices(s), std::vector<double>{0, 0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("coarser"), std::string::npos);
  }
}

TEST(OracleSuPriceTest, ReferencePairMatchesBestResponse) {
  const Scenario s = ReferencePairScenario();
  const ActiveSet active = AllSupplyDevices(s);
  const std::vector<double> q = {ref::kNeQ1, ref::kNeQ2};
  for (std::size_t n = 0; n < 2; ++n) {
    const PriceOracleResult r = OracleSuPrice(s, active, q, n);
    EXPECT_NEAR(r.price, q[n], kOraclePriceStep);
    EXPECT_TRUE(r.unimodal);
  }
}

TEST(OracleSuPriceTest, DegenerateIntervalReturnsCeiling) {
  Scenario s = ReferencePairScenario();
  s.sus[0].params.workload = 0.375;  // no spare cycles: cap 0
  const ActiveSet active = AllSupplyDevices(s);
  const std::vector<double> q = {0.2, 0.2};
  const GameCoefficients c = ComputeCoefficients(s, active, q);
  const PriceOracleResult r = OracleSuPrice(s, active, q, 0);
  EXPECT_EQ(r.points, 1u);
  EXPECT_DOUBLE_EQ(r.price, c.PriceCeiling(0));
}

TEST(MaclaurinBoundTest, SingleSupplierSmallLoad) {
  Scenario s = ReferencePairScenario();
  s.sus.resize(1);
  const ActiveSet active = AllSupplyDevices(s);
  const std::vector<double> alloc = {0.01};
  const std::vector<double> q = {0.2};
  const GameCoefficients c = ComputeCoefficients(s, active, q);
  const double gap = std::abs(DuUtilityExact({alloc, q}, s, active) -
                              DuUtilityQuadratic(alloc, q, c));
  EXPECT_LE(gap, MaclaurinRemainderBound(s, active, alloc));
  EXPECT_EQ(MaclaurinRemainderBound(s, active, std::vector<double>{0.0}), 0.0);
}

}  // namespace
}  // namespace coopgame::harness
