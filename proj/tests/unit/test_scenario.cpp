// Copyright 2026 The cfed Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "cfed/scenario.hpp"

namespace cfed {
namespace {

TEST(PlaceCsps, FifteenOnTwelveByTwentyHall) {
  const auto pts = place_csps(15, HallGeometry{});
  ASSERT_EQ(pts.size(), 15u);
  std::set<double> xs, ys;
  for (const auto& p : pts) {
    xs.insert(p.x);
    ys.insert(p.y);
    EXPECT_DOUBLE_EQ(p.z, 10.0);
  }
  EXPECT_EQ(xs, (std::set<double>{2.0, 6.0, 10.0}));
  EXPECT_EQ(ys, (std::set<double>{2.0, 6.0, 10.0, 14.0, 18.0}));
}

TEST(PlaceCsps, SingleCspAtHallCentre) {
  const HallGeometry hall;
  const auto pts = place_csps(1, hall);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_DOUBLE_EQ(pts[0].x, 6.0);
  EXPECT_DOUBLE_EQ(pts[0].y, 10.0);
  EXPECT_DOUBLE_EQ(pts[0].z, hall.csp_height_m);
}

TEST(PlaceCsps, ThirtyUsesFourByEightGridWithTwoDropped) {
  const HallGeometry hall;
  const GridShape g = csp_grid_shape(30, hall);
  EXPECT_EQ(g.cols, 4);
  EXPECT_EQ(g.rows, 8);
  const auto pts = place_csps(30, hall);
  ASSERT_EQ(pts.size(), 30u);
  for (const auto& p : pts) EXPECT_TRUE(hall.contains(p));
  std::set<std::pair<double, double>> unique;
  for (const auto& p : pts) unique.insert({p.x, p.y});
  EXPECT_EQ(unique.size(), 30u);
}

TEST(PlaceCsps, StudiedSizesStayInside) {
  const HallGeometry hall;
  for (int n : {15, 30, 60}) {
    const auto pts = place_csps(n, hall);
    ASSERT_EQ(static_cast<int>(pts.size()), n);
    for (const auto& p : pts) EXPECT_TRUE(hall.contains(p));
  }
}

TEST(PartitionEcsps, FifteenIntoFiveSetsOfThree) {
  const auto sets = partition_ecsps(place_csps(15, HallGeometry{}), 5);
  ASSERT_EQ(sets.size(), 5u);
  std::vector<int> seen(15, 0);
  for (const auto& s : sets) {
    EXPECT_EQ(s.size(), 3u);
    for (int c : s) ++seen[static_cast<std::size_t>(c)];
  }
  for (int c : seen) EXPECT_EQ(c, 1);
}

TEST(PartitionEcsps, SingleEcspTakesAll) {
  const auto sets = partition_ecsps(place_csps(9, HallGeometry{}), 1);
  ASSERT_EQ(sets.size(), 1u);
  EXPECT_EQ(sets[0].size(), 9u);
}

TEST(PartitionEcsps, SevenIntoThreeIsBalanced) {
  const auto sets = partition_ecsps(place_csps(7, HallGeometry{}), 3);
  ASSERT_EQ(sets.size(), 3u);
  EXPECT_EQ(sets[0].size(), 3u);
  EXPECT_EQ(sets[1].size(), 2u);
  EXPECT_EQ(sets[2].size(), 2u);
}

TEST(PartitionEcsps, RejectsMoreEcspsThanCsps) {
  EXPECT_THROW(partition_ecsps(place_csps(3, HallGeometry{}), 4), ConfigError);
}

TEST(DropUes, TwentyFourInsideHallAtUeHeight) {
  auto rng = child_stream(3, Stream::ue_drop);
  const auto pts = drop_ues(24, HallGeometry{}, rng);
  ASSERT_EQ(pts.size(), 24u);
  for (const auto& p : pts) {
    EXPECT_GE(p.x, 0.0);
    EXPECT_LE(p.x, 12.0);
    EXPECT_GE(p.y, 0.0);
    EXPECT_LE(p.y, 20.0);
    EXPECT_DOUBLE_EQ(p.z, 1.5);
  }
}

TEST(DropUes, SameSeedSamePoints) {
  auto a = child_stream(11, Stream::ue_drop);
  auto b = child_stream(11, Stream::ue_drop);
  EXPECT_EQ(drop_ues(24, HallGeometry{}, a), drop_ues(24, HallGeometry{}, b));
}

TEST(DropUes, EmpiricalMeanIsHallCentre) {
  auto rng = child_stream(5, Stream::ue_drop);
  double sx = 0, sy = 0;
  const int n = 100000;
  for (const auto& p : drop_ues(n, HallGeometry{}, rng)) {
    sx += p.x;
    sy += p.y;
  }
  EXPECT_NEAR(sx / n, 6.0, 0.06);
  EXPECT_NEAR(sy / n, 10.0, 0.10);
}

TEST(BuildScenario, Fig3ConfigIsValid) {
  ScenarioConfig c;
  c.num_csps = 30;
  c.num_ecsps = 5;
  c.antennas_per_csp = 16;
  c.num_ues = 24;
  c.num_federations = 2;
  c.pilot_len = 12;
  const Scenario sc = build_scenario(c);
  EXPECT_EQ(sc.csp_positions.size(), 30u);
  EXPECT_EQ(sc.ue_positions.size(), 24u);
  EXPECT_EQ(sc.ecsp_partition.size(), 5u);
  EXPECT_EQ(sc.pilot_len(), 12);
  const auto owner = sc.ecsp_of_csp();
  for (int e : owner) EXPECT_GE(e, 0);
}

TEST(BuildScenario, StructurallyInfeasiblePilotBudget) {
  ScenarioConfig c;
  c.num_federations = 1;
  c.pilot_len = 12;
  EXPECT_THROW(build_scenario(c), StructuralInfeasibility);
}

TEST(BuildScenario, FifteenCspsFiveEcspsChunksOfThree) {
  ScenarioConfig c;
  c.num_csps = 15;
  for (const auto& s : build_scenario(c).ecsp_partition) EXPECT_EQ(s.size(), 3u);
}

TEST(ScenarioConfig, AutoPilotLengthIsCeilKOverF) {
  ScenarioConfig c;
  for (int F : {1, 2, 3, 4}) {
    c.num_federations = F;
    EXPECT_EQ(c.effective_pilot_len(), (24 + F - 1) / F);
  }
  c.num_ues = 7;
  c.num_federations = 2;
  EXPECT_EQ(c.effective_pilot_len(), 4);
}

TEST(ScenarioConfig, ValidationNamesTheField) {
  ScenarioConfig c;
  c.num_ecsps = 40;
  try {
    c.validate();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.path(), "scenario.num_ecsps");
  }
  c = ScenarioConfig{};
  c.hall.ue_height_m = 12.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = ScenarioConfig{};
  c.pilot_len = 200;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(ScenarioJson, RoundTrip) {
  ScenarioConfig c;
  c.seed = 99;
  const Scenario sc = build_scenario(c);
  const nlohmann::json j = sc;
  const Scenario back = j.get<Scenario>();
  EXPECT_EQ(back.csp_positions, sc.csp_positions);
  EXPECT_EQ(back.ue_positions, sc.ue_positions);
  EXPECT_EQ(back.ecsp_partition, sc.ecsp_partition);
}

TEST(Rng, StreamsAreIndependentAndStable) {
  auto a = child_stream(1, Stream::ue_drop);
  auto b = child_stream(1, Stream::los);
  auto c = child_stream(1, Stream::ue_drop);
  const auto va = a(), vb = b(), vc = c();
  EXPECT_NE(va, vb);
  EXPECT_EQ(va, vc);
  EXPECT_NE(drop_seed(1, 0), drop_seed(1, 1));
  EXPECT_EQ(drop_seed(4, 2), drop_seed(4, 2));
}

}  // namespace
}  // namespace cfed
