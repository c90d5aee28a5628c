// Copyright 2026 The owfkit Authors
//
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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "owf/network.hpp"
#include "support/instances.hpp"

namespace owf {
namespace {

using testing::InstanceBuilder;

bool has_violation(const ValidationReport& r, const std::string& needle) {
  for (const Violation& v : r.violations) {
    if (v.message.find(needle) != std::string::npos || v.entity.find(needle) != std::string::npos) {
      return true;
    }
  }
  return false;
}

Instance day_instance() {
  InstanceBuilder b(24);
  b.reservoir("r1", 10.0)
      .tank("t1", 15.0, 30.0, 34.0, 31.0, 38.0, 0.3)
      .demand("d1", -0.05, 25.0, 100.0)
      .pump("pu1", "r1", "t1", 50.0, -1000.0, 2.0, 0.2, std::vector<double>(24, 1.0),
            std::vector<double>(24, 1.0))
      .pipe("p1", "t1", "d1", 500.0, 0.742, -0.3, 0.3);
  return b.build();
}

TEST(Validate, HourlyDayPasses) {
  const Instance inst = day_instance();
  const ValidationReport r = validate(inst);
  EXPECT_TRUE(r.ok()) << r.to_string();
  EXPECT_EQ(inst.num_steps(), 24);
  EXPECT_DOUBLE_EQ(inst.time(24), 86400.0);
}

TEST(Validate, OracleInstancesPass) {
  for (const Instance& inst : testing::oracle_instances()) {
    EXPECT_TRUE(validate(inst).ok()) << inst.name << "\n" << validate(inst).to_string();
  }
}

TEST(Validate, PositivePumpCurvatureIsRejected) {
  Instance inst = day_instance();
  inst.links[inst.link_index("pu1")].pump.b = 5.0;
  const ValidationReport r = validate(inst);
  ASSERT_FALSE(r.ok());
  EXPECT_TRUE(has_violation(r, "pump b must be negative"));
}

TEST(Validate, MissingEndpointIsNamed) {
  Instance inst = day_instance();
  Link& l = inst.links[inst.link_index("p1")];
  l.head = -1;
  l.head_id = "n99";
  inst.finalize();
  const ValidationReport r = validate(inst);
  ASSERT_FALSE(r.ok());
  EXPECT_TRUE(has_violation(r, "n99"));
}

// Each mutation breaks exactly one structural invariant.
TEST(Validate, SingleInvariantMutationsAreCaught) {
  const std::vector<std::pair<std::string, std::function<void(Instance&)>>> mutations = {
      {"duplicate node id", [](Instance& i) { i.nodes[2].id = "t1"; }},
      {"duplicate link id", [](Instance& i) { i.links[1].id = "pu1"; }},
      {"head_lb exceeds head_ub", [](Instance& i) { i.nodes[2].head_lb[3] = 200.0; }},
      {"reservoir head must be fixed", [](Instance& i) { i.nodes[0].head_ub[0] = 11.0; }},
      {"demand", [](Instance& i) { i.nodes[2].demand.pop_back(); }},
      {"tank diameter", [](Instance& i) { i.nodes[1].tank.diameter = 0.0; }},
      {"tank bottom exceeds", [](Instance& i) { i.nodes[1].tank.bottom = 32.0; }},
      {"initial volume", [](Instance& i) { i.nodes[1].tank.initial_volume = 1e9; }},
      {"plus_ub must equal", [](Instance& i) { i.links[1].plus_ub[0] = 0.1; }},
      {"minus_ub must equal", [](Instance& i) { i.links[1].minus_ub[0] = 0.1; }},
      {"directed lower bounds", [](Instance& i) { i.links[1].plus_lb[0] = -0.1; }},
      {"pump flow_lb must be 0", [](Instance& i) {
         i.links[0].flow_lb[0] = -0.1;
         i.links[0].minus_ub[0] = 0.1;
       }},
      {"pipe length", [](Instance& i) { i.links[1].pipe.length = -1.0; }},
      {"pipe resistance", [](Instance& i) { i.links[1].pipe.resistance = 0.0; }},
      {"pipe exponent", [](Instance& i) { i.links[1].pipe.exponent = 1.0; }},
      {"pump a must be positive", [](Instance& i) { i.links[0].pump.a = 0.0; }},
      {"pump c must be positive", [](Instance& i) { i.links[0].pump.c = -1.0; }},
      {"gain is negative", [](Instance& i) { i.links[0].pump.b = -5000.0; }},
      {"flow_cost", [](Instance& i) { i.links[0].pump.flow_cost.resize(3); }},
      {"time step", [](Instance& i) { i.dt[5] = 0.0; }},
      {"self-loop", [](Instance& i) { i.links[1].head = i.links[1].tail; }},
  };
  for (const auto& [needle, mutate] : mutations) {
    Instance inst = day_instance();
    mutate(inst);
    inst.finalize();
    const ValidationReport r = validate(inst);
    EXPECT_FALSE(r.ok()) << needle;
    EXPECT_TRUE(has_violation(r, needle)) << needle << "\n" << r.to_string();
  }
}

TEST(Incidence, PathMiddleNode) {
  InstanceBuilder b(1);
  b.reservoir("a", 10.0)
      .demand("b", 0.0, 0.0, 50.0)
      .demand("c", -0.01, 0.0, 50.0)
      .pipe("ab", "a", "b", 10.0, 1.0, -1.0, 1.0)
      .pipe("bc", "b", "c", 10.0, 1.0, -1.0, 1.0);
  const Incidence inc = incidence(b.build(), "b");
  EXPECT_EQ(inc.outgoing, std::vector<std::string>{"bc"});
  EXPECT_EQ(inc.incoming, std::vector<std::string>{"ab"});
}

TEST(Incidence, IsolatedNodeAndParallelLinks) {
  InstanceBuilder b(1);
  b.reservoir("a", 10.0)
      .demand("b", -0.01, 0.0, 50.0)
      .demand("lonely", 0.0, 0.0, 50.0)
      .pipe("x", "a", "b", 10.0, 1.0, -1.0, 1.0)
      .pipe("y", "a", "b", 10.0, 1.0, -1.0, 1.0);
  const Instance inst = b.build();
  const Incidence lonely = incidence(inst, "lonely");
  EXPECT_TRUE(lonely.outgoing.empty());
  EXPECT_TRUE(lonely.incoming.empty());
  EXPECT_EQ(incidence(inst, "a").outgoing, (std::vector<std::string>{"x", "y"}));
  EXPECT_THROW(incidence(inst, "nope"), std::invalid_argument);
}

TEST(Incidence, CoversEveryLinkTwice) {
  for (const Instance& inst : testing::oracle_instances()) {
    size_t out = 0, in = 0;
    for (const Node& n : inst.nodes) {
      const Incidence inc = incidence(inst, n.id);
      out += inc.outgoing.size();
      in += inc.incoming.size();
    }
    EXPECT_EQ(out, inst.links.size());
    EXPECT_EQ(in, inst.links.size());
  }
}

TEST(Tank, VolumeValues) {
  TankData t;
  t.diameter = 20.0;
  t.bottom = 0.0;
  // 500 pi, evaluated in long double.
  EXPECT_NEAR(tank_volume(t, 5.0), 1570.7963267948966, 1e-9);
  EXPECT_EQ(tank_volume(t, 0.0), 0.0);
  t.diameter = 10.0;
  t.bottom = 100.0;
  // 50 pi.
  EXPECT_NEAR(tank_volume(t, 102.0), 157.07963267948966, 1e-10);
  EXPECT_THROW(tank_volume(t, 99.0), std::domain_error);
}

TEST(Tank, HeadInvertsVolume) {
  TankData t;
  t.diameter = 20.0;
  t.bottom = 0.0;
  EXPECT_EQ(tank_head(t, 0.0), 0.0);
  EXPECT_NEAR(tank_head(t, 1570.7963267948966), 5.0, 1e-12);
  EXPECT_THROW(tank_head(t, -1.0), std::domain_error);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> vol(0.0, 1e4);
  for (int i = 0; i < 1000; ++i) {
    const double v = vol(rng);
    EXPECT_NEAR(tank_volume(t, tank_head(t, v)), v, 1e-12 * std::max(1.0, v));
  }
}

TEST(Tank, VolumeSlopeIsArea) {
  TankData t;
  t.diameter = 13.0;
  t.bottom = 4.0;
  const double h = 9.0, eps = 1e-3;
  const double fd = (tank_volume(t, h + eps) - tank_volume(t, h - eps)) / (2.0 * eps);
  EXPECT_NEAR(fd, tank_area(t), 1e-9 * tank_area(t));
}

TEST(PumpGroups, IdenticalParallelPumps) {
  InstanceBuilder b(1);
  b.reservoir("r1", 10.0).demand("j1", -0.1, 0.0, 100.0);
  for (const char* id : {"p3", "p1", "p2"}) b.pump(id, "r1", "j1", 50, -1000, 2, 0.2, {1}, {1});
  EXPECT_EQ(pump_groups(b.build()), (std::vector<std::vector<std::string>>{{"p1", "p2", "p3"}}));
}

TEST(PumpGroups, DifferentCurvesOrOrientation) {
  InstanceBuilder b(1);
  b.reservoir("r1", 10.0)
      .demand("j1", -0.1, 0.0, 100.0)
      .pump("p1", "r1", "j1", 50, -1000, 2, 0.2, {1}, {1})
      .pump("p2", "r1", "j1", 40, -1000, 2, 0.2, {1}, {1});
  EXPECT_TRUE(pump_groups(b.build()).empty());

  InstanceBuilder c(1);
  c.demand("a", 0.0, 0.0, 100.0)
      .demand("b", 0.0, 0.0, 100.0)
      .pump("p1", "a", "b", 50, -1000, 2, 0.2, {1}, {1})
      .pump("p2", "b", "a", 50, -1000, 2, 0.2, {1}, {1});
  EXPECT_TRUE(pump_groups(c.build()).empty());
}

TEST(DirectedBounds, DerivedFromFlowBounds) {
  Link l;
  l.flow_lb = {-0.3, 0.1, -0.5};
  l.flow_ub = {0.2, 0.4, -0.1};
  derive_directed_bounds(l);
  EXPECT_EQ(l.plus_ub, (std::vector<double>{0.2, 0.4, 0.0}));
  EXPECT_EQ(l.minus_ub, (std::vector<double>{0.3, 0.0, 0.5}));
  EXPECT_EQ(l.plus_lb, (std::vector<double>{0.0, 0.0, 0.0}));
  EXPECT_EQ(l.minus_lb, (std::vector<double>{0.0, 0.0, 0.0}));
}

}  // namespace
}  // namespace owf
