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
#include <map>
#include <set>

#include "owf/lifting.hpp"
#include "owf/obbt.hpp"
#include "owf/obcg.hpp"
#include "owf/owf_solver.hpp"
#include "owf/relaxation.hpp"
#include "support/instances.hpp"
#include "support/oracle.hpp"

namespace owf {
namespace {

using testing::InstanceBuilder;

ObbtConfig config(ObbtVariant v, int jobs = 0) {
  ObbtConfig c;
  c.variant = v;
  c.jobs = jobs;
  return c;
}

double naive_root(const Instance& inst, const BoundsStore& b) {
  RelaxationOptions o;
  o.duality_cuts = o.direction_vis = true;
  return root_bound(inst, b, o);
}

TEST(ObbtChain, Parsing) {
  EXPECT_EQ(parse_obbt_chain("BT-SR,BT-SS"),
            (std::vector<ObbtVariant>{ObbtVariant::kSR, ObbtVariant::kSS}));
  EXPECT_EQ(parse_obbt_chain("sq, bt-tr,BT-TS"),
            (std::vector<ObbtVariant>{ObbtVariant::kSQ, ObbtVariant::kTR, ObbtVariant::kTS}));
  EXPECT_THROW(parse_obbt_chain("BT-XX"), std::invalid_argument);
  EXPECT_TRUE(parse_obbt_chain("").empty());
  EXPECT_STREQ(to_string(ObbtVariant::kTS), "BT-TS");
}

TEST(Obbt, SinglePipeFlowIsPinned) {
  const Instance inst = testing::single_pipe_instance();
  const BoundsStore b = BoundsStore::from_instance(inst);
  const ObbtResult r = obbt(inst, b, config(ObbtVariant::kSR));
  ASSERT_NE(r.status, ObbtStatus::kInfeasible);
  const LinkBounds& l = r.bounds.links[0];
  EXPECT_LE(l.q_lb[0], 0.1);
  EXPECT_GE(l.q_ub[0], 0.1);
  EXPECT_NEAR(l.q_lb[0], 0.1, 1e-5);
  EXPECT_NEAR(l.q_ub[0], 0.1, 1e-5);
  EXPECT_EQ(l.y_lb[0], 1.0);
}

TEST(Obbt, FixpointTerminatesAfterOneIteration) {
  const Instance inst = testing::toy_instance();
  const BoundsStore b = BoundsStore::from_instance(inst);
  const ObbtResult first = obbt(inst, b, config(ObbtVariant::kSR));
  const ObbtResult again = obbt(inst, first.bounds, config(ObbtVariant::kSR));
  EXPECT_EQ(again.iterations, 1);
  EXPECT_EQ(again.status, ObbtStatus::kConverged);
  EXPECT_TRUE(first.bounds.contains(again.bounds));
  ASSERT_EQ(again.changes.size(), 1u);
  EXPECT_LT(again.changes[0], ObbtConfig().tolerance);
}

TEST(Obbt, PumpThatCannotLiftIsSwitchedOff) {
  // The pump gains at most 20 m from a 10 m reservoir but the demand needs
  // 40 m; a second reservoir at 50 m serves the demand instead.
  InstanceBuilder b(2);
  b.reservoir("low", 10.0)
      .reservoir("high", 50.0)
      .demand("d1", -0.02, 40.0, 100.0)
      .pump("pu1", "low", "d1", 20.0, -500.0, 2.0, 0.15, {10, 10}, {1, 1})
      .pipe("p1", "high", "d1", 200.0, 0.742, -0.3, 0.3);
  const Instance inst = b.build();
  const ObbtResult r = obbt(inst, BoundsStore::from_instance(inst), config(ObbtVariant::kSR));
  const int pu = inst.link_index("pu1");
  for (int k = 0; k < 2; ++k) {
    EXPECT_EQ(r.bounds.links[pu].z_ub[k], 0.0);
    EXPECT_EQ(r.bounds.links[pu].q_ub[k], 0.0);
  }
}

TEST(Obbt, StarvedInstanceIsInfeasible) {
  const Instance inst = testing::starved_instance();
  const ObbtResult r = obbt(inst, BoundsStore::from_instance(inst), config(ObbtVariant::kSR));
  EXPECT_EQ(r.status, ObbtStatus::kInfeasible);
}

void expect_sound(const Instance& inst, const BoundsStore& bounds, const std::string& label) {
  for (const testing::FeasibleSchedule& f : testing::brute_force(inst).feasible) {
    std::string where;
    EXPECT_LE(bounds_violation(inst, bounds, f.schedule, f.simulation, &where), 1e-7)
        << inst.name << " " << label << " " << where;
  }
}

TEST(Obbt, EveryVariantIsSoundOnOracleInstances) {
  for (const Instance& inst : testing::oracle_instances()) {
    const BoundsStore b = BoundsStore::from_instance(inst);
    for (ObbtVariant v : {ObbtVariant::kSR, ObbtVariant::kSS, ObbtVariant::kSQ, ObbtVariant::kTR}) {
      const ObbtResult r = obbt(inst, b, config(v));
      ASSERT_NE(r.status, ObbtStatus::kInfeasible) << inst.name;
      EXPECT_TRUE(b.contains(r.bounds)) << inst.name << " " << to_string(v);
      std::string why;
      EXPECT_TRUE(r.bounds.consistent(&why)) << why;
      expect_sound(inst, r.bounds, to_string(v));
    }
  }
}

TEST(Obbt, TemporalIntegralVariantIsSound) {
  const Instance inst = testing::toy_instance();
  const BoundsStore b = BoundsStore::from_instance(inst);
  const ObbtResult r = obbt(inst, b, config(ObbtVariant::kTS));
  EXPECT_TRUE(b.contains(r.bounds));
  expect_sound(inst, r.bounds, "BT-TS");
}

TEST(Obbt, ChainedStagesAreNestedAndRaiseTheRoot) {
  for (const Instance& inst : {testing::toy_instance(), testing::two_source_instance()}) {
    BoundsStore b = BoundsStore::from_instance(inst);
    double root = naive_root(inst, b);
    for (ObbtVariant v : {ObbtVariant::kSR, ObbtVariant::kSS, ObbtVariant::kSQ}) {
      const ObbtResult r = obbt(inst, b, config(v));
      EXPECT_TRUE(b.contains(r.bounds)) << to_string(v);
      const double next = naive_root(inst, r.bounds);
      EXPECT_GE(next, root - 1e-7 * (1.0 + std::abs(root))) << inst.name << " " << to_string(v);
      b = r.bounds;
      root = next;
    }
  }
}

TEST(Obbt, IterationsAreNested) {
  const Instance inst = testing::pump_valve_instance();
  const BoundsStore b = BoundsStore::from_instance(inst);
  BoundsStore prev = b;
  for (int it = 1; it <= 4; ++it) {
    ObbtConfig c = config(ObbtVariant::kSR);
    c.max_iterations = it;
    const ObbtResult r = obbt(inst, b, c);
    EXPECT_TRUE(prev.contains(r.bounds)) << it;
    prev = r.bounds;
  }
}

TEST(Obbt, ThreadCountDoesNotChangeTheResult) {
  const Instance inst = testing::two_source_instance();
  const BoundsStore b = BoundsStore::from_instance(inst);
  for (ObbtVariant v : {ObbtVariant::kSR, ObbtVariant::kSQ}) {
    const ObbtResult one = obbt(inst, b, config(v, 1));
    const ObbtResult four = obbt(inst, b, config(v, 4));
    const ObbtResult again = obbt(inst, b, config(v, 4));
    EXPECT_TRUE(one.bounds == four.bounds) << to_string(v);
    EXPECT_TRUE(four.bounds == again.bounds) << to_string(v);
    EXPECT_EQ(one.iterations, four.iterations);
  }
}

using Point = std::map<VarKey, double>;

/** Cuts over exactly two status variables of the given links at step k. */
std::vector<Cut> status_pair_cuts(const CutSet& cuts, int a, int b, int k) {
  std::vector<Cut> out;
  for (const Cut& c : cuts.cuts) {
    if (c.terms.size() != 2) continue;
    std::set<int> links;
    bool ok = true;
    for (const auto& [key, coef] : c.terms) {
      ok &= key.kind == VarKind::kStatus && key.k == k;
      links.insert(key.entity);
    }
    if (ok && links == std::set<int>{a, b}) out.push_back(c);
  }
  return out;
}

bool admits(const std::vector<Cut>& cuts, const Point& p) {
  for (const Cut& c : cuts) {
    if (c.violation([&](const VarKey& k) { return p.count(k) ? p.at(k) : 0.0; }) > 1e-9) {
      return false;
    }
  }
  return true;
}

TEST(Obcg, SeriesPumpsImplyDownstreamOff) {
  const Instance inst = testing::series_pumps_instance();
  const BoundsStore b = BoundsStore::from_instance(inst);
  const ObcgOutput out = obcg_binary_binary(inst, b, 0);
  const int p1 = inst.link_index("pu1"), p2 = inst.link_index("pu2");
  for (int k = 0; k < inst.num_steps(); ++k) {
    const std::vector<Cut> pair = status_pair_cuts(out.cuts, p1, p2, k);
    ASSERT_FALSE(pair.empty()) << k;
    for (const Cut& c : pair) EXPECT_EQ(c.family, CutFamily::kObcg);
    const VarKey z1{VarKind::kStatus, p1, k}, z2{VarKind::kStatus, p2, k};
    EXPECT_FALSE(admits(pair, {{z1, 0.0}, {z2, 1.0}}));
    EXPECT_TRUE(admits(pair, {{z1, 0.0}, {z2, 0.0}}));
    EXPECT_TRUE(admits(pair, {{z1, 1.0}, {z2, 1.0}}));
  }
}

TEST(Obcg, ParallelPumpsGetNoPairCut) {
  const Instance inst = testing::parallel_pumps_instance();
  const BoundsStore b = BoundsStore::from_instance(inst);
  const ObcgOutput out = obcg(inst, b);
  const int p1 = inst.link_index("pu1"), p2 = inst.link_index("pu2");
  for (int k = 0; k < inst.num_steps(); ++k) {
    EXPECT_TRUE(status_pair_cuts(out.cuts, p1, p2, k).empty()) << k;
  }
}

TEST(Obcg, PumpFlowVanishesWhenOff) {
  const Instance inst = testing::toy_instance();
  const BoundsStore b = BoundsStore::from_instance(inst);
  const ObcgOutput out = obcg_binary_continuous(inst, b);
  const int pu = inst.link_index("pu1");
  const VarKey z{VarKind::kStatus, pu, 0}, q{VarKind::kFlow, pu, 0};
  std::vector<Cut> linked;
  for (const Cut& c : out.cuts.cuts) {
    bool has_z = false, has_q = false;
    for (const auto& [key, coef] : c.terms) {
      has_z |= key == z;
      has_q |= key == q;
    }
    if (has_z && has_q && c.terms.size() == 2) linked.push_back(c);
  }
  ASSERT_FALSE(linked.empty());
  EXPECT_FALSE(admits(linked, {{z, 0.0}, {q, 0.01}}));
  EXPECT_TRUE(admits(linked, {{z, 0.0}, {q, 0.0}}));
}

TEST(Obcg, CutsHoldAtLiftedFeasiblePoints) {
  for (const Instance& inst : testing::oracle_instances()) {
    if (inst.name == "pump-valve") continue;  // covered by the acceptance suite
    const BoundsStore b = BoundsStore::from_instance(inst);
    const ObcgOutput out = obcg(inst, b);
    ASSERT_FALSE(out.infeasible) << inst.name;
    const Partition part = build_partitions(inst, b, 1.0);
    RelaxationOptions o;
    const MilpModel m = build_relaxation(inst, b, part, o, ModelScope::full(inst), &out.cuts);
    for (const testing::FeasibleSchedule& f : testing::brute_force(inst).feasible) {
      const std::vector<double> x = lift_point(m, inst, f.schedule, f.simulation, part);
      std::string worst;
      EXPECT_LE(m.max_violation(x, &worst), 1e-7) << inst.name << " " << worst;
    }
  }
}

TEST(Obcg, StarvedSteadyStateIsDetected) {
  const Instance inst = testing::starved_instance();
  EXPECT_TRUE(obcg(inst, BoundsStore::from_instance(inst)).infeasible);
}

}  // namespace
}  // namespace owf
