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

#include "owf/branch_and_bound.hpp"
#include "owf/cuts.hpp"
#include "owf/formulation.hpp"
#include "owf/lifting.hpp"
#include "owf/lp.hpp"
#include "owf/owf_solver.hpp"
#include "owf/relaxation.hpp"
#include "support/instances.hpp"
#include "support/oracle.hpp"

namespace owf {
namespace {

using testing::InstanceBuilder;

double activity(const Row& row, const std::map<int, double>& x) {
  double s = 0.0;
  for (const auto& [id, c] : row.terms) {
    auto it = x.find(id);
    if (it != x.end()) s += c * it->second;
  }
  return s;
}

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

/** Feasible schedules in canonical pump order together with their simulations. */
std::vector<testing::FeasibleSchedule> canonical_feasible(const Instance& inst) {
  std::vector<testing::FeasibleSchedule> out;
  std::set<std::vector<ControlState>> seen;
  for (const testing::FeasibleSchedule& f : testing::brute_force(inst).feasible) {
    const Schedule c = canonical_schedule(inst, f.schedule);
    if (!seen.insert(c.steps).second) continue;
    SimulationResult sim = simulate(inst, c);
    if (!sim.feasible) continue;
    out.push_back({c, std::move(sim)});
  }
  return out;
}

TEST(Lifting, FeasibleSchedulesSatisfyEveryRelaxation) {
  for (const Instance& inst : testing::oracle_instances()) {
    const BoundsStore b = BoundsStore::from_instance(inst);
    const std::vector<testing::FeasibleSchedule> feasible = canonical_feasible(inst);
    ASSERT_FALSE(feasible.empty()) << inst.name;
    for (double xi : {0.05, 1.0}) {
      const Partition part = build_partitions(inst, b, xi);
      for (RelaxationKind kind : {RelaxationKind::kOA, RelaxationKind::kPW}) {
        RelaxationOptions o;
        o.kind = kind;
        o.xi = xi;
        o.duality_cuts = o.direction_vis = o.symmetry_cuts = true;
        o.share_pw_duality = kind == RelaxationKind::kPW;
        const MilpModel m = build_relaxation(inst, b, part, o, ModelScope::full(inst));
        for (const testing::FeasibleSchedule& f : feasible) {
          const std::vector<double> x = lift_point(m, inst, f.schedule, f.simulation, part);
          std::string worst;
          EXPECT_LE(m.max_violation(x, &worst), 1e-7) << inst.name << " xi " << xi << " " << worst;
          const double cost = f.simulation.cost;
          EXPECT_NEAR(m.evaluate_objective(x), cost, 1e-9 * (1.0 + std::abs(cost))) << inst.name;
        }
      }
    }
  }
}

TEST(Model, RegistryInvariants) {
  const Instance inst = testing::toy_switching_instance();
  const BoundsStore b = BoundsStore::from_instance(inst);
  const Partition part = build_partitions(inst, b, 1.0);
  for (const MilpModel& m : {build_oa(inst, b, part, ModelScope::full(inst)),
                             build_pw(inst, b, part, ModelScope::full(inst))}) {
    for (int id = 0; id < m.num_vars(); ++id) {
      const Variable& v = m.var(id);
      EXPECT_LE(v.lb, v.ub) << m.name(id, &inst);
      if (v.integer) {
        EXPECT_GE(v.lb, 0.0);
        EXPECT_LE(v.ub, 1.0);
      }
      EXPECT_EQ(m.find(v.key), id);
    }
    for (const Row& r : m.rows()) {
      EXPECT_FALSE(r.tag.empty());
      for (const auto& [id, c] : r.terms) {
        EXPECT_GE(id, 0);
        EXPECT_LT(id, m.num_vars());
      }
    }
  }
  MilpModel m;
  m.add_var({VarKind::kHead, 0, 0}, 0.0, 1.0);
  EXPECT_THROW(m.add_var({VarKind::kHead, 0, 0}, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(m.add_var({VarKind::kHead, 1, 0}, 2.0, 1.0), std::invalid_argument);
  EXPECT_THROW(m.at({VarKind::kHead, 5, 0}), std::out_of_range);
}

TEST(Model, PumpDirectedReverseFlowIsFixedAtZero) {
  const Instance inst = testing::toy_instance();
  const BoundsStore b = BoundsStore::from_instance(inst);
  const MilpModel m = build_oa(inst, b, build_partitions(inst, b, 1.0), ModelScope::full(inst));
  const int pu = inst.link_index("pu1");
  for (int k = 0; k < inst.num_steps(); ++k) {
    const int id = m.find({VarKind::kFlowMinus, pu, k});
    if (id >= 0) EXPECT_EQ(m.var(id).ub, 0.0);
  }
}

TEST(Model, RelaxedDirectionsAreContinuous) {
  const Instance inst = testing::toy_instance();
  const BoundsStore b = BoundsStore::from_instance(inst);
  const Partition part = build_partitions(inst, b, 1.0);
  const MilpModel m = build_oa(inst, b, part, ModelScope::full(inst), true);
  const int p1 = inst.link_index("p1");
  const Variable& y = m.var(m.at({VarKind::kDirection, p1, 0}));
  EXPECT_FALSE(y.integer);
  EXPECT_EQ(y.lb, 0.0);
  EXPECT_EQ(y.ub, 1.0);
  EXPECT_TRUE(m.var(m.at({VarKind::kStatus, inst.link_index("pu1"), 0})).integer);
}

Instance single_pump_instance() {
  InstanceBuilder b(1);
  b.reservoir("r1", 0.0)
      .demand("d1", -0.5, -500.0, 500.0)
      .pump("pu1", "r1", "d1", 100.0, -50.0, 2.0, 1.2, {1}, {1});
  return b.build();
}

TEST(OuterApproximation, PumpTangentCoefficients) {
  // At q = 1 the tangent of 100 - 50 q^2 has slope -100:
  // g <= 50 z - 100 (q - z), i.e. g + 100 q - 150 z <= 0.
  const Instance inst = single_pump_instance();
  const BoundsStore b = BoundsStore::from_instance(inst);
  Partition part;
  part.set(0, 0, Direction::kPlus, {0.0, 1.0, 1.2});
  const MilpModel m = build_oa(inst, b, part, ModelScope::steady(0));
  const int g = m.at({VarKind::kGain, 0, 0});
  const int q = m.at({VarKind::kFlowPlus, 0, 0});
  const int z = m.at({VarKind::kStatus, 0, 0});
  int found = 0;
  for (const Row& r : m.rows()) {
    if (!starts_with(r.tag, "oa-gain")) continue;
    std::map<int, double> c;
    for (const auto& [id, v] : r.terms) c[id] += v;
    if (std::abs(c[q] - 100.0) > 1e-12) continue;
    EXPECT_NEAR(c[g], 1.0, 1e-12);
    EXPECT_NEAR(c[z], -150.0, 1e-12);
    EXPECT_EQ(r.hi, 0.0);
    ++found;
  }
  EXPECT_EQ(found, 1);
}

Instance square_pipe_instance(double demand) {
  InstanceBuilder b(1);
  b.reservoir("r1", 100.0).demand("d1", -demand, -500.0, 500.0).pipe("p1", "r1", "d1", 1.0, 1.0, -1.0, 1.0);
  Instance inst = b.build();
  inst.links[0].pipe.exponent = 2.0;
  return inst;
}

TEST(OuterApproximation, TangentsUnderestimateAndChordsOverestimate) {
  const Instance inst = testing::two_source_instance();
  const BoundsStore b = BoundsStore::from_instance(inst);
  const Partition part = build_partitions(inst, b, 1.0);
  const MilpModel m = build_oa(inst, b, part, ModelScope::full(inst));
  for (int l : inst.pipes()) {
    const Curve curve = Curve::pipe(inst.links[l].pipe);
    for (int k = 0; k < inst.num_steps(); ++k) {
      const int y = m.at({VarKind::kDirection, l, k});
      const int qp = m.at({VarKind::kFlowPlus, l, k});
      const int dp = m.at({VarKind::kDeltaPlus, l, k});
      const std::string suffix = inst.links[l].id + " k=" + std::to_string(k + 1);
      for (const Row& r : m.rows()) {
        const bool tangent = r.tag == "oa-loss+ " + suffix;
        const bool chord = r.tag == "chord-loss+ " + suffix;
        if (!tangent && !chord) continue;
        const double lo = b.links[l].plus_lb[k], hi = b.links[l].plus_ub[k];
        for (int i = 0; i <= 1000; ++i) {
          const double qv = lo + (hi - lo) * i / 1000.0;
          const double a = activity(r, {{y, 1.0}, {qp, qv}, {dp, curve.value(qv)}});
          EXPECT_LE(a, r.hi + 1e-10) << r.tag << " q " << qv;
        }
      }
    }
  }
}

TEST(OuterApproximation, ZeroBreakpointGivesNonNegativeLoss) {
  const Instance inst = square_pipe_instance(0.25);
  const BoundsStore b = BoundsStore::from_instance(inst);
  const MilpModel m = build_oa(inst, b, build_partitions(inst, b, 1.0), ModelScope::steady(0));
  const int dp = m.at({VarKind::kDeltaPlus, 0, 0});
  int found = 0;
  for (const Row& r : m.rows()) {
    if (r.tag != "oa-loss+ p1 k=1") continue;
    std::map<int, double> c;
    for (const auto& [id, v] : r.terms) c[id] += v;
    bool only_dh = true;
    for (const auto& [id, v] : c) {
      if (id != dp && v != 0.0) only_dh = false;
    }
    if (only_dh) {
      EXPECT_EQ(c[dp], -1.0);
      EXPECT_EQ(r.hi, 0.0);
      ++found;
    }
  }
  EXPECT_EQ(found, 1);
}

/** Largest head loss the model admits at the instance's fixed demand. */
double max_loss(const MilpModel& base) {
  MilpModel m = base;
  for (int id = 0; id < m.num_vars(); ++id) m.set_objective(id, 0.0);
  m.set_objective(m.at({VarKind::kDeltaPlus, 0, 0}), -1.0);
  const MipResult r = branch_and_bound(m);
  EXPECT_EQ(r.status, MipStatus::kOptimal);
  return -r.objective;
}

TEST(Piecewise, EnvelopeFollowsTheActiveInterval) {
  // q^2 on [0, 1] with a midpoint: at q = 0.25 the envelope uses the chord
  // over [0, 0.5], so the loss can reach 0.125 (the true value is 0.0625).
  const Instance inst = square_pipe_instance(0.25);
  const BoundsStore b = BoundsStore::from_instance(inst);
  Partition part;
  part.set(0, 0, Direction::kPlus, {0.0, 0.5, 1.0});
  part.set(0, 0, Direction::kMinus, {0.0, 1.0});
  EXPECT_NEAR(max_loss(build_pw(inst, b, part, ModelScope::steady(0))), 0.125, 1e-9);
  // The OA chord alone spans [0, 1] and allows 0.25.
  EXPECT_NEAR(max_loss(build_oa(inst, b, part, ModelScope::steady(0))), 0.25, 1e-9);
  // A two-point partition reduces the envelope to that chord.
  part.set(0, 0, Direction::kPlus, {0.0, 1.0});
  EXPECT_NEAR(max_loss(build_pw(inst, b, part, ModelScope::steady(0))), 0.25, 1e-9);
}

TEST(Piecewise, ClosedDirectionZeroesMultipliers) {
  const Instance inst = square_pipe_instance(0.25);
  const BoundsStore b = BoundsStore::from_instance(inst);
  const Partition part = build_partitions(inst, b, 0.05);
  const MilpModel m = build_pw(inst, b, part, ModelScope::steady(0));
  const std::vector<double>& pts = part.at(0, 0, Direction::kMinus);
  // y = 1 selects the plus direction; every minus multiplier must vanish.
  for (size_t p = 0; p < pts.size(); ++p) {
    MilpModel probe = m;
    for (int id = 0; id < probe.num_vars(); ++id) probe.set_objective(id, 0.0);
    probe.set_objective(probe.at({VarKind::kLambdaMinus, 0, 0, static_cast<int>(p)}), -1.0);
    const int y = probe.at({VarKind::kDirection, 0, 0});
    probe.tighten(y, 1.0, 1.0);
    const LpSolution s = solve_lp(probe);
    ASSERT_EQ(s.status, LpStatus::kOptimal);
    EXPECT_NEAR(s.objective, 0.0, 1e-12);
  }
}

TEST(Relaxation, PiecewiseDominatesOuterApproximation) {
  for (const Instance& inst : testing::oracle_instances()) {
    const BoundsStore b = BoundsStore::from_instance(inst);
    const Partition part = build_partitions(inst, b, 1.0);
    RelaxationOptions oa, pw;
    pw.kind = RelaxationKind::kPW;
    const double f_oa = root_bound(inst, b, oa, nullptr, &part);
    const double f_pw = root_bound(inst, b, pw, nullptr, &part);
    EXPECT_GE(f_pw, f_oa - 1e-7 * (1.0 + std::abs(f_oa))) << inst.name;
  }
}

TEST(Relaxation, NestedRefinementNeverLowersTheBound) {
  for (const Instance& inst : testing::oracle_instances()) {
    const BoundsStore b = BoundsStore::from_instance(inst);
    const Partition coarse = build_partitions(inst, b, 5.0);
    const Partition mid = build_partitions(inst, b, 1.0, &coarse);
    const Partition fine = build_partitions(inst, b, 0.05, &mid);
    for (RelaxationKind kind : {RelaxationKind::kOA, RelaxationKind::kPW}) {
      RelaxationOptions o;
      o.kind = kind;
      const double f1 = root_bound(inst, b, o, nullptr, &coarse);
      const double f2 = root_bound(inst, b, o, nullptr, &mid);
      const double f3 = root_bound(inst, b, o, nullptr, &fine);
      EXPECT_GE(f2, f1 - 1e-7 * (1.0 + std::abs(f1))) << inst.name;
      EXPECT_GE(f3, f2 - 1e-7 * (1.0 + std::abs(f2))) << inst.name;
    }
  }
}

TEST(Shared, ClosedValveEqualisesNothingOpenValveEqualisesHeads) {
  InstanceBuilder b(1);
  b.reservoir("r1", 40.0).demand("d1", 0.0, 0.0, 100.0).valve("v1", "r1", "d1", -1.0, 1.0);
  const Instance inst = b.build();
  const BoundsStore bs = BoundsStore::from_instance(inst);
  const MilpModel m = build_oa(inst, bs, build_partitions(inst, bs, 1.0), ModelScope::steady(0));
  const int h = m.at({VarKind::kHead, inst.node_index("d1"), 0});
  const int z = m.at({VarKind::kStatus, 0, 0});
  for (double zv : {0.0, 1.0}) {
    for (double sign : {1.0, -1.0}) {
      MilpModel probe = m;
      for (int id = 0; id < probe.num_vars(); ++id) probe.set_objective(id, 0.0);
      probe.set_objective(h, sign);
      probe.tighten(z, zv, zv);
      const LpSolution s = solve_lp(probe);
      ASSERT_EQ(s.status, LpStatus::kOptimal);
      const double expected = zv == 1.0 ? 40.0 : (sign > 0 ? 0.0 : 100.0);
      EXPECT_NEAR(s.x[h], expected, 1e-9);
    }
  }
}

TEST(Shared, MinimumOnWindowIncludesBothEnds) {
  // t(k) <= t(k') <= t(k) + tau with tau = 2 dt covers k, k+1 and k+2.
  InstanceBuilder b(5);
  b.reservoir("r1", 10.0)
      .demand("d1", 0.0, -100.0, 100.0)
      .pump("pu1", "r1", "d1", 50, -1000, 2, 0.2, std::vector<double>(5, 1.0),
            std::vector<double>(5, 1.0))
      .switching(7200.0, 0.0, 5)
      .valve("v1", "r1", "d1", -1, 1);
  const Instance inst = b.build();
  const BoundsStore bs = BoundsStore::from_instance(inst);
  const MilpModel m = build_oa(inst, bs, build_partitions(inst, bs, 1.0), ModelScope::full(inst));
  const int on1 = m.at({VarKind::kSwitchOn, 0, 1});
  std::set<int> forced;
  for (const Row& r : m.rows()) {
    if (r.tag != "min-on pu1 k=2") continue;
    for (const auto& [id, c] : r.terms) {
      if (id != on1) forced.insert(m.var(id).key.k);
    }
  }
  EXPECT_EQ(forced, (std::set<int>{1, 2, 3}));
}

TEST(Shared, SwitchCountLimit) {
  const Instance inst = testing::toy_switching_instance();
  const BoundsStore bs = BoundsStore::from_instance(inst);
  const MilpModel m = build_oa(inst, bs, build_partitions(inst, bs, 1.0), ModelScope::full(inst));
  int found = 0;
  for (const Row& r : m.rows()) {
    if (r.tag != "switch-count pu1") continue;
    ++found;
    EXPECT_EQ(r.hi, 1.0);
    EXPECT_EQ(r.terms.size(), static_cast<size_t>(inst.num_steps() - 1));
    for (const auto& [id, c] : r.terms) {
      EXPECT_EQ(m.var(id).key.kind, VarKind::kSwitchOn);
      EXPECT_EQ(c, 1.0);
    }
  }
  EXPECT_EQ(found, 1);
}

TEST(Priorities, EarlierStepsFirstStatusBeforeDirection) {
  InstanceBuilder b(2);
  b.reservoir("r1", 10.0)
      .tank("t1", 15.0, 30.0, 34.0, 31.0, 38.0, 0.3)
      .pump("pu1", "r1", "t1", 50, -1000, 2, 0.2, {1, 1}, {1, 1})
      .pipe("p1", "r1", "t1", 500.0, 0.742, -0.3, 0.3);
  const Instance inst = b.build();
  const BoundsStore bs = BoundsStore::from_instance(inst);
  MilpModel m = build_oa(inst, bs, build_partitions(inst, bs, 1.0), ModelScope::full(inst));
  set_branch_priorities(m, inst);
  auto pri = [&](VarKind kind, int l, int k) { return m.var(m.at({kind, l, k})).priority; };
  const int z1 = pri(VarKind::kStatus, 0, 0), y1 = pri(VarKind::kDirection, 1, 0);
  const int z2 = pri(VarKind::kStatus, 0, 1), y2 = pri(VarKind::kDirection, 1, 1);
  EXPECT_GT(z1, y1);
  EXPECT_GT(y1, z2);
  EXPECT_GT(z2, y2);
  EXPECT_GT(y2, 0);
  for (const Variable& v : m.vars()) {
    if (!v.integer) EXPECT_EQ(v.priority, 0);
  }
}

TEST(Export, LpTextNamesVariablesAndTags) {
  const Instance inst = testing::toy_instance();
  const BoundsStore bs = BoundsStore::from_instance(inst);
  const MilpModel m = build_oa(inst, bs, build_partitions(inst, bs, 1.0), ModelScope::full(inst));
  const std::string text = export_lp(m, &inst);
  EXPECT_NE(text.find("Minimize"), std::string::npos);
  EXPECT_NE(text.find("Subject To"), std::string::npos);
  EXPECT_NE(text.find("End"), std::string::npos);
  EXPECT_NE(text.find(m.name(m.at({VarKind::kFlowPlus, inst.link_index("p1"), 0}), &inst)),
            std::string::npos);
  EXPECT_NE(text.find("oa-loss+"), std::string::npos);
}

}  // namespace
}  // namespace owf
