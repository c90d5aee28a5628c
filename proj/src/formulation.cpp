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

#include "owf/formulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace owf {

ModelScope ModelScope::full(const Instance& inst) {
  ModelScope s;
  for (int k = 0; k < inst.num_steps(); ++k) s.steps.push_back(k);
  return s;
}

ModelScope ModelScope::steady(int k) {
  ModelScope s;
  s.steps = {k};
  s.intertemporal = false;
  return s;
}

ModelScope ModelScope::pooled_step() {
  ModelScope s = steady(0);
  s.pooled = true;
  return s;
}

bool ModelScope::contains(int k) const {
  return std::find(steps.begin(), steps.end(), k) != steps.end();
}

bool ModelScope::is_integral(int k) const {
  if (!integral) return false;
  if (integral_steps.empty()) return true;
  return std::find(integral_steps.begin(), integral_steps.end(), k) != integral_steps.end();
}

namespace {

std::string at_step(const std::string& tag, const std::string& id, int k) {
  return tag + " " + id + " k=" + std::to_string(k + 1);
}

bool intertemporal(const Instance& inst, const ModelScope& scope) {
  return scope.intertemporal && !scope.pooled &&
         static_cast<int>(scope.steps.size()) == inst.num_steps();
}

// c * y for kPlus, c * (1 - y) for kMinus.
void add_directed(LinearExpr& e, int y, Direction d, double c) {
  if (d == Direction::kPlus) {
    e.add(y, c);
  } else {
    e.add(y, -c);
    e.add_constant(c);
  }
}

VarKind flow_kind(Direction d) {
  return d == Direction::kPlus ? VarKind::kFlowPlus : VarKind::kFlowMinus;
}
VarKind delta_kind(Direction d) {
  return d == Direction::kPlus ? VarKind::kDeltaPlus : VarKind::kDeltaMinus;
}
VarKind lambda_kind(Direction d) {
  return d == Direction::kPlus ? VarKind::kLambdaPlus : VarKind::kLambdaMinus;
}
VarKind interval_kind(Direction d) {
  return d == Direction::kPlus ? VarKind::kIntervalPlus : VarKind::kIntervalMinus;
}

void add_switching(MilpModel& m, const Instance& inst, int l) {
  const Link& link = inst.links[l];
  const PumpData& p = link.pump;
  const int K = inst.num_steps();
  const bool limited = p.min_on_s > 0.0 || p.min_off_s > 0.0 || p.max_switches < K;
  if (!limited || K < 2) return;

  // z_on/z_off stay continuous: once z is integral, 0 or 1 is always a
  // feasible choice for them, so integrality adds nothing.
  LinearExpr count;
  for (int k = 1; k < K; ++k) {
    const int on = m.add_var({VarKind::kSwitchOn, l, k}, 0.0, 1.0);
    const int off = m.add_var({VarKind::kSwitchOff, l, k}, 0.0, 1.0);
    const int z = m.at({VarKind::kStatus, l, k});
    const int zp = m.at({VarKind::kStatus, l, k - 1});
    m.add_constraint(LinearExpr().add(on, 1.0).add(z, -1.0).add(zp, 1.0), Sense::kGe, 0.0,
                     at_step("switch-on", link.id, k));
    m.add_constraint(LinearExpr().add(off, 1.0).add(zp, -1.0).add(z, 1.0), Sense::kGe, 0.0,
                     at_step("switch-off", link.id, k));
    for (int kk = k; kk < K; ++kk) {
      const double dt = inst.time(kk) - inst.time(k);
      const int zk = m.at({VarKind::kStatus, l, kk});
      if (p.min_on_s > 0.0 && dt <= p.min_on_s + 1e-9) {
        m.add_constraint(LinearExpr().add(on, 1.0).add(zk, -1.0), Sense::kLe, 0.0,
                         at_step("min-on", link.id, k));
      }
      if (p.min_off_s > 0.0 && dt <= p.min_off_s + 1e-9) {
        m.add_constraint(LinearExpr().add(zk, 1.0).add(off, 1.0), Sense::kLe, 1.0,
                         at_step("min-off", link.id, k));
      }
    }
    count.add(on, 1.0);
  }
  if (p.max_switches < K) {
    m.add_constraint(count, Sense::kLe, p.max_switches, "switch-count " + link.id);
  }
}

}  // namespace

MilpModel build_shared_constraints(const Instance& inst, const BoundsStore& b,
                                   const ModelScope& scope) {
  std::string why;
  if (!b.consistent(&why)) throw std::invalid_argument("inconsistent bounds: " + why);
  if (scope.pooled && b.steps != 1) throw std::invalid_argument("pooled scope needs pooled bounds");
  const bool temporal = intertemporal(inst, scope);
  const int K = inst.num_steps();

  MilpModel m;
  for (int k : scope.steps) {
    for (size_t i = 0; i < inst.nodes.size(); ++i) {
      const NodeBounds& nb = b.nodes[i];
      m.add_var({VarKind::kHead, static_cast<int>(i), k}, nb.h_lb[k], nb.h_ub[k]);
      m.add_var({VarKind::kNodeFlow, static_cast<int>(i), k}, nb.q_lb[k], nb.q_ub[k]);
    }
    for (size_t l = 0; l < inst.links.size(); ++l) {
      const LinkBounds& lb = b.links[l];
      const int li = static_cast<int>(l);
      m.add_var({VarKind::kFlow, li, k}, lb.q_lb[k], lb.q_ub[k]);
      if (inst.links[l].is_control()) {
        m.add_var({VarKind::kStatus, li, k}, lb.z_lb[k], lb.z_ub[k], scope.is_integral(k));
      }
      if (inst.links[l].kind == LinkKind::kPump) {
        m.add_var({VarKind::kGain, li, k}, 0.0, inst.links[l].pump.a);
      }
    }
  }
  if (temporal) {
    for (int i : inst.tanks()) {
      const NodeBounds& nb = b.nodes[i];
      m.add_var({VarKind::kHead, i, K}, nb.h_lb[K], nb.h_ub[K]);
    }
  }

  for (int k : scope.steps) {
    // Flow conservation with the node flow as the balancing term.
    for (size_t i = 0; i < inst.nodes.size(); ++i) {
      const int ni = static_cast<int>(i);
      LinearExpr e;
      for (int l : inst.out_links(ni)) e.add(m.at({VarKind::kFlow, l, k}), 1.0);
      for (int l : inst.in_links(ni)) e.add(m.at({VarKind::kFlow, l, k}), -1.0);
      e.add(m.at({VarKind::kNodeFlow, ni, k}), -1.0);
      m.add_constraint(e, Sense::kEq, 0.0, at_step("balance", inst.nodes[i].id, k));
    }

    for (size_t l = 0; l < inst.links.size(); ++l) {
      const Link& link = inst.links[l];
      if (!link.is_control()) continue;
      const int li = static_cast<int>(l);
      const LinkBounds& lb = b.links[l];
      const int q = m.at({VarKind::kFlow, li, k});
      const int z = m.at({VarKind::kStatus, li, k});
      const int hi = m.at({VarKind::kHead, link.tail, k});
      const int hj = m.at({VarKind::kHead, link.head, k});
      const double big_up = b.nodes[link.tail].h_ub[k] - b.nodes[link.head].h_lb[k];
      const double big_lo = b.nodes[link.tail].h_lb[k] - b.nodes[link.head].h_ub[k];

      if (link.kind == LinkKind::kValve) {
        m.add_constraint(LinearExpr().add(q, 1.0).add(z, -lb.q_ub[k]), Sense::kLe, 0.0,
                         at_step("valve-flow", link.id, k));
        m.add_constraint(LinearExpr().add(q, 1.0).add(z, -lb.q_lb[k]), Sense::kGe, 0.0,
                         at_step("valve-flow", link.id, k));
        m.add_constraint(LinearExpr().add(hi, 1.0).add(hj, -1.0).add(z, big_up), Sense::kLe,
                         big_up, at_step("valve-head", link.id, k));
        m.add_constraint(LinearExpr().add(hi, 1.0).add(hj, -1.0).add(z, big_lo), Sense::kGe,
                         big_lo, at_step("valve-head", link.id, k));
        continue;
      }

      // Pumps: disjunctive flow bounds, head decoupling, gain gating.
      const int g = m.at({VarKind::kGain, li, k});
      m.add_constraint(LinearExpr().add(q, 1.0).add(z, -lb.plus_ub[k]), Sense::kLe, 0.0,
                       at_step("pump-flow", link.id, k));
      m.add_constraint(LinearExpr().add(q, 1.0).add(z, -lb.plus_lb[k]), Sense::kGe, 0.0,
                       at_step("pump-flow", link.id, k));
      m.add_constraint(LinearExpr().add(hi, 1.0).add(hj, -1.0).add(g, 1.0).add(z, big_up),
                       Sense::kLe, big_up, at_step("pump-head", link.id, k));
      m.add_constraint(LinearExpr().add(hi, 1.0).add(hj, -1.0).add(g, 1.0).add(z, big_lo),
                       Sense::kGe, big_lo, at_step("pump-head", link.id, k));
      m.add_constraint(LinearExpr().add(g, 1.0).add(z, -link.pump.a), Sense::kLe, 0.0,
                       at_step("pump-gain", link.id, k));
    }
  }

  if (temporal) {
    for (int i : inst.tanks()) {
      const Node& node = inst.nodes[i];
      const double area = tank_area(node.tank);
      for (int t = 0; t <= K; ++t) {
        const double vlo = area * (b.nodes[i].h_lb[t] - node.tank.bottom);
        const double vhi = area * (b.nodes[i].h_ub[t] - node.tank.bottom);
        const int v = t == 0 ? m.add_var({VarKind::kVolume, i, 0}, node.tank.initial_volume,
                                         node.tank.initial_volume)
                             : m.add_var({VarKind::kVolume, i, t}, std::min(vlo, vhi), vhi);
        m.add_constraint(LinearExpr().add(v, 1.0).add(m.at({VarKind::kHead, i, t}), -area),
                         Sense::kEq, -area * node.tank.bottom, at_step("tank-volume", node.id, t));
      }
      for (int k = 0; k < K; ++k) {
        m.add_constraint(LinearExpr()
                             .add(m.at({VarKind::kVolume, i, k + 1}), 1.0)
                             .add(m.at({VarKind::kVolume, i, k}), -1.0)
                             .add(m.at({VarKind::kNodeFlow, i, k}), inst.dt[k]),
                         Sense::kEq, 0.0, at_step("euler", node.id, k));
      }
      m.add_constraint(LinearExpr().add(m.at({VarKind::kVolume, i, K}), 1.0), Sense::kGe,
                       node.tank.initial_volume, "recovery " + node.id);
    }
    for (int l : inst.pumps()) add_switching(m, inst, l);
  }

  if (!scope.pooled) {
    for (int k : scope.steps) {
      for (int l : inst.pumps()) {
        const PumpData& p = inst.links[l].pump;
        m.add_objective(m.at({VarKind::kFlow, l, k}), p.flow_cost[k]);
        m.add_objective(m.at({VarKind::kStatus, l, k}), p.status_cost[k]);
      }
    }
  }
  return m;
}

void add_direction_decomposition(MilpModel& m, const Instance& inst, const BoundsStore& b,
                                 const ModelScope& scope, bool relax) {
  for (int k : scope.steps) {
    const bool integral = scope.is_integral(k) && !relax;
    for (size_t l = 0; l < inst.links.size(); ++l) {
      const Link& link = inst.links[l];
      const LinkBounds& lb = b.links[l];
      const int li = static_cast<int>(l);
      const int qp = m.add_var({VarKind::kFlowPlus, li, k}, 0.0, lb.plus_ub[k]);
      const int qm = m.add_var({VarKind::kFlowMinus, li, k}, 0.0,
                               link.kind == LinkKind::kPump ? 0.0 : lb.minus_ub[k]);
      const int y = m.add_var({VarKind::kDirection, li, k}, lb.y_lb[k], lb.y_ub[k], integral);
      const int q = m.at({VarKind::kFlow, li, k});
      m.add_constraint(LinearExpr().add(q, 1.0).add(qp, -1.0).add(qm, 1.0), Sense::kEq, 0.0,
                       at_step("split", link.id, k));
      m.add_constraint(LinearExpr().add(qp, 1.0).add(y, -lb.plus_ub[k]), Sense::kLe, 0.0,
                       at_step("dir-plus", link.id, k));
      if (link.kind == LinkKind::kPump) {
        const int z = m.at({VarKind::kStatus, li, k});
        m.add_constraint(LinearExpr().add(qp, 1.0).add(z, -lb.plus_lb[k]), Sense::kGe, 0.0,
                         at_step("dir-plus", link.id, k));
        continue;
      }
      m.add_constraint(LinearExpr().add(qp, 1.0).add(y, -lb.plus_lb[k]), Sense::kGe, 0.0,
                       at_step("dir-plus", link.id, k));
      // q- <= minus_ub (1 - y) and q- >= minus_lb (1 - y).
      m.add_constraint(LinearExpr().add(qm, 1.0).add(y, lb.minus_ub[k]), Sense::kLe,
                       lb.minus_ub[k], at_step("dir-minus", link.id, k));
      m.add_constraint(LinearExpr().add(qm, 1.0).add(y, lb.minus_lb[k]), Sense::kGe,
                       lb.minus_lb[k], at_step("dir-minus", link.id, k));
      if (link.kind != LinkKind::kPipe) continue;

      const double big_plus =
          std::max(0.0, b.nodes[link.tail].h_ub[k] - b.nodes[link.head].h_lb[k]);
      const double big_minus =
          std::max(0.0, b.nodes[link.head].h_ub[k] - b.nodes[link.tail].h_lb[k]);
      const int dp = m.add_var({VarKind::kDeltaPlus, li, k}, 0.0, big_plus);
      const int dm = m.add_var({VarKind::kDeltaMinus, li, k}, 0.0, big_minus);
      m.add_constraint(LinearExpr()
                           .add(dp, 1.0)
                           .add(dm, -1.0)
                           .add(m.at({VarKind::kHead, link.tail, k}), -1.0)
                           .add(m.at({VarKind::kHead, link.head, k}), 1.0),
                       Sense::kEq, 0.0, at_step("head-split", link.id, k));
      m.add_constraint(LinearExpr().add(dp, 1.0).add(y, -big_plus), Sense::kLe, 0.0,
                       at_step("head-dir", link.id, k));
      m.add_constraint(LinearExpr().add(dm, 1.0).add(y, big_minus), Sense::kLe, big_minus,
                       at_step("head-dir", link.id, k));
    }
  }
}

void add_outer_approximation(MilpModel& m, const Instance& inst, const BoundsStore& b,
                             const Partition& part, const ModelScope& scope) {
  (void)b;
  for (int k : scope.steps) {
    for (int l : inst.pipes()) {
      const Link& link = inst.links[l];
      const Curve curve = Curve::pipe(link.pipe);
      const int y = m.at({VarKind::kDirection, l, k});
      for (Direction d : {Direction::kPlus, Direction::kMinus}) {
        if (!part.has(l, k, d)) throw std::invalid_argument("missing partition for " + link.id);
        const std::vector<double>& pts = part.at(l, k, d);
        const int q = m.at({flow_kind(d), l, k});
        const int dh = m.at({delta_kind(d), l, k});
        const char* sfx = d == Direction::kPlus ? "+" : "-";
        // Tangents: f(qh) y + f'(qh)(q - qh y) <= dh.
        for (double qh : pts) {
          const double f = curve.value(qh);
          const double s = curve.slope(qh);
          LinearExpr e;
          e.add(q, s).add(dh, -1.0);
          add_directed(e, y, d, f - s * qh);
          m.add_constraint(e, Sense::kLe, 0.0, at_step(std::string("oa-loss") + sfx, link.id, k));
        }
        // Chord: dh <= f(lo) y + s (q - lo y).
        const double lo = pts.front();
        const double hi = pts.back();
        const double s = hi > lo ? (curve.value(hi) - curve.value(lo)) / (hi - lo) : curve.slope(lo);
        LinearExpr e;
        e.add(dh, 1.0).add(q, -s);
        add_directed(e, y, d, -(curve.value(lo) - s * lo));
        m.add_constraint(e, Sense::kLe, 0.0, at_step(std::string("chord-loss") + sfx, link.id, k));
      }
    }
    for (int l : inst.pumps()) {
      const Link& link = inst.links[l];
      const Curve curve = Curve::pump(link.pump);
      if (!part.has(l, k, Direction::kPlus)) {
        throw std::invalid_argument("missing partition for " + link.id);
      }
      const std::vector<double>& pts = part.at(l, k, Direction::kPlus);
      const int q = m.at({VarKind::kFlowPlus, l, k});
      const int z = m.at({VarKind::kStatus, l, k});
      const int g = m.at({VarKind::kGain, l, k});
      // Tangents: g <= f(qh) z + f'(qh)(q - qh z).
      for (double qh : pts) {
        const double s = curve.slope(qh);
        if (!std::isfinite(s)) continue;
        LinearExpr e;
        e.add(g, 1.0).add(q, -s).add(z, -(curve.value(qh) - s * qh));
        m.add_constraint(e, Sense::kLe, 0.0, at_step("oa-gain", link.id, k));
      }
      const double lo = pts.front();
      const double hi = pts.back();
      const double s = hi > lo ? (curve.value(hi) - curve.value(lo)) / (hi - lo) : 0.0;
      LinearExpr e;
      e.add(g, 1.0).add(q, -s).add(z, -(curve.value(lo) - s * lo));
      m.add_constraint(e, Sense::kGe, 0.0, at_step("chord-gain", link.id, k));
    }
  }
}

namespace {

// Convex-combination block over points pts, activated by `gate` (already
// expressed as c*var + const through add_directed).
void add_combination(MilpModel& m, const std::vector<double>& pts, int link, int k, Direction d,
                     int gate, Direction gate_dir, bool integral, const std::string& id,
                     std::vector<int>* lambdas) {
  const int P = static_cast<int>(pts.size());
  std::vector<int> lam(P), x(P, -1);
  for (int p = 0; p < P; ++p) lam[p] = m.add_var({lambda_kind(d), link, k, p}, 0.0, 1.0);
  for (int p = 1; p < P; ++p) x[p] = m.add_var({interval_kind(d), link, k, p}, 0.0, 1.0, integral);

  LinearExpr sum_lam;
  for (int p = 0; p < P; ++p) sum_lam.add(lam[p], 1.0);
  add_directed(sum_lam, gate, gate_dir, -1.0);
  m.add_constraint(sum_lam, Sense::kEq, 0.0, at_step("pw-sum", id, k));
  if (P > 1) {
    LinearExpr sum_x;
    for (int p = 1; p < P; ++p) sum_x.add(x[p], 1.0);
    add_directed(sum_x, gate, gate_dir, -1.0);
    m.add_constraint(sum_x, Sense::kEq, 0.0, at_step("pw-interval", id, k));
    for (int p = 0; p < P; ++p) {
      LinearExpr e;
      e.add(lam[p], 1.0);
      if (p >= 1) e.add(x[p], -1.0);
      if (p + 1 < P) e.add(x[p + 1], -1.0);
      m.add_constraint(e, Sense::kLe, 0.0, at_step("pw-adjacent", id, k));
    }
  }
  LinearExpr tie;
  tie.add(m.at({flow_kind(d), link, k}), 1.0);
  for (int p = 0; p < P; ++p) tie.add(lam[p], -pts[p]);
  m.add_constraint(tie, Sense::kEq, 0.0, at_step("pw-flow", id, k));
  *lambdas = lam;
}

}  // namespace

void add_piecewise(MilpModel& m, const Instance& inst, const Partition& part,
                   const ModelScope& scope, bool relax) {
  for (int k : scope.steps) {
    const bool integral = scope.is_integral(k) && !relax;
    for (int l : inst.pipes()) {
      const Link& link = inst.links[l];
      const Curve curve = Curve::pipe(link.pipe);
      const int y = m.at({VarKind::kDirection, l, k});
      for (Direction d : {Direction::kPlus, Direction::kMinus}) {
        const std::vector<double>& pts = part.at(l, k, d);
        std::vector<int> lam;
        add_combination(m, pts, l, k, d, y, d, integral, link.id, &lam);
        LinearExpr env;
        for (size_t p = 0; p < pts.size(); ++p) env.add(lam[p], curve.value(pts[p]));
        env.add(m.at({delta_kind(d), l, k}), -1.0);
        m.add_constraint(env, Sense::kGe, 0.0, at_step("pw-loss", link.id, k));
      }
    }
    for (int l : inst.pumps()) {
      const Link& link = inst.links[l];
      const Curve curve = Curve::pump(link.pump);
      const std::vector<double>& pts = part.at(l, k, Direction::kPlus);
      const int z = m.at({VarKind::kStatus, l, k});
      std::vector<int> lam;
      add_combination(m, pts, l, k, Direction::kPlus, z, Direction::kPlus, integral, link.id, &lam);
      LinearExpr env;
      env.add(m.at({VarKind::kGain, l, k}), 1.0);
      for (size_t p = 0; p < pts.size(); ++p) env.add(lam[p], -curve.value(pts[p]));
      m.add_constraint(env, Sense::kGe, 0.0, at_step("pw-gain", link.id, k));
    }
  }
}

MilpModel build_oa(const Instance& inst, const BoundsStore& b, const Partition& part,
                   const ModelScope& scope, bool relax) {
  MilpModel m = build_shared_constraints(inst, b, scope);
  add_direction_decomposition(m, inst, b, scope, relax);
  add_outer_approximation(m, inst, b, part, scope);
  return m;
}

MilpModel build_pw(const Instance& inst, const BoundsStore& b, const Partition& part,
                   const ModelScope& scope, bool relax) {
  MilpModel m = build_oa(inst, b, part, scope, relax);
  add_piecewise(m, inst, part, scope, relax);
  return m;
}

void set_branch_priorities(MilpModel& m, const Instance& inst) {
  const int K = inst.num_steps();
  for (int id = 0; id < m.num_vars(); ++id) {
    Variable& v = m.var(id);
    if (!v.integer) {
      v.priority = 0;
      continue;
    }
    switch (v.key.kind) {
      case VarKind::kStatus: v.priority = 2 * (K - v.key.k) + 2; break;
      case VarKind::kDirection: v.priority = 2 * (K - v.key.k) + 1; break;
      default: v.priority = 0; break;
    }
  }
}

}  // namespace owf
