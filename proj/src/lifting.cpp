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

#include "owf/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace owf {

namespace {

// Simulated flows this small are round-off; either direction may carry them.
constexpr double kZeroFlow = 1e-12;

struct Lifter {
  const MilpModel& m;
  const Instance& inst;
  const Schedule& sched;
  const SimulationResult& sim;
  const Partition& part;
  std::vector<double> x;
  // Chosen direction per (link, step); -1 until assigned.
  std::vector<std::vector<int>> dir;

  double flow(int l, int k) const { return sim.states.at(k).flow[l]; }

  double head(int i, int t) const {
    const int K = inst.num_steps();
    if (inst.nodes[i].kind == NodeKind::kTank) {
      const TankData& tank = inst.nodes[i].tank;
      return tank.bottom + sim.volume[i][t] / tank_area(tank);
    }
    return sim.states.at(std::min(t, K - 1)).head[i];
  }

  double node_flow(int i, int k) const {
    if (inst.nodes[i].kind == NodeKind::kDemand) return inst.nodes[i].demand[k];
    return net_outflow(inst, i, sim.states.at(k).flow);
  }

  // Gate of the directed block d: y, 1 - y, or z for pumps.
  double gate(int l, int k, Direction d) const {
    if (inst.links[l].kind == LinkKind::kPump) return sched.status(k, l);
    return d == Direction::kPlus ? dir[l][k] : 1 - dir[l][k];
  }

  double directed(int l, int k, Direction d) const {
    const double q = flow(l, k);
    return d == Direction::kPlus ? std::max(0.0, q) : std::max(0.0, -q);
  }

  // Convex weights on the partition: lambda over points and the active interval.
  void combination(int l, int k, Direction d, std::vector<double>* lam, int* interval) const {
    const std::vector<double>& pts = part.at(l, k, d);
    const int P = static_cast<int>(pts.size());
    lam->assign(P, 0.0);
    *interval = -1;
    if (gate(l, k, d) < 0.5) return;
    const double v = directed(l, k, d);
    if (P == 1) {
      (*lam)[0] = 1.0;
      return;
    }
    int p = 1;
    while (p < P - 1 && v > pts[p]) ++p;
    const double t = std::clamp((v - pts[p - 1]) / (pts[p] - pts[p - 1]), 0.0, 1.0);
    (*lam)[p - 1] = 1.0 - t;
    (*lam)[p] = t;
    *interval = p;
  }

  double value(const VarKey& key) const {
    const int K = inst.num_steps();
    const int e = key.entity;
    const int k = key.k;
    switch (key.kind) {
      case VarKind::kHead: return head(e, k);
      case VarKind::kNodeFlow: return node_flow(e, k);
      case VarKind::kVolume: return sim.volume[e][k];
      case VarKind::kFlow: return flow(e, k);
      case VarKind::kFlowPlus: return directed(e, k, Direction::kPlus);
      case VarKind::kFlowMinus: return directed(e, k, Direction::kMinus);
      case VarKind::kDirection: return dir[e][k];
      case VarKind::kStatus: return sched.status(k, e);
      case VarKind::kGain: {
        if (!sched.status(k, e)) return 0.0;
        const PumpData& p = inst.links[e].pump;
        return p.a + p.b * std::pow(std::max(0.0, flow(e, k)), p.c);
      }
      case VarKind::kDeltaPlus:
        return std::max(0.0, head(inst.links[e].tail, k) - head(inst.links[e].head, k));
      case VarKind::kDeltaMinus:
        return std::max(0.0, head(inst.links[e].head, k) - head(inst.links[e].tail, k));
      case VarKind::kSwitchOn:
        return k == 0 ? 0.0 : std::max(0, sched.status(k, e) - sched.status(k - 1, e));
      case VarKind::kSwitchOff:
        return k == 0 ? 0.0 : std::max(0, sched.status(k - 1, e) - sched.status(k, e));
      case VarKind::kLambdaPlus:
      case VarKind::kLambdaMinus: {
        const Direction d =
            key.kind == VarKind::kLambdaPlus ? Direction::kPlus : Direction::kMinus;
        std::vector<double> lam;
        int interval = 0;
        combination(e, k, d, &lam, &interval);
        return lam.at(key.p);
      }
      case VarKind::kIntervalPlus:
      case VarKind::kIntervalMinus: {
        const Direction d =
            key.kind == VarKind::kIntervalPlus ? Direction::kPlus : Direction::kMinus;
        std::vector<double> lam;
        int interval = 0;
        combination(e, k, d, &lam, &interval);
        return interval == key.p ? 1.0 : 0.0;
      }
      case VarKind::kMcCormick: return node_flow(e, k) * head(e, k);
      case VarKind::kPhiPlus:
      case VarKind::kPhiMinus: {
        const PipeData& p = inst.links[e].pipe;
        const Direction d = key.kind == VarKind::kPhiPlus ? Direction::kPlus : Direction::kMinus;
        return p.length * p.resistance * std::pow(directed(e, k, d), p.exponent + 1.0);
      }
      case VarKind::kPsi: {
        const PumpData& p = inst.links[e].pump;
        const double q = directed(e, k, Direction::kPlus);
        return -(p.a * q + p.b * std::pow(q, p.c + 1.0));
      }
    }
    (void)K;
    return 0.0;
  }
};

}  // namespace

std::vector<double> lift_point(const MilpModel& m, const Instance& inst, const Schedule& sched,
                               const SimulationResult& sim, const Partition& part) {
  if (!sim.feasible) throw std::invalid_argument("lifting needs a feasible simulation");
  const int K = inst.num_steps();
  const int L = static_cast<int>(inst.links.size());
  Lifter lf{m, inst, sched, sim, part, {}, {}};
  lf.dir.assign(L, std::vector<int>(K, 1));
  std::vector<std::vector<int>> ambiguous(K);
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l < L; ++l) {
      const double q = lf.flow(l, k);
      if (q > kZeroFlow) {
        lf.dir[l][k] = 1;
      } else if (q < -kZeroFlow) {
        lf.dir[l][k] = 0;
      } else {
        ambiguous[k].push_back(l);
      }
    }
  }

  auto fill = [&](std::vector<double>& x) {
    x.resize(m.num_vars());
    for (int id = 0; id < m.num_vars(); ++id) x[id] = lf.value(m.var(id).key);
  };
  std::vector<double> x;
  fill(x);

  // Rows touching each (link, step).
  std::map<std::pair<int, int>, std::set<int>> link_rows;
  std::vector<std::vector<int>> var_rows(m.num_vars());
  for (int r = 0; r < m.num_rows(); ++r) {
    for (auto [v, c] : m.row(r).terms) var_rows[v].push_back(r);
  }
  for (int id = 0; id < m.num_vars(); ++id) {
    const VarKey& key = m.var(id).key;
    switch (key.kind) {
      case VarKind::kDirection:
      case VarKind::kLambdaPlus:
      case VarKind::kLambdaMinus:
      case VarKind::kIntervalPlus:
      case VarKind::kIntervalMinus:
        for (int r : var_rows[id]) link_rows[{key.entity, key.k}].insert(r);
        break;
      default: break;
    }
  }
  auto row_violation = [&](int r, const std::vector<double>& v) {
    const Row& row = m.row(r);
    double a = 0.0;
    for (auto [id, c] : row.terms) a += c * v[id];
    return std::max({0.0, row.lo - a, a - row.hi});
  };

  for (int k = 0; k < K; ++k) {
    const std::vector<int>& amb = ambiguous[k];
    if (amb.empty()) continue;
    std::set<int> rows;
    for (int l : amb) {
      auto it = link_rows.find({l, k});
      if (it != link_rows.end()) rows.insert(it->second.begin(), it->second.end());
    }
    if (rows.empty()) continue;
    if (amb.size() > 16) throw std::runtime_error("too many zero-flow links to enumerate");
    std::vector<int> ids;
    for (int id = 0; id < m.num_vars(); ++id) {
      const VarKey& key = m.var(id).key;
      if (key.k != k) continue;
      if (std::find(amb.begin(), amb.end(), key.entity) == amb.end()) continue;
      if (key.kind == VarKind::kDirection || key.kind == VarKind::kLambdaPlus ||
          key.kind == VarKind::kLambdaMinus || key.kind == VarKind::kIntervalPlus ||
          key.kind == VarKind::kIntervalMinus) {
        ids.push_back(id);
      }
    }
    double best = std::numeric_limits<double>::infinity();
    unsigned best_mask = 0;
    const unsigned n = static_cast<unsigned>(amb.size());
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      for (unsigned j = 0; j < n; ++j) lf.dir[amb[j]][k] = (mask >> j) & 1u;
      for (int id : ids) x[id] = lf.value(m.var(id).key);
      double worst = 0.0;
      for (int r : rows) worst = std::max(worst, row_violation(r, x));
      if (worst < best - 1e-15) {
        best = worst;
        best_mask = mask;
      }
    }
    for (unsigned j = 0; j < n; ++j) lf.dir[amb[j]][k] = (best_mask >> j) & 1u;
    for (int id : ids) x[id] = lf.value(m.var(id).key);
  }
  return x;
}

double bounds_violation(const Instance& inst, const BoundsStore& b, const Schedule& sched,
                        const SimulationResult& sim, std::string* where) {
  if (!sim.feasible) throw std::invalid_argument("bounds check needs a feasible simulation");
  const int K = inst.num_steps();
  double worst = 0.0;
  auto note = [&](double v, const std::string& what, int k) {
    if (v > worst) {
      worst = v;
      if (where) {
        std::ostringstream os;
        os << what << " at step " << k + 1 << " off by " << v;
        *where = os.str();
      }
    }
  };
  auto outside = [](double v, double lo, double hi) { return std::max({0.0, lo - v, v - hi}); };

  for (int k = 0; k < K; ++k) {
    const SteadyState& st = sim.states.at(k);
    for (size_t n = 0; n < inst.nodes.size(); ++n) {
      const Node& node = inst.nodes[n];
      const NodeBounds& nb = b.nodes[n];
      double h = st.head[n];
      if (node.kind == NodeKind::kTank) {
        h = node.tank.bottom + sim.volume[n][k] / tank_area(node.tank);
      }
      note(outside(h, nb.h_lb[k], nb.h_ub[k]), "head " + node.id, k);
      const double qn = node.kind == NodeKind::kDemand
                            ? node.demand[k]
                            : net_outflow(inst, static_cast<int>(n), st.flow);
      note(outside(qn, nb.q_lb[k], nb.q_ub[k]), "node flow " + node.id, k);
    }
    for (size_t l = 0; l < inst.links.size(); ++l) {
      const Link& link = inst.links[l];
      const LinkBounds& lb = b.links[l];
      const double q = st.flow[l];
      const double qp = std::max(0.0, q);
      const double qm = std::max(0.0, -q);
      note(outside(q, lb.q_lb[k], lb.q_ub[k]), "flow " + link.id, k);
      note(outside(qp, 0.0, lb.plus_ub[k]), "plus flow " + link.id, k);
      note(outside(qm, 0.0, lb.minus_ub[k]), "minus flow " + link.id, k);
      if (link.is_control()) {
        note(outside(sched.status(k, static_cast<int>(l)), lb.z_lb[k], lb.z_ub[k]),
             "status " + link.id, k);
      }
      if (link.kind == LinkKind::kPump) {
        if (sched.status(k, static_cast<int>(l))) {
          note(std::max(0.0, lb.plus_lb[k] - qp), "pump minimum " + link.id, k);
        }
        if (q > kZeroFlow) note(std::max(0.0, 1.0 - lb.y_ub[k]), "direction " + link.id, k);
        continue;
      }
      const double fwd = std::max({0.0, 1.0 - lb.y_ub[k], lb.plus_lb[k] - qp});
      const double bwd = std::max({0.0, lb.y_lb[k], lb.minus_lb[k] - qm});
      if (q > kZeroFlow) {
        note(fwd, "forward direction " + link.id, k);
      } else if (q < -kZeroFlow) {
        note(bwd, "reverse direction " + link.id, k);
      } else {
        note(std::min(fwd, bwd), "zero-flow direction " + link.id, k);
      }
    }
  }
  for (int i : inst.tanks()) {
    const Node& node = inst.nodes[i];
    const double h = node.tank.bottom + sim.volume[i][K] / tank_area(node.tank);
    note(outside(h, b.nodes[i].h_lb[K], b.nodes[i].h_ub[K]), "final head " + node.id, K - 1);
  }
  return worst;
}

}  // namespace owf
