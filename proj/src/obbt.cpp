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

#include "owf/obbt.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "owf/bound_queries.hpp"
#include "owf/lp.hpp"
#include "owf/relaxation.hpp"

namespace owf {

const char* to_string(ObbtVariant v) {
  switch (v) {
    case ObbtVariant::kSR: return "BT-SR";
    case ObbtVariant::kSS: return "BT-SS";
    case ObbtVariant::kSQ: return "BT-SQ";
    case ObbtVariant::kTR: return "BT-TR";
    case ObbtVariant::kTS: return "BT-TS";
  }
  return "?";
}

const char* to_string(ObbtStatus s) {
  switch (s) {
    case ObbtStatus::kConverged: return "converged";
    case ObbtStatus::kIterationLimit: return "iteration-limit";
    case ObbtStatus::kInfeasible: return "infeasible";
  }
  return "?";
}

bool parse_obbt_variant(const std::string& text, ObbtVariant* v) {
  std::string s;
  for (char c : text) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s.rfind("bt-", 0) == 0) s = s.substr(3);
  static const std::pair<const char*, ObbtVariant> names[] = {
      {"sr", ObbtVariant::kSR}, {"ss", ObbtVariant::kSS}, {"sq", ObbtVariant::kSQ},
      {"tr", ObbtVariant::kTR}, {"ts", ObbtVariant::kTS}};
  for (const auto& [name, value] : names) {
    if (s == name) {
      *v = value;
      return true;
    }
  }
  return false;
}

std::vector<ObbtVariant> parse_obbt_chain(const std::string& text) {
  std::vector<ObbtVariant> chain;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    ObbtVariant v;
    if (!parse_obbt_variant(item, &v)) {
      throw std::invalid_argument("unknown bound tightening variant '" + item + "'");
    }
    chain.push_back(v);
  }
  return chain;
}

namespace {

constexpr double kBinaryTol = 1e-6;
constexpr double kRound = 1e-6;

double round_down(double v) { return v - kRound * (1.0 + std::abs(v)); }
double round_up(double v) { return v + kRound * (1.0 + std::abs(v)); }

enum class Slot { kHead, kNodeFlow, kDirection, kStatus, kPlus, kMinus };

/** One min/max pair. `index` is the time index into the store being tightened. */
struct Target {
  Slot slot;
  int entity;
  int index;
  VarKey var;
  int fix_var = -1;
  double fix_value = 0.0;
};

struct Group {
  MilpModel model;
  bool integral = false;
  std::vector<Target> targets;
};

struct PassOutcome {
  bool infeasible = false;
  long subproblems = 0;
  long timeouts = 0;
};

/**
 * Targets of a model at step k. `store` holds the bounds the model was built
 * from; fixed variables are skipped.
 */
void collect_targets(Group& g, const Instance& inst, const BoundsStore& store, int k,
                     bool final_tank_heads) {
  const MilpModel& m = g.model;
  for (size_t i = 0; i < inst.nodes.size(); ++i) {
    const int ni = static_cast<int>(i);
    const Node& node = inst.nodes[i];
    const NodeBounds& nb = store.nodes[i];
    auto add_head = [&](int idx) {
      const VarKey key{VarKind::kHead, ni, idx};
      if (nb.h_lb[idx] < nb.h_ub[idx] && m.has(key)) {
        g.targets.push_back({Slot::kHead, ni, idx, key});
      }
    };
    if (node.kind != NodeKind::kReservoir) add_head(k);
    if (node.kind == NodeKind::kTank && final_tank_heads) add_head(store.steps);
    if (node.kind != NodeKind::kDemand) {
      const VarKey key{VarKind::kNodeFlow, ni, k};
      if (nb.q_lb[k] < nb.q_ub[k] && m.has(key)) {
        g.targets.push_back({Slot::kNodeFlow, ni, k, key});
      }
    }
  }
  for (size_t l = 0; l < inst.links.size(); ++l) {
    const int li = static_cast<int>(l);
    const Link& link = inst.links[l];
    const LinkBounds& lb = store.links[l];
    const VarKey z{VarKind::kStatus, li, k};
    const VarKey y{VarKind::kDirection, li, k};
    if (link.kind != LinkKind::kPump) {
      if (lb.y_lb[k] < lb.y_ub[k] && m.has(y)) g.targets.push_back({Slot::kDirection, li, k, y});
    }
    if (link.is_control() && lb.z_lb[k] < lb.z_ub[k] && m.has(z)) {
      g.targets.push_back({Slot::kStatus, li, k, z});
    }
    if (link.kind == LinkKind::kPump) {
      if (lb.z_ub[k] > 0.5) {
        g.targets.push_back({Slot::kPlus, li, k, {VarKind::kFlowPlus, li, k}, m.at(z), 1.0});
      }
      continue;
    }
    if (lb.y_ub[k] > 0.5) {
      g.targets.push_back({Slot::kPlus, li, k, {VarKind::kFlowPlus, li, k}, m.at(y), 1.0});
    }
    if (lb.y_lb[k] < 0.5) {
      g.targets.push_back({Slot::kMinus, li, k, {VarKind::kFlowMinus, li, k}, m.at(y), 0.0});
    }
  }
}

void tighten(double& lo, double& hi, double new_lo, double new_hi) {
  const double l = std::max(lo, new_lo);
  const double h = std::min(hi, new_hi);
  if (l <= h) {
    lo = l;
    hi = h;
  }
}

/** Writes min/max results of a group into `store`. */
void apply(const Group& g, const std::vector<QueryResult>& res, BoundsStore& store,
           const Instance& inst, bool& infeasible) {
  for (size_t t = 0; t < g.targets.size(); ++t) {
    const Target& tg = g.targets[t];
    const QueryResult& lo = res[2 * t];
    const QueryResult& hi = res[2 * t + 1];
    const bool lo_val = lo.state == QueryState::kValue;
    const bool hi_val = hi.state == QueryState::kValue;
    const double vlo = lo_val ? round_down(lo.value) : -kInf;
    const double vhi = hi_val ? round_up(hi.value) : kInf;
    const bool none = lo.state == QueryState::kInfeasible || hi.state == QueryState::kInfeasible;
    const int k = tg.index;
    switch (tg.slot) {
      case Slot::kHead:
        if (none) infeasible = true;
        else tighten(store.nodes[tg.entity].h_lb[k], store.nodes[tg.entity].h_ub[k], vlo, vhi);
        break;
      case Slot::kNodeFlow:
        if (none) infeasible = true;
        else tighten(store.nodes[tg.entity].q_lb[k], store.nodes[tg.entity].q_ub[k], vlo, vhi);
        break;
      case Slot::kDirection:
      case Slot::kStatus: {
        if (none) {
          infeasible = true;
          break;
        }
        LinkBounds& b = store.links[tg.entity];
        double& blo = tg.slot == Slot::kDirection ? b.y_lb[k] : b.z_lb[k];
        double& bhi = tg.slot == Slot::kDirection ? b.y_ub[k] : b.z_ub[k];
        const double new_lo = lo_val && lo.value > kBinaryTol ? 1.0 : blo;
        const double new_hi = hi_val && hi.value < 1.0 - kBinaryTol ? 0.0 : bhi;
        if (new_lo > new_hi) {
          infeasible = true;
        } else {
          blo = new_lo;
          bhi = new_hi;
        }
        break;
      }
      case Slot::kPlus: {
        LinkBounds& b = store.links[tg.entity];
        const bool pump = inst.links[tg.entity].kind == LinkKind::kPump;
        if (none) {
          // Cannot run (pump) or flow forward (pipe, valve) at this step.
          double& bin_ub = pump ? b.z_ub[k] : b.y_ub[k];
          double& bin_lb = pump ? b.z_lb[k] : b.y_lb[k];
          if (bin_lb > 0.5) {
            infeasible = true;
            break;
          }
          bin_ub = 0.0;
          b.plus_lb[k] = b.plus_ub[k] = 0.0;
          break;
        }
        tighten(b.plus_lb[k], b.plus_ub[k], std::max(0.0, vlo), vhi);
        break;
      }
      case Slot::kMinus: {
        LinkBounds& b = store.links[tg.entity];
        if (none) {
          if (b.y_ub[k] < 0.5) {
            infeasible = true;
            break;
          }
          b.y_lb[k] = 1.0;
          b.minus_lb[k] = b.minus_ub[k] = 0.0;
          break;
        }
        tighten(b.minus_lb[k], b.minus_ub[k], std::max(0.0, vlo), vhi);
        break;
      }
    }
  }
}

RelaxationOptions model_options(const ObbtConfig& cfg, RelaxationKind kind, bool continuous) {
  RelaxationOptions o;
  o.kind = kind;
  o.xi = cfg.xi;
  o.relax_directions = continuous;
  o.duality_cuts = cfg.duality_cuts;
  o.direction_vis = cfg.direction_vis;
  o.symmetry_cuts = false;  // bounds must hold for every labelling of identical pumps
  return o;
}

/** Runs one group and merges its results into `store`. */
void run_group(Group& g, const ObbtConfig& cfg, BoundsStore& store, const Instance& inst,
               PassOutcome& out) {
  // A relaxation without any point certifies the instance infeasible.
  const LpSolution root = solve_lp(g.model);
  if (root.status == LpStatus::kInfeasible) {
    out.infeasible = true;
    return;
  }
  std::vector<BoundQuery> qs;
  for (const Target& t : g.targets) {
    const int var = g.model.at(t.var);
    qs.push_back({var, false, t.fix_var, t.fix_value});
    qs.push_back({var, true, t.fix_var, t.fix_value});
  }
  const std::vector<QueryResult> res =
      run_queries(g.model, g.integral, qs, cfg.subproblem_time, cfg.jobs);
  out.subproblems += static_cast<long>(qs.size());
  for (const QueryResult& r : res) out.timeouts += r.limited ? 1 : 0;
  bool infeasible = false;
  apply(g, res, store, inst, infeasible);
  if (infeasible) out.infeasible = true;
}

PassOutcome pass(const Instance& inst, BoundsStore& cur, const ObbtConfig& cfg) {
  PassOutcome out;
  const int K = inst.num_steps();
  switch (cfg.variant) {
    case ObbtVariant::kSR:
    case ObbtVariant::kSS: {
      const bool relaxed = cfg.variant == ObbtVariant::kSR;
      BoundsStore pooled = cur.pooled();
      const ModelScope scope = ModelScope::pooled_step();
      const Partition part = build_partitions(inst, pooled, cfg.xi);
      Group g;
      g.model = build_relaxation(inst, pooled, part,
                                 model_options(cfg, relaxed ? RelaxationKind::kOA
                                                            : RelaxationKind::kPW,
                                               relaxed),
                                 scope);
      g.integral = !relaxed;
      collect_targets(g, inst, pooled, 0, false);
      run_group(g, cfg, pooled, inst, out);
      if (!out.infeasible) cur.absorb_pooled(pooled);
      break;
    }
    case ObbtVariant::kSQ: {
      const BoundsStore snapshot = cur;
      const Partition part = build_partitions(inst, snapshot, cfg.xi);
      for (int k = 0; k < K && !out.infeasible; ++k) {
        Group g;
        g.model = build_relaxation(inst, snapshot, part,
                                   model_options(cfg, RelaxationKind::kPW, false),
                                   ModelScope::steady(k));
        g.integral = true;
        collect_targets(g, inst, snapshot, k, false);
        run_group(g, cfg, cur, inst, out);
      }
      break;
    }
    case ObbtVariant::kTR: {
      const Partition part = build_partitions(inst, cur, cfg.xi);
      Group g;
      g.model = build_relaxation(inst, cur, part, model_options(cfg, RelaxationKind::kOA, true),
                                 ModelScope::full(inst));
      const BoundsStore snapshot = cur;
      for (int k = 0; k < K; ++k) collect_targets(g, inst, snapshot, k, k == K - 1);
      run_group(g, cfg, cur, inst, out);
      break;
    }
    case ObbtVariant::kTS: {
      const BoundsStore snapshot = cur;
      const Partition part = build_partitions(inst, snapshot, cfg.xi);
      for (int k = 0; k < K && !out.infeasible; ++k) {
        ModelScope scope = ModelScope::full(inst);
        scope.integral_steps = {k};
        Group g;
        g.model = build_relaxation(inst, snapshot, part,
                                   model_options(cfg, RelaxationKind::kPW, false), scope);
        g.integral = true;
        collect_targets(g, inst, snapshot, k, k == K - 1);
        run_group(g, cfg, cur, inst, out);
      }
      break;
    }
  }
  return out;
}

}  // namespace

ObbtResult obbt(const Instance& inst, const BoundsStore& bounds, const ObbtConfig& cfg) {
  if (cfg.max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");
  ObbtResult res;
  res.bounds = bounds;
  std::string why;
  if (!res.bounds.consistent(&why)) throw std::invalid_argument("inconsistent bounds: " + why);
  res.bounds.normalize(inst);
  res.status = ObbtStatus::kIterationLimit;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const BoundsStore before = res.bounds;
    const PassOutcome p = pass(inst, res.bounds, cfg);
    ++res.iterations;
    res.subproblems += p.subproblems;
    res.timeouts += p.timeouts;
    if (p.infeasible) {
      res.status = ObbtStatus::kInfeasible;
      return res;
    }
    res.bounds.normalize(inst);
    if (!res.bounds.consistent()) {
      res.status = ObbtStatus::kInfeasible;
      return res;
    }
    const double change = res.bounds.max_relative_change(before);
    res.changes.push_back(change);
    if (change < cfg.tolerance) {
      res.status = ObbtStatus::kConverged;
      break;
    }
  }
  return res;
}

}  // namespace owf
