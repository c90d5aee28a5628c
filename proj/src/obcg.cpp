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

#include "owf/obcg.hpp"

#include <cmath>
#include <set>

#include "owf/bound_queries.hpp"
#include "owf/lp.hpp"
#include "owf/relaxation.hpp"

namespace owf {

void ObcgOutput::append(const ObcgOutput& o) {
  cuts.append(o.cuts);
  fixings.insert(fixings.end(), o.fixings.begin(), o.fixings.end());
  subproblems += o.subproblems;
  failures += o.failures;
  infeasible = infeasible || o.infeasible;
}

namespace {

constexpr double kBinaryTol = 1e-6;
constexpr double kRound = 1e-6;

double round_down(double v) { return v - kRound * (1.0 + std::abs(v)); }
double round_up(double v) { return v + kRound * (1.0 + std::abs(v)); }

struct Binary {
  VarKey key;
  int link;
};

MilpModel steady_model(const Instance& inst, const BoundsStore& b, int k, const ObcgConfig& cfg) {
  RelaxationOptions o;
  o.kind = RelaxationKind::kPW;
  o.xi = cfg.xi;
  o.duality_cuts = cfg.duality_cuts;
  o.direction_vis = cfg.direction_vis;
  const ModelScope scope = ModelScope::steady(k);
  const Partition part = build_partitions(inst, b, cfg.xi);
  return build_relaxation(inst, b, part, o, scope);
}

std::vector<Binary> free_binaries(const Instance& inst, const BoundsStore& b, int k) {
  std::vector<Binary> out;
  for (size_t l = 0; l < inst.links.size(); ++l) {
    const int li = static_cast<int>(l);
    const Link& link = inst.links[l];
    const LinkBounds& lb = b.links[l];
    if (link.kind != LinkKind::kPump && lb.y_lb[k] < lb.y_ub[k]) {
      out.push_back({{VarKind::kDirection, li, k}, li});
    }
    if (link.is_control() && lb.z_lb[k] < lb.z_ub[k]) {
      out.push_back({{VarKind::kStatus, li, k}, li});
    }
  }
  return out;
}

Cut make_cut(std::vector<std::pair<VarKey, double>> terms, Sense sense, double rhs, int k) {
  Cut c;
  c.terms = std::move(terms);
  c.sense = sense;
  c.rhs = rhs;
  c.family = CutFamily::kObcg;
  c.k = k;
  return c;
}

/** Records that binary `x` cannot take `bad`. */
void add_fixing(ObcgOutput& out, std::set<VarKey>& fixed, const VarKey& x, int bad, int k) {
  if (!fixed.insert(x).second) return;
  const double value = bad ? 0.0 : 1.0;
  out.fixings.push_back({x, value});
  out.cuts.cuts.push_back(make_cut({{x, 1.0}}, Sense::kEq, value, k));
}

/** Returns false (and flags the output) when the step's relaxation is empty. */
bool step_feasible(const MilpModel& m, ObcgOutput& out) {
  if (solve_lp(m).status == LpStatus::kInfeasible) {
    out.infeasible = true;
    return false;
  }
  return true;
}

}  // namespace

ObcgOutput obcg_binary_binary(const Instance& inst, const BoundsStore& bounds, int fix_value,
                              const ObcgConfig& cfg) {
  ObcgOutput out;
  for (int k = 0; k < inst.num_steps(); ++k) {
    const MilpModel m = steady_model(inst, bounds, k, cfg);
    if (!step_feasible(m, out)) continue;
    const std::vector<Binary> bins = free_binaries(inst, bounds, k);
    std::vector<std::pair<int, int>> pairs;
    std::vector<BoundQuery> qs;
    for (size_t a = 0; a < bins.size(); ++a) {
      for (size_t c = 0; c < bins.size(); ++c) {
        if (bins[a].link == bins[c].link) continue;
        pairs.emplace_back(static_cast<int>(a), static_cast<int>(c));
        const int x1 = m.at(bins[a].key);
        const int x2 = m.at(bins[c].key);
        qs.push_back({x1, false, x2, static_cast<double>(fix_value)});
        qs.push_back({x1, true, x2, static_cast<double>(fix_value)});
      }
    }
    const std::vector<QueryResult> res = run_queries(m, true, qs, cfg.subproblem_time, cfg.jobs);
    out.subproblems += static_cast<long>(qs.size());
    std::set<VarKey> fixed;
    for (size_t p = 0; p < pairs.size(); ++p) {
      const VarKey& x1 = bins[pairs[p].first].key;
      const VarKey& x2 = bins[pairs[p].second].key;
      const QueryResult& lo = res[2 * p];
      const QueryResult& hi = res[2 * p + 1];
      if (lo.state == QueryState::kInfeasible || hi.state == QueryState::kInfeasible) {
        add_fixing(out, fixed, x2, fix_value, k);
        continue;
      }
      if (lo.state != QueryState::kValue || hi.state != QueryState::kValue) {
        ++out.failures;
        continue;
      }
      const bool always0 = hi.value < 1.0 - kBinaryTol;
      const bool always1 = lo.value > kBinaryTol;
      if (fix_value == 0) {
        if (always0) out.cuts.cuts.push_back(make_cut({{x1, 1.0}, {x2, -1.0}}, Sense::kLe, 0.0, k));
        if (always1) out.cuts.cuts.push_back(make_cut({{x1, 1.0}, {x2, 1.0}}, Sense::kGe, 1.0, k));
      } else {
        if (always0) out.cuts.cuts.push_back(make_cut({{x1, 1.0}, {x2, 1.0}}, Sense::kLe, 1.0, k));
        if (always1) out.cuts.cuts.push_back(make_cut({{x1, 1.0}, {x2, -1.0}}, Sense::kGe, 0.0, k));
      }
    }
  }
  return out;
}

ObcgOutput obcg_binary_continuous(const Instance& inst, const BoundsStore& bounds,
                                  const ObcgConfig& cfg) {
  ObcgOutput out;
  for (int k = 0; k < inst.num_steps(); ++k) {
    const MilpModel m = steady_model(inst, bounds, k, cfg);
    if (!step_feasible(m, out)) continue;
    const std::vector<Binary> bins = free_binaries(inst, bounds, k);
    std::vector<VarKey> conts;
    for (size_t l = 0; l < inst.links.size(); ++l) {
      const LinkBounds& lb = bounds.links[l];
      if (lb.q_lb[k] < lb.q_ub[k]) conts.push_back({VarKind::kFlow, static_cast<int>(l), k});
    }
    for (size_t i = 0; i < inst.nodes.size(); ++i) {
      const NodeBounds& nb = bounds.nodes[i];
      const NodeKind kind = inst.nodes[i].kind;
      if (kind == NodeKind::kTank && nb.q_lb[k] < nb.q_ub[k]) {
        conts.push_back({VarKind::kNodeFlow, static_cast<int>(i), k});
      }
      if (kind != NodeKind::kReservoir && nb.h_lb[k] < nb.h_ub[k]) {
        conts.push_back({VarKind::kHead, static_cast<int>(i), k});
      }
    }
    std::vector<BoundQuery> qs;
    for (const Binary& bin : bins) {
      const int x2 = m.at(bin.key);
      for (const VarKey& c : conts) {
        const int x1 = m.at(c);
        for (int v = 0; v <= 1; ++v) {
          qs.push_back({x1, false, x2, static_cast<double>(v)});
          qs.push_back({x1, true, x2, static_cast<double>(v)});
        }
      }
    }
    const std::vector<QueryResult> res = run_queries(m, true, qs, cfg.subproblem_time, cfg.jobs);
    out.subproblems += static_cast<long>(qs.size());
    std::set<VarKey> fixed;
    size_t at = 0;
    for (const Binary& bin : bins) {
      for (const VarKey& c : conts) {
        const QueryResult* r = &res[at];
        at += 4;
        const int x1 = m.at(c);
        const double glo = m.var(x1).lb;
        const double ghi = m.var(x1).ub;
        bool empty[2];
        double lo[2], hi[2];
        for (int v = 0; v <= 1; ++v) {
          const QueryResult& a = r[2 * v];
          const QueryResult& b = r[2 * v + 1];
          empty[v] = a.state == QueryState::kInfeasible || b.state == QueryState::kInfeasible;
          if ((a.state == QueryState::kUnknown || b.state == QueryState::kUnknown) && !empty[v]) {
            ++out.failures;
          }
          lo[v] = a.state == QueryState::kValue ? std::max(glo, round_down(a.value)) : glo;
          hi[v] = b.state == QueryState::kValue ? std::min(ghi, round_up(b.value)) : ghi;
        }
        if (empty[0] && empty[1]) {
          out.infeasible = true;
          continue;
        }
        for (int v = 0; v <= 1; ++v) {
          if (empty[v]) {
            add_fixing(out, fixed, bin.key, v, k);
            lo[v] = lo[1 - v];
            hi[v] = hi[1 - v];
          }
        }
        // v >= lo0 (1 - x) + lo1 x  and  v <= hi0 (1 - x) + hi1 x
        if (lo[0] > glo || lo[1] > glo) {
          out.cuts.cuts.push_back(
              make_cut({{c, 1.0}, {bin.key, lo[0] - lo[1]}}, Sense::kGe, lo[0], k));
        }
        if (hi[0] < ghi || hi[1] < ghi) {
          out.cuts.cuts.push_back(
              make_cut({{c, 1.0}, {bin.key, hi[0] - hi[1]}}, Sense::kLe, hi[0], k));
        }
      }
    }
  }
  return out;
}

ObcgOutput obcg(const Instance& inst, const BoundsStore& bounds, const ObcgConfig& cfg) {
  ObcgOutput out = obcg_binary_binary(inst, bounds, 0, cfg);
  out.append(obcg_binary_binary(inst, bounds, 1, cfg));
  out.append(obcg_binary_continuous(inst, bounds, cfg));
  return out;
}

}  // namespace owf
