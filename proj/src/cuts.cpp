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

#include "owf/cuts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace owf {

const char* to_string(CutFamily family) {
  switch (family) {
    case CutFamily::kSymmetry: return "symmetry";
    case CutFamily::kDirectionVi: return "direction-vi";
    case CutFamily::kDuality: return "duality";
    case CutFamily::kObcg: return "obcg";
    case CutFamily::kNoGood: return "no-good";
  }
  return "?";
}

double Cut::activity(const std::function<double(const VarKey&)>& value) const {
  double s = 0.0;
  for (const auto& [key, coef] : terms) s += coef * value(key);
  return s;
}

double Cut::violation(const std::function<double(const VarKey&)>& value) const {
  const double a = activity(value);
  switch (sense) {
    case Sense::kLe: return std::max(0.0, a - rhs);
    case Sense::kGe: return std::max(0.0, rhs - a);
    case Sense::kEq: return std::abs(a - rhs);
  }
  return 0.0;
}

void CutSet::append(const CutSet& other) {
  for (const AuxVariable& v : other.vars) {
    const bool seen = std::any_of(vars.begin(), vars.end(),
                                  [&](const AuxVariable& u) { return u.key == v.key; });
    if (!seen) vars.push_back(v);
  }
  cuts.insert(cuts.end(), other.cuts.begin(), other.cuts.end());
}

namespace {

VarKey key(VarKind kind, int entity, int k) { return VarKey{kind, entity, k, -1}; }

bool has_switching_limits(const Instance& inst, int l) {
  const PumpData& p = inst.links[l].pump;
  return p.min_on_s > 0.0 || p.min_off_s > 0.0 || p.max_switches < inst.num_steps();
}

// Max of chord - f over [lo, hi] for convex f, by golden section.
double convex_chord_gap(const std::function<double(double)>& f, double lo, double hi) {
  if (hi <= lo) return 0.0;
  const double flo = f(lo);
  const double s = (f(hi) - flo) / (hi - lo);
  auto gap = [&](double q) { return flo + s * (q - lo) - f(q); };
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double gc = gap(c), gd = gap(d);
  for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, hi); ++it) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - phi * (b - a);
      gc = gap(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + phi * (b - a);
      gd = gap(d);
    }
  }
  // Pad for the bracket left over by the search.
  return std::max(0.0, std::max(gc, gd)) * (1.0 + 1e-9) + 1e-12;
}

}  // namespace

CutSet symmetry_cuts(const Instance& inst, const std::vector<int>& steps) {
  CutSet out;
  for (const std::vector<int>& group : pump_group_indices(inst)) {
    if (has_switching_limits(inst, group.front())) continue;
    for (int k : steps) {
      for (size_t i = 0; i + 1 < group.size(); ++i) {
        Cut c;
        c.terms = {{key(VarKind::kStatus, group[i], k), 1.0},
                   {key(VarKind::kStatus, group[i + 1], k), -1.0}};
        c.sense = Sense::kLe;
        c.rhs = 0.0;
        c.family = CutFamily::kSymmetry;
        c.k = k;
        out.cuts.push_back(c);
      }
    }
  }
  return out;
}

Schedule canonical_schedule(const Instance& inst, const Schedule& schedule) {
  Schedule out = schedule;
  for (const std::vector<int>& group : pump_group_indices(inst)) {
    if (has_switching_limits(inst, group.front())) continue;
    for (ControlState& state : out.steps) {
      int on = 0;
      for (int l : group) on += state[l];
      const int n = static_cast<int>(group.size());
      for (int i = 0; i < n; ++i) state[group[i]] = i >= n - on ? 1 : 0;
    }
  }
  return out;
}

CutSet direction_vis(const Instance& inst, const std::vector<int>& steps,
                     const BoundsStore* bounds) {
  CutSet out;
  auto push = [&](Cut c, int k) {
    c.family = CutFamily::kDirectionVi;
    c.k = k;
    out.cuts.push_back(std::move(c));
  };
  for (int k : steps) {
    for (size_t n = 0; n < inst.nodes.size(); ++n) {
      const int i = static_cast<int>(n);
      const Node& node = inst.nodes[n];
      const std::vector<int>& outs = inst.out_links(i);
      const std::vector<int>& ins = inst.in_links(i);
      if (outs.empty() && ins.empty()) continue;
      if (node.kind == NodeKind::kTank) continue;

      double lo = 0.0, hi = 0.0;
      if (node.kind == NodeKind::kDemand) {
        lo = bounds ? bounds->nodes[n].q_lb[k] : node.demand[k];
        hi = bounds ? bounds->nodes[n].q_ub[k] : node.demand[k];
      }
      const bool source = node.kind == NodeKind::kReservoir || lo > 0.0;
      const bool consumer = node.kind == NodeKind::kDemand && hi < 0.0;

      // Links oriented away from the node count y, links pointing in count 1 - y.
      auto away = [&](bool from_node) {
        Cut c;
        c.sense = Sense::kGe;
        c.rhs = 1.0;
        for (int l : outs) c.terms.push_back({key(VarKind::kDirection, l, k), from_node ? 1.0 : -1.0});
        for (int l : ins) c.terms.push_back({key(VarKind::kDirection, l, k), from_node ? -1.0 : 1.0});
        const double ones = static_cast<double>(from_node ? ins.size() : outs.size());
        c.rhs -= ones;
        return c;
      };
      if (source) {
        push(away(true), k);
      } else if (consumer) {
        push(away(false), k);
      } else if (node.kind == NodeKind::kDemand && lo == 0.0 && hi == 0.0 &&
                 outs.size() + ins.size() == 2) {
        Cut c;
        c.sense = Sense::kEq;
        if (outs.size() == 1) {
          c.terms = {{key(VarKind::kDirection, ins[0], k), 1.0},
                     {key(VarKind::kDirection, outs[0], k), -1.0}};
          c.rhs = 0.0;
        } else {
          const std::vector<int>& both = outs.empty() ? ins : outs;
          c.terms = {{key(VarKind::kDirection, both[0], k), 1.0},
                     {key(VarKind::kDirection, both[1], k), 1.0}};
          c.rhs = 1.0;
        }
        push(c, k);
      }
    }
  }
  return out;
}

std::vector<Cut> mccormick(const VarKey& w, const VarKey& x, const VarKey& y, double xl,
                           double xu, double yl, double yu) {
  if (!std::isfinite(xl) || !std::isfinite(xu) || !std::isfinite(yl) || !std::isfinite(yu)) {
    throw std::invalid_argument("McCormick envelope needs finite bounds");
  }
  if (xl > xu || yl > yu) throw std::invalid_argument("McCormick envelope needs lb <= ub");
  auto make = [&](double cy, double cx, double rhs, Sense sense) {
    Cut c;
    c.terms = {{w, 1.0}, {y, -cy}, {x, -cx}};
    c.sense = sense;
    c.rhs = rhs;
    c.family = CutFamily::kDuality;
    c.k = w.k;
    return c;
  };
  return {make(xl, yl, -xl * yl, Sense::kGe), make(xu, yu, -xu * yu, Sense::kGe),
          make(xu, yl, -xu * yl, Sense::kLe), make(xl, yu, -xl * yu, Sense::kLe)};
}

CutSet duality_cuts(const Instance& inst, const BoundsStore& b, const Partition& part,
                    DualityMode mode, const std::vector<int>& steps) {
  CutSet out;
  auto push = [&](Cut c, int k) {
    c.family = CutFamily::kDuality;
    c.k = k;
    out.cuts.push_back(std::move(c));
  };
  for (int k : steps) {
    Cut balance;
    balance.sense = Sense::kLe;
    balance.rhs = 0.0;

    for (int l : inst.pipes()) {
      const PipeData& pipe = inst.links[l].pipe;
      const double coef = pipe.length * pipe.resistance;
      const double e = pipe.exponent + 1.0;
      auto f = [&](double q) { return coef * std::pow(q, e); };
      auto df = [&](double q) { return coef * e * std::pow(q, e - 1.0); };
      for (Direction d : {Direction::kPlus, Direction::kMinus}) {
        const bool plus = d == Direction::kPlus;
        const VarKey phi = key(plus ? VarKind::kPhiPlus : VarKind::kPhiMinus, l, k);
        const VarKey q = key(plus ? VarKind::kFlowPlus : VarKind::kFlowMinus, l, k);
        const VarKey y = key(VarKind::kDirection, l, k);
        const double ub = plus ? b.links[l].plus_ub[k] : b.links[l].minus_ub[k];
        out.vars.push_back({phi, 0.0, f(ub)});
        balance.terms.push_back({phi, 1.0});
        const std::vector<double>& pts = part.at(l, k, d);
        if (mode == DualityMode::kTangents) {
          // phi >= f(qh) y+ + f'(qh)(q - qh y+), with y- = 1 - y.
          for (double qh : pts) {
            const double c0 = f(qh) - df(qh) * qh;
            Cut c;
            c.terms = {{phi, 1.0}, {q, -df(qh)}};
            c.sense = Sense::kGe;
            if (plus) {
              c.terms.push_back({y, -c0});
              c.rhs = 0.0;
            } else {
              c.terms.push_back({y, c0});
              c.rhs = c0;
            }
            push(c, k);
          }
        } else {
          // phi >= sum f(qh_p) lambda_p - sum gap_p x_p.
          const VarKind lk = plus ? VarKind::kLambdaPlus : VarKind::kLambdaMinus;
          const VarKind xk = plus ? VarKind::kIntervalPlus : VarKind::kIntervalMinus;
          Cut c;
          c.terms = {{phi, 1.0}};
          c.sense = Sense::kGe;
          c.rhs = 0.0;
          for (size_t p = 0; p < pts.size(); ++p) {
            c.terms.push_back({VarKey{lk, l, k, static_cast<int>(p)}, -f(pts[p])});
            if (p > 0) {
              c.terms.push_back({VarKey{xk, l, k, static_cast<int>(p)},
                                 convex_chord_gap(f, pts[p - 1], pts[p])});
            }
          }
          push(c, k);
        }
      }
    }

    for (int l : inst.pumps()) {
      const PumpData& p = inst.links[l].pump;
      auto f = [&](double q) { return -(p.a * q + p.b * std::pow(q, p.c + 1.0)); };
      auto df = [&](double q) { return -(p.a + p.b * (p.c + 1.0) * std::pow(q, p.c)); };
      const VarKey psi = key(VarKind::kPsi, l, k);
      const VarKey q = key(VarKind::kFlowPlus, l, k);
      const VarKey z = key(VarKind::kStatus, l, k);
      const double ub = b.links[l].plus_ub[k];
      const double qstar = std::clamp(std::pow(-p.a / (p.b * (p.c + 1.0)), 1.0 / p.c), 0.0, ub);
      out.vars.push_back({psi, std::min(0.0, f(qstar)), std::max({0.0, f(ub)})});
      balance.terms.push_back({psi, 1.0});
      const std::vector<double>& pts = part.at(l, k, Direction::kPlus);
      if (mode == DualityMode::kTangents) {
        for (double qh : pts) {
          Cut c;
          c.terms = {{psi, 1.0}, {q, -df(qh)}, {z, -(f(qh) - df(qh) * qh)}};
          c.sense = Sense::kGe;
          c.rhs = 0.0;
          push(c, k);
        }
      } else {
        Cut c;
        c.terms = {{psi, 1.0}};
        c.sense = Sense::kGe;
        c.rhs = 0.0;
        for (size_t i = 0; i < pts.size(); ++i) {
          c.terms.push_back({VarKey{VarKind::kLambdaPlus, l, k, static_cast<int>(i)}, -f(pts[i])});
          if (i > 0) {
            c.terms.push_back({VarKey{VarKind::kIntervalPlus, l, k, static_cast<int>(i)},
                               convex_chord_gap(f, pts[i - 1], pts[i])});
          }
        }
        push(c, k);
      }
    }

    for (int i : inst.tanks()) {
      const VarKey w = key(VarKind::kMcCormick, i, k);
      const VarKey qn = key(VarKind::kNodeFlow, i, k);
      const VarKey h = key(VarKind::kHead, i, k);
      const NodeBounds& nb = b.nodes[i];
      const double lo = std::min({nb.q_lb[k] * nb.h_lb[k], nb.q_lb[k] * nb.h_ub[k],
                                  nb.q_ub[k] * nb.h_lb[k], nb.q_ub[k] * nb.h_ub[k]});
      const double hi = std::max({nb.q_lb[k] * nb.h_lb[k], nb.q_lb[k] * nb.h_ub[k],
                                  nb.q_ub[k] * nb.h_lb[k], nb.q_ub[k] * nb.h_ub[k]});
      out.vars.push_back({w, lo, hi});
      for (Cut& c : mccormick(w, qn, h, nb.q_lb[k], nb.q_ub[k], nb.h_lb[k], nb.h_ub[k])) {
        push(c, k);
      }
      balance.terms.push_back({w, -1.0});
    }
    for (int i : inst.reservoirs()) {
      balance.terms.push_back({key(VarKind::kNodeFlow, i, k), -inst.nodes[i].head_lb[k]});
    }
    for (int i : inst.demands()) {
      const double rate = inst.nodes[i].demand[k];
      if (rate != 0.0) balance.terms.push_back({key(VarKind::kHead, i, k), -rate});
    }
    push(balance, k);
  }
  return out;
}

Cut no_good_cut(const Instance& inst, const Schedule& prefix, int k_inf) {
  if (k_inf < 1 || static_cast<int>(prefix.steps.size()) < k_inf) {
    throw std::invalid_argument("no-good cut needs a non-empty prefix covering k_inf steps");
  }
  if (inst.controls().empty()) throw std::invalid_argument("no-good cut needs controls");
  Cut c;
  c.sense = Sense::kGe;
  c.rhs = 1.0;
  c.family = CutFamily::kNoGood;
  c.k = -1;
  for (int k = 0; k < k_inf; ++k) {
    for (int l : inst.controls()) {
      if (prefix.status(k, l) == 0) {
        c.terms.push_back({key(VarKind::kStatus, l, k), 1.0});
      } else {
        c.terms.push_back({key(VarKind::kStatus, l, k), -1.0});
        c.rhs -= 1.0;
      }
    }
  }
  return c;
}

int add_cut(MilpModel& m, const Cut& cut) {
  LinearExpr e;
  for (const auto& [k, coef] : cut.terms) e.add(m.at(k), coef);
  std::string tag = to_string(cut.family);
  if (cut.k >= 0) tag += " k=" + std::to_string(cut.k + 1);
  return m.add_constraint(e, cut.sense, cut.rhs, tag);
}

int apply_cuts(MilpModel& m, const CutSet& cuts) {
  for (const AuxVariable& v : cuts.vars) {
    if (!m.has(v.key)) m.add_var(v.key, v.lb, v.ub);
  }
  int added = 0;
  for (const Cut& c : cuts.cuts) {
    const bool resolvable = std::all_of(c.terms.begin(), c.terms.end(),
                                        [&](const auto& t) { return m.has(t.first); });
    if (!resolvable) continue;
    add_cut(m, c);
    ++added;
  }
  return added;
}

}  // namespace owf
