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

#include "owf/branch_and_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <tuple>

namespace owf {

const char* to_string(MipStatus status) {
  switch (status) {
    case MipStatus::kOptimal: return "optimal";
    case MipStatus::kInfeasible: return "infeasible";
    case MipStatus::kTimeLimit: return "time-limit";
    case MipStatus::kNodeLimit: return "node-limit";
    case MipStatus::kGapLimit: return "gap-limit";
    case MipStatus::kUnbounded: return "unbounded";
    case MipStatus::kNumerical: return "numerical";
  }
  return "?";
}

namespace {

constexpr double kIntTol = 1e-6;

struct Node {
  double bound = -kInf;
  int depth = 0;
  long seq = 0;
  std::vector<std::tuple<int, double, double>> fixes;  // var, lb, ub
};

struct WorseNode {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.seq > b.seq;
  }
};

double relative_gap(double lb, double ub) {
  if (!std::isfinite(ub) || !std::isfinite(lb)) return kInf;
  if (ub == lb) return 0.0;
  return std::abs(ub - lb) / std::max(std::abs(ub), 1e-10);
}

}  // namespace

MipResult branch_and_bound(const MilpModel& model, const BbCallbacks& cb, const BbLimits& limits,
                           const LpOptions& lp_options) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  MipResult res;
  const LpProblem problem = LpProblem::from_model(model);
  std::unique_ptr<LpEngine> engine = make_simplex_engine();
  engine->load(problem);
  std::vector<Row> added_rows;

  std::vector<int> ints;
  for (int j = 0; j < model.num_vars(); ++j) {
    if (model.var(j).integer) ints.push_back(j);
  }
  std::vector<double> cur_lb = problem.lb, cur_ub = problem.ub;

  double incumbent = kInf;
  double lower = -kInf;
  bool unresolved = false;  // some node could not be solved reliably
  double unresolved_bound = kInf;

  auto report = [&] {
    res.trace.emplace_back(lower, incumbent);
    if (cb.progress) cb.progress(lower, incumbent);
  };

  auto solve_node = [&](const Node& node) {
    std::vector<double> lb = problem.lb, ub = problem.ub;
    for (const auto& [j, l, u] : node.fixes) {
      lb[j] = std::max(lb[j], l);
      ub[j] = std::min(ub[j], u);
    }
    for (int j : ints) {
      if (lb[j] != cur_lb[j] || ub[j] != cur_ub[j]) {
        engine->set_bounds(j, lb[j], ub[j]);
        cur_lb[j] = lb[j];
        cur_ub[j] = ub[j];
      }
    }
    LpOptions o = lp_options;
    if (limits.time_limit > 0.0) o.time_limit = std::max(1e-3, limits.time_limit - elapsed());
    LpSolution sol = engine->solve(o);
    if (sol.status == LpStatus::kNumerical || sol.status == LpStatus::kIterationLimit) {
      // Retry cold on a fresh engine.
      LpProblem p = problem;
      p.lb = lb;
      p.ub = ub;
      p.rows.insert(p.rows.end(), added_rows.begin(), added_rows.end());
      engine = make_simplex_engine();
      engine->load(p);
      sol = engine->solve(o);
      cur_lb = lb;
      cur_ub = ub;
    }
    return sol;
  };

  std::priority_queue<Node, std::vector<Node>, WorseNode> open;
  long seq = 0;
  open.push(Node{-kInf, 0, seq++, {}});
  MipStatus stop = MipStatus::kOptimal;
  bool stopped = false;

  while (!open.empty()) {
    if (limits.time_limit > 0.0 && elapsed() > limits.time_limit) {
      stop = MipStatus::kTimeLimit;
      stopped = true;
      break;
    }
    if (limits.node_limit > 0 && res.nodes >= limits.node_limit) {
      stop = MipStatus::kNodeLimit;
      stopped = true;
      break;
    }
    if (std::isfinite(incumbent) && limits.gap_target > 0.0 &&
        relative_gap(std::max(lower, open.top().bound), incumbent) <= limits.gap_target) {
      stop = MipStatus::kGapLimit;
      stopped = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (node.bound >= incumbent - 1e-9 * std::max(1.0, std::abs(incumbent))) continue;
    lower = std::max(lower, std::min(node.bound, incumbent));
    ++res.nodes;

    bool branched = false;
    while (true) {
      LpSolution sol = solve_node(node);
      if (sol.status == LpStatus::kTimeLimit) {
        open.push(node);
        stop = MipStatus::kTimeLimit;
        stopped = true;
        break;
      }
      if (sol.status == LpStatus::kInfeasible) break;
      if (sol.status == LpStatus::kUnbounded) {
        if (node.depth == 0) {
          res.status = MipStatus::kUnbounded;
          return res;
        }
        break;
      }
      if (sol.status != LpStatus::kOptimal) {
        unresolved = true;
        unresolved_bound = std::min(unresolved_bound, node.bound);
        break;
      }
      if (sol.objective >= incumbent - 1e-9 * std::max(1.0, std::abs(incumbent))) break;

      // Highest priority class among fractional integers, then most fractional.
      int pick = -1;
      int pick_prio = -1;
      double pick_frac = -1.0;
      for (int j : ints) {
        const double v = sol.x[j];
        const double f = v - std::floor(v);
        const double dist = std::min(f, 1.0 - f);
        if (dist <= kIntTol) continue;
        const int prio = model.var(j).priority;
        if (prio > pick_prio || (prio == pick_prio && dist > pick_frac + 1e-12)) {
          pick = j;
          pick_prio = prio;
          pick_frac = dist;
        }
      }
      if (pick >= 0) {
        if (cb.heuristic) {
          const double h = cb.heuristic(sol.x);
          if (h < incumbent) {
            incumbent = h;
            res.x.clear();
            res.objective = incumbent;
          }
          if (sol.objective >= incumbent - 1e-9 * std::max(1.0, std::abs(incumbent))) break;
        }
        const double v = sol.x[pick];
        Node down{sol.objective, node.depth + 1, seq++, node.fixes};
        down.fixes.emplace_back(pick, -kInf, std::floor(v));
        Node up{sol.objective, node.depth + 1, seq++, node.fixes};
        up.fixes.emplace_back(pick, std::ceil(v), kInf);
        open.push(std::move(down));
        open.push(std::move(up));
        ++res.branchings;
        branched = true;
        break;
      }

      std::vector<double> x = sol.x;
      for (int j : ints) x[j] = std::round(x[j]);
      LazyResult verdict;
      if (cb.lazy) verdict = cb.lazy(x, sol.objective);
      if (verdict.has_incumbent && verdict.incumbent_value < incumbent) {
        incumbent = verdict.incumbent_value;
        res.x.clear();
        res.objective = incumbent;
      }
      if (verdict.accept) {
        if (sol.objective < incumbent) {
          incumbent = sol.objective;
          res.x = x;
          res.objective = incumbent;
        }
        break;
      }
      if (verdict.cuts.empty()) break;  // rejected without a cut: drop the node
      for (const Row& r : verdict.cuts) {
        engine->add_row(r);
        added_rows.push_back(r);
        ++res.lazy_cuts;
      }
      node.bound = std::max(node.bound, sol.objective);
    }
    (void)branched;
    if (stopped) break;
    double next = open.empty() ? incumbent : std::min(open.top().bound, incumbent);
    if (unresolved) next = std::min(next, unresolved_bound);
    lower = std::max(lower, next);
    report();
  }

  res.objective = incumbent;
  if (stopped) {
    double lb = open.empty() ? incumbent : std::min(open.top().bound, incumbent);
    if (unresolved) lb = std::min(lb, unresolved_bound);
    res.bound = std::max(lower, lb);
    res.status = stop;
    report();
    return res;
  }
  if (unresolved) {
    res.bound = std::min(std::max(lower, -kInf), unresolved_bound);
    res.status = MipStatus::kNumerical;
    return res;
  }
  res.bound = incumbent;
  res.status = std::isfinite(incumbent) ? MipStatus::kOptimal : MipStatus::kInfeasible;
  if (!std::isfinite(incumbent)) res.bound = kInf;
  return res;
}

}  // namespace owf
