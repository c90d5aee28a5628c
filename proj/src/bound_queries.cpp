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

#include "owf/bound_queries.hpp"

#include <atomic>
#include <algorithm>
#include <cmath>
#include <thread>

#include "owf/branch_and_bound.hpp"
#include "owf/lp.hpp"

namespace owf {

namespace {

constexpr size_t kQueryBlock = 16;

QueryResult lp_query(LpEngine& engine, const LpProblem& base, const BoundQuery& q,
                     const LpOptions& opts) {
  std::vector<double> cost(base.cost.size(), 0.0);
  cost[q.var] = q.maximize ? -1.0 : 1.0;
  engine.set_objective(cost, 0.0);
  if (q.fix_var >= 0) engine.set_bounds(q.fix_var, q.fix_value, q.fix_value);
  LpSolution sol = engine.solve(opts);
  if (sol.status == LpStatus::kNumerical || sol.status == LpStatus::kIterationLimit) {
    // One cold retry before giving up on the query.
    LpProblem p = base;
    p.cost = cost;
    p.cost_constant = 0.0;
    if (q.fix_var >= 0) p.lb[q.fix_var] = p.ub[q.fix_var] = q.fix_value;
    sol = solve_lp(p, opts);
  }
  if (q.fix_var >= 0) engine.set_bounds(q.fix_var, base.lb[q.fix_var], base.ub[q.fix_var]);

  QueryResult r;
  const double sign = q.maximize ? -1.0 : 1.0;
  switch (sol.status) {
    case LpStatus::kOptimal:
      r.state = QueryState::kValue;
      r.value = sign * sol.objective;
      break;
    case LpStatus::kInfeasible:
      r.state = QueryState::kInfeasible;
      break;
    case LpStatus::kTimeLimit:
      r.limited = true;
      if (std::isfinite(sol.dual_bound)) {
        r.state = QueryState::kValue;
        r.value = sign * sol.dual_bound;
      }
      break;
    default:
      break;
  }
  return r;
}

QueryResult mip_query(const MilpModel& model, const BoundQuery& q, double time_limit) {
  MilpModel m = model;
  for (int j = 0; j < m.num_vars(); ++j) m.set_objective(j, 0.0);
  m.set_objective_constant(0.0);
  m.set_objective(q.var, q.maximize ? -1.0 : 1.0);
  if (q.fix_var >= 0) m.tighten(q.fix_var, q.fix_value, q.fix_value);
  BbLimits limits;
  limits.time_limit = time_limit;
  const MipResult res = branch_and_bound(m, {}, limits);
  QueryResult r;
  const double sign = q.maximize ? -1.0 : 1.0;
  switch (res.status) {
    case MipStatus::kOptimal:
      r.state = QueryState::kValue;
      r.value = sign * res.objective;
      break;
    case MipStatus::kInfeasible:
      r.state = QueryState::kInfeasible;
      break;
    case MipStatus::kTimeLimit:
    case MipStatus::kNodeLimit:
    case MipStatus::kGapLimit:
    case MipStatus::kNumerical:
      // The tree bound stays valid whenever it is finite.
      r.limited = res.status != MipStatus::kNumerical;
      if (std::isfinite(res.bound)) {
        r.state = QueryState::kValue;
        r.value = sign * res.bound;
      }
      break;
    default:
      break;
  }
  return r;
}

}  // namespace

int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<QueryResult> run_queries(const MilpModel& model, bool integral,
                                     const std::vector<BoundQuery>& queries, double time_limit,
                                     int jobs) {
  std::vector<QueryResult> out(queries.size());
  if (queries.empty()) return out;
  const int threads = std::max(
      1, std::min(resolve_jobs(jobs), static_cast<int>((queries.size() + kQueryBlock - 1) / kQueryBlock)));
  const LpProblem base = integral ? LpProblem{} : LpProblem::from_model(model);
  LpOptions opts;
  opts.time_limit = time_limit;

  auto work = [&](size_t begin, size_t end) {
    if (integral) {
      for (size_t i = begin; i < end; ++i) out[i] = mip_query(model, queries[i], time_limit);
      return;
    }
    std::unique_ptr<LpEngine> engine = make_simplex_engine();
    engine->load(base);
    for (size_t i = begin; i < end; ++i) out[i] = lp_query(*engine, base, queries[i], opts);
  };

  // Warm starts chain only inside fixed blocks, so the values do not depend
  // on how many workers share the blocks.
  const size_t n = queries.size();
  const size_t blocks = (n + kQueryBlock - 1) / kQueryBlock;
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t b = next++; b < blocks; b = next++) {
      work(b * kQueryBlock, std::min(n, (b + 1) * kQueryBlock));
    }
  };
  if (threads == 1) {
    worker();
    return out;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace owf
