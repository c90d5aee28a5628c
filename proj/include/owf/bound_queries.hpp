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

#pragma once

#include <vector>

#include "owf/milp_model.hpp"

namespace owf {

/** Minimise or maximise one variable, optionally with another one fixed. */
struct BoundQuery {
  int var = -1;
  bool maximize = false;
  int fix_var = -1;
  double fix_value = 0.0;
};

enum class QueryState { kValue, kInfeasible, kUnknown };

/**
 * kValue carries a safe bound on the optimum: the optimum itself, or the
 * dual bound when the subproblem stopped on its time limit.
 */
struct QueryResult {
  QueryState state = QueryState::kUnknown;
  double value = 0.0;
  bool limited = false;
};

/**
 * Runs the queries against `model`, ignoring its objective. With `integral`
 * false every subproblem is an LP solved on a warm engine; otherwise each is
 * a branch and bound. Work is split into fixed contiguous chunks over `jobs`
 * threads so results do not depend on scheduling.
 */
std::vector<QueryResult> run_queries(const MilpModel& model, bool integral,
                                     const std::vector<BoundQuery>& queries, double time_limit,
                                     int jobs);

/** Thread count for a requested degree of parallelism (0 = hardware). */
int resolve_jobs(int jobs);

}  // namespace owf
