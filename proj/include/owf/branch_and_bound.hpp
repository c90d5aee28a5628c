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

#include <functional>
#include <vector>

#include "owf/lp.hpp"
#include "owf/milp_model.hpp"

namespace owf {

enum class MipStatus { kOptimal, kInfeasible, kTimeLimit, kNodeLimit, kGapLimit, kUnbounded, kNumerical };

const char* to_string(MipStatus status);

struct BbLimits {
  double time_limit = 0.0;  // s, 0 = none
  long node_limit = 0;      // 0 = none
  double gap_target = 0.0;  // relative
};

/** Verdict on an integer-feasible LP point. */
struct LazyResult {
  bool accept = true;          // the LP point becomes an incumbent candidate at its LP value
  std::vector<Row> cuts;       // global rows to append; the node is then re-solved
  bool has_incumbent = false;  // an external incumbent found by the callback
  double incumbent_value = kInf;
};

struct BbCallbacks {
  std::function<LazyResult(const std::vector<double>& x, double lp_objective)> lazy;
  /**
   * Primal heuristic on a fractional node point. Returns the value of an
   * external incumbent, or +inf when it finds none.
   */
  std::function<double(const std::vector<double>& x)> heuristic;
  /** Called whenever the global bounds change. */
  std::function<void(double lower, double upper)> progress;
};

struct MipResult {
  MipStatus status = MipStatus::kNumerical;
  std::vector<double> x;  // incumbent LP point, empty when the incumbent came from the callback
  double objective = kInf;
  double bound = -kInf;
  long nodes = 0;
  long branchings = 0;
  long lazy_cuts = 0;
  std::vector<std::pair<double, double>> trace;  // (lower, upper) after each node
};

/**
 * Best-bound branch and bound. Branches on the most fractional integer
 * variable within the highest priority class present, ties by variable id.
 */
MipResult branch_and_bound(const MilpModel& model, const BbCallbacks& callbacks = {},
                           const BbLimits& limits = {}, const LpOptions& lp_options = {});

}  // namespace owf
