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

#include <memory>
#include <string>
#include <vector>

#include "owf/milp_model.hpp"

namespace owf {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kTimeLimit, kIterationLimit, kNumerical };

const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kNumerical;
  std::vector<double> x;
  double objective = kInf;
  double dual_bound = -kInf;  // valid lower bound on the LP optimum
  int iterations = 0;
};

struct LpOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  int max_iterations = 0;   // 0 picks a size-based default
  double time_limit = 0.0;  // s, 0 = none
};

/** A minimisation LP: lb <= x <= ub, row.lo <= row * x <= row.hi. */
struct LpProblem {
  std::vector<double> lb, ub, cost;
  double cost_constant = 0.0;
  std::vector<Row> rows;

  static LpProblem from_model(const MilpModel& model);
  int num_cols() const { return static_cast<int>(cost.size()); }
};

/** Engine interface so the branch-and-bound driver can use other LP codes. */
class LpEngine {
 public:
  virtual ~LpEngine() = default;
  virtual void load(const LpProblem& problem) = 0;
  virtual void set_bounds(int col, double lb, double ub) = 0;
  virtual void set_objective(const std::vector<double>& cost, double constant) = 0;
  virtual void add_row(const Row& row) = 0;
  /** Solves from the current basis when one is available. */
  virtual LpSolution solve(const LpOptions& options) = 0;
};

/** Bounded-variable revised primal simplex with a dense basis inverse. */
std::unique_ptr<LpEngine> make_simplex_engine();

/** Solves the continuous relaxation of a model (integrality marks ignored). */
LpSolution solve_lp(const MilpModel& model, const LpOptions& options = {});
LpSolution solve_lp(const LpProblem& problem, const LpOptions& options = {});

/** Max row and bound violation of x for the problem. */
double lp_violation(const LpProblem& problem, const std::vector<double>& x);

}  // namespace owf
