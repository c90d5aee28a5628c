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
#include <string>
#include <utility>
#include <vector>

#include "owf/bounds.hpp"
#include "owf/branch_and_bound.hpp"
#include "owf/cuts.hpp"
#include "owf/formulation.hpp"
#include "owf/hydraulics.hpp"
#include "owf/network.hpp"

namespace owf {

enum class Termination { kConverged, kTimeLimit, kNodeLimit, kGapLimit, kInfeasibleCertified,
                         kNumerical };

const char* to_string(Termination t);

struct SolveOptions {
  RelaxationOptions relaxation;
  BbLimits limits;
  LpOptions lp;
};

struct OwfResult {
  bool has_incumbent = false;
  Schedule schedule;
  SimulationResult simulation;
  double upper_bound = kInf;  // simulated cost of the incumbent
  double lower_bound = -kInf;
  long nodes = 0;
  long lazy_cuts = 0;
  double wall_time_s = 0.0;
  Termination termination = Termination::kNumerical;
  std::vector<std::pair<double, double>> trace;  // (lower, upper) over the run
};

/** Statuses of every control read off a model point. Pipes are set to 1. */
Schedule extract_schedule(const MilpModel& model, const Instance& instance,
                          const std::vector<double>& x);

/**
 * Branch and bound over the relaxation with a simulation check at each
 * integer point. A feasible schedule becomes an incumbent at its simulated
 * cost and is then excluded; an infeasible one is cut off up to its first
 * failing step.
 */
OwfResult solve_owf(const Instance& instance, const SolveOptions& options,
                    const BoundsStore& bounds, const CutSet* cuts = nullptr);

/**
 * Relative gap (ub - lb) / ub, clamped at 0. With ub == 0 the absolute
 * difference is returned and *absolute is set.
 */
double gap(double lb, double ub, bool* absolute = nullptr);

/** Percentage improvement 100 (f2 - f1) / f1. */
double improvement(double f1, double f2);

/** Root LP bound of a relaxation; +inf when the LP is infeasible. */
double root_bound(const Instance& instance, const BoundsStore& bounds,
                  const RelaxationOptions& options, const CutSet* cuts = nullptr,
                  const Partition* partition = nullptr);

}  // namespace owf
