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

#include "owf/bounds.hpp"
#include "owf/cuts.hpp"
#include "owf/network.hpp"

namespace owf {

struct ObcgConfig {
  double xi = 1.0;                // m
  double subproblem_time = 60.0;  // s
  int jobs = 0;
  bool duality_cuts = true;
  bool direction_vis = true;
};

struct Fixing {
  VarKey var;
  double value = 0.0;
};

struct ObcgOutput {
  CutSet cuts;                  // includes one single-variable cut per fixing
  std::vector<Fixing> fixings;  // binaries that can only take one value
  long subproblems = 0;
  long failures = 0;            // subproblems without a usable result
  bool infeasible = false;      // some steady state admits no point at all

  void append(const ObcgOutput& other);
};

/**
 * Implications between pairs of binaries (directions and statuses) at each
 * step, found by fixing one of them to `fix_value` and optimising the other
 * over a steady-state relaxation.
 */
ObcgOutput obcg_binary_binary(const Instance& instance, const BoundsStore& bounds, int fix_value,
                              const ObcgConfig& config = {});

/**
 * Conditional bounds of flows, tank flows and heads on each binary of the
 * same step: lo0 (1 - x) + lo1 x <= v <= hi0 (1 - x) + hi1 x.
 */
ObcgOutput obcg_binary_continuous(const Instance& instance, const BoundsStore& bounds,
                                  const ObcgConfig& config = {});

/** Both binary-binary passes followed by the binary-continuous pass. */
ObcgOutput obcg(const Instance& instance, const BoundsStore& bounds, const ObcgConfig& config = {});

}  // namespace owf
