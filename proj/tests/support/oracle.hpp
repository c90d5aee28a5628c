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

// Exhaustive schedule enumeration used as a ground-truth oracle.

#pragma once

#include <limits>
#include <vector>

#include "owf/hydraulics.hpp"

namespace owf::testing {

struct FeasibleSchedule {
  Schedule schedule;
  SimulationResult simulation;
};

struct OracleResult {
  int enumerated = 0;
  std::vector<FeasibleSchedule> feasible;
  double best_cost = std::numeric_limits<double>::infinity();
  int best_index = -1;
};

/** Decodes schedule number `code` (bit per control and step). */
Schedule decode_schedule(const Instance& instance, long code);

/** Simulates every schedule that passes the switching check. */
OracleResult brute_force(const Instance& instance);

}  // namespace owf::testing
