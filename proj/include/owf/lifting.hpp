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

// Maps simulated trajectories onto model variables.

#pragma once

#include <string>
#include <vector>

#include "owf/bounds.hpp"
#include "owf/hydraulics.hpp"
#include "owf/milp_model.hpp"
#include "owf/network.hpp"
#include "owf/partition.hpp"

namespace owf {

/**
 * Value of every model variable induced by a feasible simulation. Directions
 * of links with zero flow are free physically; they are chosen per step to
 * minimise the worst row violation. Convex multipliers use the bracketing
 * interval of `partition`.
 */
std::vector<double> lift_point(const MilpModel& model, const Instance& instance,
                               const Schedule& schedule, const SimulationResult& simulation,
                               const Partition& partition);

/**
 * Largest violation of a bounds store by a simulated trajectory. Directed
 * lower bounds are checked only under their conditions, and a zero-flow link
 * passes if either direction is admissible.
 */
double bounds_violation(const Instance& instance, const BoundsStore& bounds,
                        const Schedule& schedule, const SimulationResult& simulation,
                        std::string* where = nullptr);

}  // namespace owf
