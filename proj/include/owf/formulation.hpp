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
#include "owf/milp_model.hpp"
#include "owf/network.hpp"
#include "owf/partition.hpp"

namespace owf {

enum class RelaxationKind { kOA, kPW };

struct RelaxationOptions {
  RelaxationKind kind = RelaxationKind::kOA;
  double xi = 1.0;  // m
  bool relax_directions = false;
  bool duality_cuts = false;
  bool direction_vis = false;
  bool symmetry_cuts = false;
  bool share_pw_duality = false;  // PW only: bound duality terms with the PW multipliers
};

/**
 * Which part of the time expansion a model covers.
 *
 * Full models span every step with the intertemporal constraints (Euler
 * steps, recovery, switching). Steady-state models cover chosen steps and
 * drop them. Pooled models are built from a single-step pooled BoundsStore.
 */
struct ModelScope {
  std::vector<int> steps;
  bool intertemporal = true;
  bool pooled = false;
  bool integral = true;                // enforce integrality at all steps in `steps`
  std::vector<int> integral_steps;     // when non-empty, only these steps are integral

  static ModelScope full(const Instance& instance);
  static ModelScope steady(int k);
  static ModelScope pooled_step();

  bool contains(int k) const;
  bool is_integral(int k) const;
};

/**
 * Variables and exact-linear constraints shared by every relaxation: head
 * bounds, node flows, tank volumes and Euler steps, valve and pump on/off
 * logic, flow conservation, tank recovery, switching limits and the
 * objective.
 */
MilpModel build_shared_constraints(const Instance& instance, const BoundsStore& bounds,
                                   const ModelScope& scope);

/** Adds q+, q-, y and dh+- with the direction-based bounding constraints. */
void add_direction_decomposition(MilpModel& model, const Instance& instance,
                                 const BoundsStore& bounds, const ModelScope& scope,
                                 bool relax_directions);

/** Adds tangent outer approximations and chord bounds for pipes and pumps. */
void add_outer_approximation(MilpModel& model, const Instance& instance, const BoundsStore& bounds,
                             const Partition& partition, const ModelScope& scope);

/** Adds the convex-combination piecewise envelopes. */
void add_piecewise(MilpModel& model, const Instance& instance, const Partition& partition,
                   const ModelScope& scope, bool relax_directions);

MilpModel build_oa(const Instance& instance, const BoundsStore& bounds, const Partition& partition,
                   const ModelScope& scope, bool relax_directions = false);
MilpModel build_pw(const Instance& instance, const BoundsStore& bounds, const Partition& partition,
                   const ModelScope& scope, bool relax_directions = false);

/**
 * Status variables at step k get priority 2(K-k)+2, direction variables
 * 2(K-k)+1, everything else 0.
 */
void set_branch_priorities(MilpModel& model, const Instance& instance);

}  // namespace owf
