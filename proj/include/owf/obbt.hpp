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

#include <string>
#include <vector>

#include "owf/bounds.hpp"
#include "owf/network.hpp"

namespace owf {

/**
 * Bound tightening variants. The first letter says whether the subproblems
 * see a single step (S) or the whole horizon (T). SR and SS pool the bounds
 * of all steps into one step; SQ solves each step on its own.
 */
enum class ObbtVariant {
  kSR,  // pooled, OA, continuous
  kSS,  // pooled, PW, integral
  kSQ,  // one steady state per step, PW, integral
  kTR,  // full horizon, OA, continuous
  kTS,  // full horizon, PW, integral only at the target's step
};

const char* to_string(ObbtVariant variant);
/** Accepts "BT-SR", "bt-sr" or "sr" style names. */
bool parse_obbt_variant(const std::string& text, ObbtVariant* variant);
/** Comma-separated chain, e.g. "BT-SR,BT-SS". Throws std::invalid_argument. */
std::vector<ObbtVariant> parse_obbt_chain(const std::string& text);

struct ObbtConfig {
  ObbtVariant variant = ObbtVariant::kSR;
  int max_iterations = 25;
  double subproblem_time = 60.0;  // s per subproblem
  double tolerance = 1e-4;        // stop when no bound moves by more (relative)
  int jobs = 0;                   // 0 = hardware concurrency
  double xi = 1.0;                // m, partition tolerance of the subproblem models
  bool duality_cuts = true;
  bool direction_vis = true;
};

enum class ObbtStatus { kConverged, kIterationLimit, kInfeasible };

const char* to_string(ObbtStatus status);

struct ObbtResult {
  BoundsStore bounds;
  ObbtStatus status = ObbtStatus::kConverged;
  int iterations = 0;
  long subproblems = 0;
  long timeouts = 0;            // subproblems that ended on a limit
  std::vector<double> changes;  // max relative change per iteration
};

/**
 * Min/max of every head, tank and reservoir flow, direction, status and
 * directed flow over a relaxation built from the current bounds, repeated
 * until the bounds settle. The result is contained in the input.
 */
ObbtResult obbt(const Instance& instance, const BoundsStore& bounds, const ObbtConfig& config);

}  // namespace owf
