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

#include "owf/bounds.hpp"
#include "owf/cuts.hpp"
#include "owf/formulation.hpp"
#include "owf/milp_model.hpp"
#include "owf/network.hpp"
#include "owf/partition.hpp"

namespace owf {

/**
 * Assembles a complete relaxation: the OA or PW model over `scope`, the cut
 * families switched on in `options`, and any extra cuts (e.g. from OBCG).
 * Duality cuts are left out of pooled models, whose demands are ranges.
 */
MilpModel build_relaxation(const Instance& instance, const BoundsStore& bounds,
                           const Partition& partition, const RelaxationOptions& options,
                           const ModelScope& scope, const CutSet* extra = nullptr);

}  // namespace owf
