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

#include "owf/relaxation.hpp"

#include <stdexcept>

namespace owf {

MilpModel build_relaxation(const Instance& inst, const BoundsStore& bounds, const Partition& part,
                           const RelaxationOptions& opt, const ModelScope& scope,
                           const CutSet* extra) {
  if (!(opt.xi > 0.0)) throw std::invalid_argument("xi must be positive");
  MilpModel m = opt.kind == RelaxationKind::kPW
                    ? build_pw(inst, bounds, part, scope, opt.relax_directions)
                    : build_oa(inst, bounds, part, scope, opt.relax_directions);
  CutSet cuts;
  if (opt.symmetry_cuts) cuts.append(symmetry_cuts(inst, scope.steps));
  if (opt.direction_vis) {
    cuts.append(direction_vis(inst, scope.steps, scope.pooled ? &bounds : nullptr));
  }
  if (opt.duality_cuts && !scope.pooled) {
    const bool shared = opt.share_pw_duality && opt.kind == RelaxationKind::kPW;
    cuts.append(duality_cuts(inst, bounds, part,
                             shared ? DualityMode::kSharedPw : DualityMode::kTangents,
                             scope.steps));
  }
  // Extra cuts are step-specific and do not transfer to pooled bounds.
  if (extra && !scope.pooled) cuts.append(*extra);
  apply_cuts(m, cuts);
  set_branch_priorities(m, inst);
  return m;
}

}  // namespace owf
