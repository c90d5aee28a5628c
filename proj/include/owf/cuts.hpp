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
#include "owf/hydraulics.hpp"
#include "owf/milp_model.hpp"
#include "owf/network.hpp"
#include "owf/partition.hpp"

namespace owf {

enum class CutFamily { kSymmetry, kDirectionVi, kDuality, kObcg, kNoGood };

const char* to_string(CutFamily family);

/** A linear inequality over registry keys. k = -1 marks a cut spanning several steps. */
struct Cut {
  std::vector<std::pair<VarKey, double>> terms;
  Sense sense = Sense::kGe;
  double rhs = 0.0;
  CutFamily family = CutFamily::kSymmetry;
  int k = -1;

  /** Left-hand side under a key -> value lookup. */
  double activity(const std::function<double(const VarKey&)>& value) const;
  /** Amount by which the cut is violated (0 when satisfied). */
  double violation(const std::function<double(const VarKey&)>& value) const;
};

/** Auxiliary variable a cut family introduces. */
struct AuxVariable {
  VarKey key;
  double lb = 0.0;
  double ub = 0.0;
};

struct CutSet {
  std::vector<AuxVariable> vars;
  std::vector<Cut> cuts;

  void append(const CutSet& other);
  size_t size() const { return cuts.size(); }
};

/**
 * Chains z_1 <= z_2 <= ... <= z_n over each group of identical parallel pumps
 * at every listed step. Groups with switching limits are skipped because
 * relabelling pumps step by step can break minimum up and down times.
 */
CutSet symmetry_cuts(const Instance& instance, const std::vector<int>& steps);

/** Relabels identical pumps so that each step's statuses satisfy the symmetry chain. */
Schedule canonical_schedule(const Instance& instance, const Schedule& schedule);

/**
 * Flow-direction inequalities at sources, consumers and degree-two junctions.
 * Nodes are classified by their demand at each step, or by the node-flow
 * range in `bounds` when given (pooled models).
 */
CutSet direction_vis(const Instance& instance, const std::vector<int>& steps,
                     const BoundsStore* bounds = nullptr);

/** The four envelope inequalities for w = x * y over a box. Throws on infinite bounds. */
std::vector<Cut> mccormick(const VarKey& w, const VarKey& x, const VarKey& y, double x_lb,
                           double x_ub, double y_lb, double y_ub);

enum class DualityMode { kTangents, kSharedPw };

/**
 * Per-step energy balance cut: pipe friction work plus pump work cannot exceed
 * what sources, tanks and demands exchange at their heads. Introduces phi,
 * psi and McCormick w variables. kSharedPw bounds phi and psi through the
 * piecewise multipliers, so the model must contain them.
 */
CutSet duality_cuts(const Instance& instance, const BoundsStore& bounds, const Partition& partition,
                    DualityMode mode, const std::vector<int>& steps);

/**
 * Excludes the statuses of `prefix` on steps 0..k_inf-1:
 * sum_{zhat=0} z + sum_{zhat=1} (1 - z) >= 1. Throws for k_inf < 1.
 */
Cut no_good_cut(const Instance& instance, const Schedule& prefix, int k_inf);

/**
 * Adds auxiliary variables (unless already present) and every cut whose keys
 * all resolve in the model. Returns the number of cuts added.
 */
int apply_cuts(MilpModel& model, const CutSet& cuts);

/** Adds one cut as a model row; throws when a key is missing. */
int add_cut(MilpModel& model, const Cut& cut);

}  // namespace owf
