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

#include "owf/network.hpp"

namespace owf {

/** Head and node-flow bounds of one node. Tanks carry K+1 head entries. */
struct NodeBounds {
  std::vector<double> h_lb, h_ub;
  std::vector<double> q_lb, q_ub;  // node flow q_i: demand, reservoir or tank outflow
};

/** Flow, directed flow, direction and status bounds of one link, per step. */
struct LinkBounds {
  std::vector<double> q_lb, q_ub;
  std::vector<double> plus_lb, plus_ub;
  std::vector<double> minus_lb, minus_ub;
  std::vector<double> y_lb, y_ub;
  std::vector<double> z_lb, z_ub;
};

/**
 * Per-(entity, time) bounds. Directed lower bounds are conditional: plus_lb
 * holds when y = 1 (pipes, valves) or z = 1 (pumps).
 */
struct BoundsStore {
  int steps = 0;
  std::vector<NodeBounds> nodes;
  std::vector<LinkBounds> links;

  /** Bounds straight from the instance data. */
  static BoundsStore from_instance(const Instance& instance);

  /**
   * Single-step store whose bounds are the union over all steps. Demand rates
   * become ranges and reservoir heads become intervals.
   */
  BoundsStore pooled() const;

  /**
   * Intersects pooled single-step bounds into every step. Tank heads are
   * updated at indices 0..K-1 only.
   */
  void absorb_pooled(const BoundsStore& pooled);

  /** Intersects another store into this one. */
  void intersect(const BoundsStore& other);

  /** Propagates implied bounds between flows, directed flows, y and z. */
  void normalize(const Instance& instance);

  /** True when lb <= ub everywhere; otherwise names the first offender. */
  bool consistent(std::string* why = nullptr) const;

  /** True when every interval of `inner` lies inside this store's (tolerance tol). */
  bool contains(const BoundsStore& inner, double tol = 1e-9) const;

  /** Max relative width reduction from `before` to this store. */
  double max_relative_change(const BoundsStore& before) const;

  bool operator==(const BoundsStore& other) const;
};

}  // namespace owf
