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

#include <stdexcept>
#include <string>
#include <vector>

#include "owf/network.hpp"

namespace owf {

/** Status bit per link index for one step. Entries for pipes are ignored. */
using ControlState = std::vector<int>;

/** Control states for every step, indexed [k][link]. */
struct Schedule {
  std::vector<ControlState> steps;

  int status(int k, int link) const { return steps[k][link]; }
  bool operator==(const Schedule&) const = default;
};

/** Schedule with every control set to `value` (pipes set to 1). */
Schedule uniform_schedule(const Instance& instance, int value);

double pipe_head_loss(const PipeData& pipe, double q);
double pipe_head_loss_derivative(const PipeData& pipe, double q);
/** a*z + b*q^c. Throws std::invalid_argument when z = 0 and q != 0. */
double pump_head_gain(const PumpData& pump, double q, int z);

enum class HydraulicErrorKind {
  kDisconnectedDemand,
  kNonConvergence,
  kNegativePumpFlowRequired,
  kValveConflict,
  kInvalidInput,
};

class HydraulicError : public std::runtime_error {
 public:
  HydraulicError(HydraulicErrorKind kind, std::string entity, const std::string& what)
      : std::runtime_error(what), kind_(kind), entity_(std::move(entity)) {}
  HydraulicErrorKind kind() const { return kind_; }
  const std::string& entity() const { return entity_; }

 private:
  HydraulicErrorKind kind_;
  std::string entity_;
};

struct SteadyStateSettings {
  double q_eps = 1e-6;         // m^3/s, width of the linearised loss segment
  double tolerance = 1e-10;    // residual infinity norm
  int max_iterations = 100;
};

struct SteadyState {
  std::vector<double> flow;  // per link, m^3/s
  std::vector<double> head;  // per node, m
  double mass_residual = 0.0;    // max |balance| over demand nodes
  double energy_residual = 0.0;  // max |law| over active pipes and pumps
  int iterations = 0;
};

/**
 * Solves one steady state with tank heads held fixed. `tank_heads` is
 * indexed by node; only tank entries are read.
 */
SteadyState solve_steady_state(const Instance& instance, int k, const ControlState& controls,
                               const std::vector<double>& tank_heads,
                               const SteadyStateSettings& settings = {});

/** Net outflow sum(out) - sum(in) of a node under the given link flows. */
double net_outflow(const Instance& instance, int node, const std::vector<double>& flow);

struct DirectedFlows {
  std::vector<double> plus;   // per link
  std::vector<double> minus;  // per link
};

DirectedFlows split_flows(const std::vector<double>& flow);

/** Content objective f_P at step k; `fixed_heads` is indexed by node. */
double content_objective(const Instance& instance, int k, const ControlState& controls,
                         const DirectedFlows& flows, const std::vector<double>& fixed_heads);

/** Co-content objective f_D at step k for heads indexed by node. */
double cocontent_objective(const Instance& instance, int k, const ControlState& controls,
                           const std::vector<double>& heads);

struct SimulationResult {
  std::vector<SteadyState> states;          // solved steps, up to the first failure
  std::vector<std::vector<double>> volume;  // [node][K+1], empty for non-tanks
  bool feasible = false;
  int k_inf = 0;                            // 1-based first infeasible step; 0 if feasible
  std::vector<std::string> violations;
  double cost = 0.0;                        // sum of lambda*q + mu*z when feasible
};

/** Extended-period simulation with explicit Euler tank updates. */
SimulationResult simulate(const Instance& instance, const Schedule& schedule,
                          const SteadyStateSettings& settings = {});

/** Minimum up/down time and switch-count violations of a schedule. */
std::vector<std::string> switching_violations(const Instance& instance, const Schedule& schedule);

/** Objective value sum_k sum_pumps lambda*q + mu*z for the given flows. */
double schedule_cost(const Instance& instance, const Schedule& schedule,
                     const std::vector<SteadyState>& states);

}  // namespace owf
