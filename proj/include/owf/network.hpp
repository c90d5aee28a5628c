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
#include <unordered_map>
#include <vector>

namespace owf {

enum class NodeKind { kDemand, kReservoir, kTank };
enum class LinkKind { kPipe, kPump, kValve };

const char* to_string(NodeKind kind);
const char* to_string(LinkKind kind);

/** Cylindrical tank payload. */
struct TankData {
  double diameter = 0.0;        // m
  double bottom = 0.0;          // m, elevation of the tank floor
  double initial_volume = 0.0;  // m^3
  std::vector<double> flow_lb;  // m^3/s, outflow bounds per step
  std::vector<double> flow_ub;
};

/**
 * A network node. Head bounds cover K+1 indices for tanks and K indices
 * otherwise. Reservoirs carry h_lb == h_ub.
 */
struct Node {
  std::string id;
  NodeKind kind = NodeKind::kDemand;
  std::vector<double> head_lb;  // m
  std::vector<double> head_ub;  // m
  std::vector<double> demand;   // m^3/s, demand nodes only; negative = consumption
  TankData tank;                // tank nodes only
};

/** Hazen-Williams pipe payload. */
struct PipeData {
  double length = 0.0;      // m
  double resistance = 0.0;  // per unit length
  double exponent = 1.852;
};

/** Fixed-speed pump payload. Gain is a*z + b*q^c. */
struct PumpData {
  double a = 0.0;
  double b = 0.0;
  double c = 2.0;
  std::vector<double> flow_cost;    // lambda per step, currency per m^3/s
  std::vector<double> status_cost;  // mu per step, currency
  double min_on_s = 0.0;            // tau_on
  double min_off_s = 0.0;           // tau_off
  int max_switches = 1 << 20;       // N, limit on switch-on events
  std::string group;                // optional symmetry-group tag
};

/**
 * A directed network link (tail -> head). Directed flow bounds follow the
 * decomposition q = q+ - q-: plus_ub = max(0, flow_ub), minus_ub =
 * max(0, -flow_lb). For pumps plus_lb is the minimum flow when running.
 */
struct Link {
  std::string id;
  int tail = -1;
  int head = -1;
  std::string tail_id;  // endpoint ids as written in the source document, if any
  std::string head_id;
  LinkKind kind = LinkKind::kPipe;
  std::vector<double> flow_lb;
  std::vector<double> flow_ub;
  std::vector<double> plus_lb;
  std::vector<double> plus_ub;
  std::vector<double> minus_lb;
  std::vector<double> minus_ub;
  PipeData pipe;
  PumpData pump;

  bool is_control() const { return kind != LinkKind::kPipe; }
};

/** Time-expanded OWF instance. Steps are indexed 0..K-1 internally. */
struct Instance {
  std::string name;
  std::string description;
  std::vector<Node> nodes;
  std::vector<Link> links;
  std::vector<double> dt;  // s, per step

  int num_steps() const { return static_cast<int>(dt.size()); }
  /** Start time of step k in seconds; time(K) is the horizon end. */
  double time(int k) const;

  /** Recomputes lookup tables; call after editing nodes or links. */
  void finalize();

  int node_index(const std::string& id) const;  // -1 when absent
  int link_index(const std::string& id) const;  // -1 when absent

  const std::vector<int>& out_links(int node) const { return out_[node]; }
  const std::vector<int>& in_links(int node) const { return in_[node]; }
  const std::vector<int>& demands() const { return demands_; }
  const std::vector<int>& reservoirs() const { return reservoirs_; }
  const std::vector<int>& tanks() const { return tanks_; }
  const std::vector<int>& pipes() const { return pipes_; }
  const std::vector<int>& pumps() const { return pumps_; }
  const std::vector<int>& valves() const { return valves_; }
  /** Pumps and valves in link order. */
  const std::vector<int>& controls() const { return controls_; }

 private:
  std::unordered_map<std::string, int> node_lookup_;
  std::unordered_map<std::string, int> link_lookup_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  std::vector<int> demands_, reservoirs_, tanks_;
  std::vector<int> pipes_, pumps_, valves_, controls_;
};

struct Violation {
  std::string entity;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

/** Checks every structural invariant of the instance data model. */
ValidationReport validate(const Instance& instance);

struct Incidence {
  std::vector<std::string> outgoing;
  std::vector<std::string> incoming;
};

/** Outgoing and incoming link ids of a node. Throws on unknown id. */
Incidence incidence(const Instance& instance, const std::string& node);

double tank_area(const TankData& tank);
/** Volume (m^3) held at the given head. Throws if head < bottom. */
double tank_volume(const TankData& tank, double head);
/** Head (m) for the given volume. Throws if volume < 0. */
double tank_head(const TankData& tank, double volume);

/**
 * Fills plus_ub/minus_ub from flow bounds and defaults missing directed
 * lower bounds to zero.
 */
void derive_directed_bounds(Link& link);

/** Groups of identical parallel pumps, each sorted by id; singletons omitted. */
std::vector<std::vector<std::string>> pump_groups(const Instance& instance);
/** Same as pump_groups but with link indices. */
std::vector<std::vector<int>> pump_group_indices(const Instance& instance);

}  // namespace owf
