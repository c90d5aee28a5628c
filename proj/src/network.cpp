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

#include "owf/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace owf {

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kDemand: return "demand";
    case NodeKind::kReservoir: return "reservoir";
    case NodeKind::kTank: return "tank";
  }
  return "?";
}

const char* to_string(LinkKind kind) {
  switch (kind) {
    case LinkKind::kPipe: return "pipe";
    case LinkKind::kPump: return "pump";
    case LinkKind::kValve: return "valve";
  }
  return "?";
}

double Instance::time(int k) const {
  double t = 0.0;
  for (int i = 0; i < k; ++i) t += dt[i];
  return t;
}

void Instance::finalize() {
  node_lookup_.clear();
  link_lookup_.clear();
  out_.assign(nodes.size(), {});
  in_.assign(nodes.size(), {});
  demands_.clear();
  reservoirs_.clear();
  tanks_.clear();
  pipes_.clear();
  pumps_.clear();
  valves_.clear();
  controls_.clear();
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    node_lookup_.emplace(nodes[i].id, i);
    switch (nodes[i].kind) {
      case NodeKind::kDemand: demands_.push_back(i); break;
      case NodeKind::kReservoir: reservoirs_.push_back(i); break;
      case NodeKind::kTank: tanks_.push_back(i); break;
    }
  }
  const int n = static_cast<int>(nodes.size());
  for (int l = 0; l < static_cast<int>(links.size()); ++l) {
    const Link& link = links[l];
    link_lookup_.emplace(link.id, l);
    if (link.tail >= 0 && link.tail < n) out_[link.tail].push_back(l);
    if (link.head >= 0 && link.head < n) in_[link.head].push_back(l);
    switch (link.kind) {
      case LinkKind::kPipe: pipes_.push_back(l); break;
      case LinkKind::kPump: pumps_.push_back(l); controls_.push_back(l); break;
      case LinkKind::kValve: valves_.push_back(l); controls_.push_back(l); break;
    }
  }
}

int Instance::node_index(const std::string& id) const {
  auto it = node_lookup_.find(id);
  return it == node_lookup_.end() ? -1 : it->second;
}

int Instance::link_index(const std::string& id) const {
  auto it = link_lookup_.find(id);
  return it == link_lookup_.end() ? -1 : it->second;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : violations) os << v.entity << ": " << v.message << "\n";
  return os.str();
}

namespace {

class Checker {
 public:
  explicit Checker(ValidationReport& report) : report_(report) {}

  void fail(const std::string& entity, const std::string& message) {
    report_.violations.push_back({entity, message});
  }
  bool expect(bool cond, const std::string& entity, const std::string& message) {
    if (!cond) fail(entity, message);
    return cond;
  }
  bool length(const std::vector<double>& v, size_t n, const std::string& entity,
              const std::string& field) {
    return expect(v.size() == n, entity,
                  field + " must have " + std::to_string(n) + " entries");
  }
  bool finite(const std::vector<double>& v, const std::string& entity,
              const std::string& field) {
    for (double x : v) {
      if (!std::isfinite(x)) {
        fail(entity, field + " must be finite");
        return false;
      }
    }
    return true;
  }

 private:
  ValidationReport& report_;
};

bool same(double a, double b) { return a == b; }

}  // namespace

ValidationReport validate(const Instance& inst) {
  ValidationReport report;
  Checker check(report);
  const size_t K = inst.dt.size();

  check.expect(K >= 1, "horizon", "at least one time step required");
  for (size_t k = 0; k < K; ++k) {
    if (!(inst.dt[k] > 0.0) || !std::isfinite(inst.dt[k])) {
      check.fail("horizon", "time step " + std::to_string(k + 1) + " must be positive");
    }
  }

  std::map<std::string, int> node_ids;
  for (const Node& node : inst.nodes) {
    if (node.id.empty()) check.fail("node", "empty node id");
    if (++node_ids[node.id] == 2) check.fail(node.id, "duplicate node id " + node.id);
  }
  std::map<std::string, int> link_ids;
  for (const Link& link : inst.links) {
    if (link.id.empty()) check.fail("link", "empty link id");
    if (++link_ids[link.id] == 2) check.fail(link.id, "duplicate link id " + link.id);
  }

  for (const Node& node : inst.nodes) {
    const std::string& id = node.id;
    const size_t nh = node.kind == NodeKind::kTank ? K + 1 : K;
    bool ok = check.length(node.head_lb, nh, id, "head_lb") &&
              check.length(node.head_ub, nh, id, "head_ub") &&
              check.finite(node.head_lb, id, "head_lb") &&
              check.finite(node.head_ub, id, "head_ub");
    if (ok) {
      for (size_t k = 0; k < nh; ++k) {
        if (node.head_lb[k] > node.head_ub[k]) {
          check.fail(id, "head_lb exceeds head_ub at index " + std::to_string(k + 1));
        }
        if (node.kind == NodeKind::kReservoir && !same(node.head_lb[k], node.head_ub[k])) {
          check.fail(id, "reservoir head must be fixed (h_lb == h_ub) at index " +
                             std::to_string(k + 1));
        }
      }
    }
    if (node.kind == NodeKind::kDemand) {
      check.length(node.demand, K, id, "demand") && check.finite(node.demand, id, "demand");
    }
    if (node.kind == NodeKind::kTank) {
      const TankData& t = node.tank;
      check.expect(t.diameter > 0.0 && std::isfinite(t.diameter), id,
                   "tank diameter must be positive");
      check.expect(std::isfinite(t.bottom), id, "tank bottom must be finite");
      if (ok) {
        for (size_t k = 0; k < nh; ++k) {
          if (t.bottom > node.head_lb[k]) {
            check.fail(id, "tank bottom exceeds head_lb at index " + std::to_string(k + 1));
            break;
          }
        }
      }
      if (ok && t.diameter > 0.0 && t.bottom <= node.head_lb[0]) {
        const double vlo = tank_volume(t, node.head_lb[0]);
        const double vhi = tank_volume(t, node.head_ub[0]);
        check.expect(t.initial_volume >= vlo && t.initial_volume <= vhi, id,
                     "initial volume outside the volume range of the first head bounds");
      }
      if (check.length(t.flow_lb, K, id, "tank flow_lb") &&
          check.length(t.flow_ub, K, id, "tank flow_ub") &&
          check.finite(t.flow_lb, id, "tank flow_lb") &&
          check.finite(t.flow_ub, id, "tank flow_ub")) {
        for (size_t k = 0; k < K; ++k) {
          if (t.flow_lb[k] > t.flow_ub[k]) {
            check.fail(id, "tank flow_lb exceeds flow_ub at step " + std::to_string(k + 1));
          }
        }
      }
    }
  }

  const int n = static_cast<int>(inst.nodes.size());
  for (const Link& link : inst.links) {
    const std::string& id = link.id;
    if (link.tail < 0 || link.tail >= n) {
      const std::string named = link.tail_id.empty() ? "" : link.tail_id + " ";
      check.fail(id, "tail node " + named + "does not exist");
    }
    if (link.head < 0 || link.head >= n) {
      const std::string named = link.head_id.empty() ? "" : link.head_id + " ";
      check.fail(id, "head node " + named + "does not exist");
    }
    if (link.tail == link.head && link.tail >= 0) check.fail(id, "link is a self-loop");
    bool ok = check.length(link.flow_lb, K, id, "flow_lb") &&
              check.length(link.flow_ub, K, id, "flow_ub") &&
              check.length(link.plus_lb, K, id, "plus_lb") &&
              check.length(link.plus_ub, K, id, "plus_ub") &&
              check.length(link.minus_lb, K, id, "minus_lb") &&
              check.length(link.minus_ub, K, id, "minus_ub") &&
              check.finite(link.flow_lb, id, "flow_lb") && check.finite(link.flow_ub, id, "flow_ub") &&
              check.finite(link.plus_lb, id, "plus_lb") && check.finite(link.minus_lb, id, "minus_lb");
    if (ok) {
      for (size_t k = 0; k < K; ++k) {
        const std::string at = " at step " + std::to_string(k + 1);
        if (link.flow_lb[k] > link.flow_ub[k]) check.fail(id, "flow_lb exceeds flow_ub" + at);
        if (link.plus_ub[k] != std::max(0.0, link.flow_ub[k])) {
          check.fail(id, "plus_ub must equal max(0, flow_ub)" + at);
        }
        if (link.minus_ub[k] != std::max(0.0, -link.flow_lb[k])) {
          check.fail(id, "minus_ub must equal max(0, -flow_lb)" + at);
        }
        if (link.plus_lb[k] < 0.0 || link.minus_lb[k] < 0.0) {
          check.fail(id, "directed lower bounds must be nonnegative" + at);
        }
        if (link.plus_lb[k] > link.plus_ub[k]) check.fail(id, "plus_lb exceeds plus_ub" + at);
        if (link.minus_lb[k] > link.minus_ub[k]) check.fail(id, "minus_lb exceeds minus_ub" + at);
        if (link.kind == LinkKind::kPump) {
          if (link.flow_lb[k] != 0.0) check.fail(id, "pump flow_lb must be 0" + at);
          if (link.minus_ub[k] != 0.0) check.fail(id, "pump minus_ub must be 0" + at);
        }
      }
    }
    if (link.kind == LinkKind::kPipe) {
      const PipeData& p = link.pipe;
      check.expect(p.length > 0.0 && std::isfinite(p.length), id, "pipe length must be positive");
      check.expect(p.resistance > 0.0 && std::isfinite(p.resistance), id,
                   "pipe resistance must be positive");
      check.expect(p.exponent > 1.0 && std::isfinite(p.exponent), id,
                   "pipe exponent must exceed 1");
    }
    if (link.kind == LinkKind::kPump) {
      const PumpData& p = link.pump;
      check.expect(p.a > 0.0 && std::isfinite(p.a), id, "pump a must be positive");
      check.expect(p.b < 0.0 && std::isfinite(p.b), id, "pump b must be negative");
      check.expect(p.c > 0.0 && std::isfinite(p.c), id, "pump c must be positive");
      if (ok && p.a > 0.0 && p.b < 0.0 && p.c > 0.0) {
        for (size_t k = 0; k < K; ++k) {
          if (p.a + p.b * std::pow(link.plus_ub[k], p.c) < 0.0) {
            check.fail(id, "pump gain is negative at the upper flow bound at step " +
                               std::to_string(k + 1));
            break;
          }
        }
      }
      if (check.length(p.flow_cost, K, id, "flow_cost")) check.finite(p.flow_cost, id, "flow_cost");
      if (check.length(p.status_cost, K, id, "status_cost")) {
        check.finite(p.status_cost, id, "status_cost");
      }
      check.expect(p.min_on_s >= 0.0 && p.min_off_s >= 0.0, id,
                   "pump minimum on/off times must be nonnegative");
      check.expect(p.max_switches >= 0, id, "pump switch limit must be nonnegative");
    }
  }
  return report;
}

Incidence incidence(const Instance& inst, const std::string& node) {
  const int i = inst.node_index(node);
  if (i < 0) throw std::invalid_argument("unknown node id " + node);
  Incidence result;
  for (int l : inst.out_links(i)) result.outgoing.push_back(inst.links[l].id);
  for (int l : inst.in_links(i)) result.incoming.push_back(inst.links[l].id);
  return result;
}

double tank_area(const TankData& tank) {
  return std::numbers::pi / 4.0 * tank.diameter * tank.diameter;
}

double tank_volume(const TankData& tank, double head) {
  if (head < tank.bottom) throw std::domain_error("tank head below bottom elevation");
  return tank_area(tank) * (head - tank.bottom);
}

double tank_head(const TankData& tank, double volume) {
  if (volume < 0.0) throw std::domain_error("negative tank volume");
  return tank.bottom + volume / tank_area(tank);
}

void derive_directed_bounds(Link& link) {
  const size_t K = link.flow_ub.size();
  link.plus_ub.assign(K, 0.0);
  link.minus_ub.assign(K, 0.0);
  for (size_t k = 0; k < K; ++k) {
    link.plus_ub[k] = std::max(0.0, link.flow_ub[k]);
    link.minus_ub[k] = std::max(0.0, -link.flow_lb[k]);
  }
  if (link.plus_lb.empty()) link.plus_lb.assign(K, 0.0);
  if (link.minus_lb.empty()) link.minus_lb.assign(K, 0.0);
}

std::vector<std::vector<int>> pump_group_indices(const Instance& inst) {
  using Signature = std::tuple<int, int, double, double, double, std::vector<double>,
                               std::vector<double>, std::vector<double>, std::vector<double>,
                               std::vector<double>, double, double, int, std::string>;
  std::map<Signature, std::vector<int>> groups;
  for (int l : inst.pumps()) {
    const Link& link = inst.links[l];
    const PumpData& p = link.pump;
    Signature sig{link.tail,     link.head,     p.a,           p.b,         p.c,
                  link.flow_ub,  link.plus_lb,  p.flow_cost,   p.status_cost, link.flow_lb,
                  p.min_on_s,    p.min_off_s,   p.max_switches, p.group};
    groups[sig].push_back(l);
  }
  std::vector<std::vector<int>> result;
  for (auto& [sig, members] : groups) {
    if (members.size() < 2) continue;
    std::sort(members.begin(), members.end(),
              [&](int a, int b) { return inst.links[a].id < inst.links[b].id; });
    result.push_back(members);
  }
  std::sort(result.begin(), result.end(), [&](const auto& a, const auto& b) {
    return inst.links[a.front()].id < inst.links[b.front()].id;
  });
  return result;
}

std::vector<std::vector<std::string>> pump_groups(const Instance& inst) {
  std::vector<std::vector<std::string>> result;
  for (const auto& group : pump_group_indices(inst)) {
    std::vector<std::string> ids;
    for (int l : group) ids.push_back(inst.links[l].id);
    result.push_back(ids);
  }
  return result;
}

}  // namespace owf
