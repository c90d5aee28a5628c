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

#include "owf/hydraulics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace owf {

namespace {

constexpr double kSimTol = 1e-8;
constexpr double kZeroFlow = 1e-12;  // m^3/s

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

// Solves S x = rhs in place by Gaussian elimination with partial pivoting.
bool dense_solve(std::vector<double>& S, std::vector<double>& rhs, int n) {
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::abs(S[r * n + c]) > std::abs(S[piv * n + c])) piv = r;
    }
    if (std::abs(S[piv * n + c]) < 1e-300) return false;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(S[c * n + j], S[piv * n + j]);
      std::swap(rhs[c], rhs[piv]);
    }
    const double d = S[c * n + c];
    for (int r = c + 1; r < n; ++r) {
      const double f = S[r * n + c] / d;
      if (f == 0.0) continue;
      for (int j = c; j < n; ++j) S[r * n + j] -= f * S[c * n + j];
      rhs[r] -= f * rhs[c];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double s = rhs[r];
    for (int j = r + 1; j < n; ++j) s -= S[r * n + j] * rhs[j];
    rhs[r] = s / S[r * n + r];
  }
  return true;
}

// Regularised link law: h_tail - h_head = phi(q).
struct LinkLaw {
  const Link* link = nullptr;
  double q_eps = 1e-6;

  double phi(double q) const {
    if (link->kind == LinkKind::kPipe) {
      const PipeData& p = link->pipe;
      if (std::abs(q) < q_eps) return p.length * p.resistance * std::pow(q_eps, p.exponent - 1.0) * q;
      return pipe_head_loss(p, q);
    }
    const PumpData& p = link->pump;
    if (q < q_eps) return -(p.a + p.b * std::pow(q_eps, p.c - 1.0) * q);
    return -(p.a + p.b * std::pow(q, p.c));
  }
  double dphi(double q) const {
    if (link->kind == LinkKind::kPipe) {
      const PipeData& p = link->pipe;
      if (std::abs(q) < q_eps) return p.length * p.resistance * std::pow(q_eps, p.exponent - 1.0);
      return pipe_head_loss_derivative(p, q);
    }
    const PumpData& p = link->pump;
    if (q < q_eps) return -p.b * std::pow(q_eps, p.c - 1.0);
    return -p.b * p.c * std::pow(q, p.c - 1.0);
  }
};

}  // namespace

Schedule uniform_schedule(const Instance& inst, int value) {
  Schedule s;
  ControlState state(inst.links.size(), 1);
  for (int l : inst.controls()) state[l] = value;
  s.steps.assign(inst.num_steps(), state);
  return s;
}

double pipe_head_loss(const PipeData& pipe, double q) {
  return pipe.length * pipe.resistance * q * std::pow(std::abs(q), pipe.exponent - 1.0);
}

double pipe_head_loss_derivative(const PipeData& pipe, double q) {
  return pipe.exponent * pipe.length * pipe.resistance * std::pow(std::abs(q), pipe.exponent - 1.0);
}

double pump_head_gain(const PumpData& pump, double q, int z) {
  if (z == 0) {
    if (q != 0.0) throw std::invalid_argument("inactive pump with nonzero flow");
    return 0.0;
  }
  return pump.a + pump.b * std::pow(q, pump.c);
}

double net_outflow(const Instance& inst, int node, const std::vector<double>& flow) {
  double s = 0.0;
  for (int l : inst.out_links(node)) s += flow[l];
  for (int l : inst.in_links(node)) s -= flow[l];
  return s;
}

SteadyState solve_steady_state(const Instance& inst, int k, const ControlState& controls,
                               const std::vector<double>& tank_heads,
                               const SteadyStateSettings& settings) {
  const int n = static_cast<int>(inst.nodes.size());
  const int m = static_cast<int>(inst.links.size());
  if (static_cast<int>(controls.size()) != m) {
    throw HydraulicError(HydraulicErrorKind::kInvalidInput, "", "control state size mismatch");
  }
  auto active = [&](int l) {
    return inst.links[l].kind == LinkKind::kPipe || controls[l] != 0;
  };

  // Fixed heads of reservoirs and tanks.
  std::vector<char> fixed(n, 0);
  std::vector<double> fixed_head(n, 0.0);
  for (int i : inst.reservoirs()) {
    fixed[i] = 1;
    fixed_head[i] = inst.nodes[i].head_lb[k];
  }
  for (int i : inst.tanks()) {
    fixed[i] = 1;
    fixed_head[i] = tank_heads.at(i);
  }

  // Open valves merge their endpoints into one hydraulic node.
  UnionFind groups(n);
  for (int l : inst.valves()) {
    if (active(l)) groups.unite(inst.links[l].tail, inst.links[l].head);
  }
  std::vector<int> rep(n);
  for (int i = 0; i < n; ++i) rep[i] = groups.find(i);
  std::vector<char> super_fixed(n, 0);
  std::vector<double> super_head(n, 0.0);
  std::vector<double> super_demand(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const int r = rep[i];
    if (fixed[i]) {
      if (super_fixed[r] && super_head[r] != fixed_head[i]) {
        throw HydraulicError(HydraulicErrorKind::kValveConflict, inst.nodes[i].id,
                             "open valve joins fixed heads that differ at " + inst.nodes[i].id);
      }
      super_fixed[r] = 1;
      super_head[r] = fixed_head[i];
    }
    if (inst.nodes[i].kind == NodeKind::kDemand) super_demand[r] += inst.nodes[i].demand[k];
  }

  // Connected components over active non-valve links between hydraulic nodes.
  std::vector<int> flow_links;
  for (int l = 0; l < m; ++l) {
    if (inst.links[l].kind != LinkKind::kValve && active(l)) flow_links.push_back(l);
  }
  UnionFind comps(n);
  for (int l : flow_links) comps.unite(rep[inst.links[l].tail], rep[inst.links[l].head]);
  std::vector<char> comp_fixed(n, 0);
  std::vector<double> comp_demand(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (rep[i] != i) continue;
    const int c = comps.find(i);
    if (super_fixed[i]) comp_fixed[c] = 1;
    comp_demand[c] += super_demand[i];
  }
  for (int i = 0; i < n; ++i) {
    if (rep[i] != i) continue;
    const int c = comps.find(i);
    if (comp_fixed[c]) continue;
    if (std::abs(comp_demand[c]) > 1e-12) {
      std::string name = inst.nodes[i].id;
      for (int j = 0; j < n; ++j) {
        if (comps.find(rep[j]) == c && inst.nodes[j].kind == NodeKind::kDemand &&
            inst.nodes[j].demand[k] != 0.0) {
          name = inst.nodes[j].id;
          break;
        }
      }
      throw HydraulicError(HydraulicErrorKind::kDisconnectedDemand, name,
                           "demand node " + name + " is not connected to a supply");
    }
    // Floating component with balanced demand: anchor its first node.
    comp_fixed[c] = 1;
    super_fixed[i] = 1;
    const Node& node = inst.nodes[i];
    const size_t idx = std::min<size_t>(k, node.head_lb.size() - 1);
    super_head[i] = 0.5 * (node.head_lb[idx] + node.head_ub[idx]);
  }

  // Unknown heads.
  std::vector<int> free_index(n, -1);
  std::vector<int> free_nodes;
  for (int i = 0; i < n; ++i) {
    if (rep[i] == i && !super_fixed[i]) {
      free_index[i] = static_cast<int>(free_nodes.size());
      free_nodes.push_back(i);
    }
  }
  const int nf = static_cast<int>(free_nodes.size());
  const int nl = static_cast<int>(flow_links.size());

  std::vector<LinkLaw> law(nl);
  std::vector<int> tail_f(nl), head_f(nl);
  std::vector<double> c_fixed(nl, 0.0);
  for (int e = 0; e < nl; ++e) {
    const Link& link = inst.links[flow_links[e]];
    law[e] = LinkLaw{&link, settings.q_eps};
    const int a = rep[link.tail];
    const int b = rep[link.head];
    tail_f[e] = free_index[a];
    head_f[e] = free_index[b];
    if (tail_f[e] < 0) c_fixed[e] += super_head[a];
    if (head_f[e] < 0) c_fixed[e] -= super_head[b];
  }
  std::vector<double> demand_f(nf);
  for (int f = 0; f < nf; ++f) demand_f[f] = super_demand[free_nodes[f]];

  std::vector<double> Q(nl), H(nf);
  double mean_fixed = 0.0;
  int count_fixed = 0;
  for (int i = 0; i < n; ++i) {
    if (rep[i] == i && super_fixed[i]) {
      mean_fixed += super_head[i];
      ++count_fixed;
    }
  }
  if (count_fixed > 0) mean_fixed /= count_fixed;
  std::fill(H.begin(), H.end(), mean_fixed);
  for (int e = 0; e < nl; ++e) {
    const Link& link = *law[e].link;
    if (link.kind == LinkKind::kPump) {
      Q[e] = 0.5 * std::pow(link.pump.a / -link.pump.b, 1.0 / link.pump.c);
    } else {
      const double span = std::max(std::abs(link.flow_lb[k]), std::abs(link.flow_ub[k]));
      Q[e] = std::clamp(0.1 * span, 1e-3, 1.0);
    }
  }

  auto energy = [&](const std::vector<double>& q, const std::vector<double>& h,
                    std::vector<double>& e_out) {
    for (int e = 0; e < nl; ++e) {
      double drop = c_fixed[e];
      if (tail_f[e] >= 0) drop += h[tail_f[e]];
      if (head_f[e] >= 0) drop -= h[head_f[e]];
      e_out[e] = law[e].phi(q[e]) - drop;
    }
  };
  auto mass = [&](const std::vector<double>& q, std::vector<double>& m_out) {
    for (int f = 0; f < nf; ++f) m_out[f] = -demand_f[f];
    for (int e = 0; e < nl; ++e) {
      if (tail_f[e] >= 0) m_out[tail_f[e]] += q[e];
      if (head_f[e] >= 0) m_out[head_f[e]] -= q[e];
    }
  };
  auto inf_norm = [](const std::vector<double>& v) {
    double r = 0.0;
    for (double x : v) r = std::max(r, std::abs(x));
    return r;
  };

  std::vector<double> E(nl), M(nf), D(nl), dQ(nl), dH(nf), S, rhs;
  int iter = 0;
  bool converged = false;
  bool mass_feasible = false;
  for (; iter <= settings.max_iterations; ++iter) {
    energy(Q, H, E);
    mass(Q, M);
    if (inf_norm(E) <= settings.tolerance && inf_norm(M) <= settings.tolerance) {
      converged = true;
      break;
    }
    if (iter == settings.max_iterations) break;
    for (int e = 0; e < nl; ++e) D[e] = law[e].dphi(Q[e]);
    // Schur complement (A^T D^-1 A) dH = A^T D^-1 E - M.
    S.assign(static_cast<size_t>(nf) * nf, 0.0);
    rhs.assign(nf, 0.0);
    for (int f = 0; f < nf; ++f) rhs[f] = -M[f];
    for (int e = 0; e < nl; ++e) {
      const double w = 1.0 / D[e];
      const int a = tail_f[e];
      const int b = head_f[e];
      if (a >= 0) {
        S[a * nf + a] += w;
        rhs[a] += w * E[e];
      }
      if (b >= 0) {
        S[b * nf + b] += w;
        rhs[b] -= w * E[e];
      }
      if (a >= 0 && b >= 0) {
        S[a * nf + b] -= w;
        S[b * nf + a] -= w;
      }
    }
    if (!dense_solve(S, rhs, nf)) {
      throw HydraulicError(HydraulicErrorKind::kNonConvergence, "",
                           "singular network matrix at step " + std::to_string(k + 1));
    }
    dH = rhs;
    for (int e = 0; e < nl; ++e) {
      double adh = 0.0;
      if (tail_f[e] >= 0) adh += dH[tail_f[e]];
      if (head_f[e] >= 0) adh -= dH[head_f[e]];
      dQ[e] = (adh - E[e]) / D[e];
    }
    double t = 1.0;
    if (mass_feasible && inf_norm(E) > 1e-3) {
      // Exact line search on the convex content objective along dQ (mass
      // balance is preserved for every t).
      auto slope = [&](double s) {
        double g = 0.0;
        for (int e = 0; e < nl; ++e) g += (law[e].phi(Q[e] + s * dQ[e]) - c_fixed[e]) * dQ[e];
        return g;
      };
      if (slope(1.0) > 0.0) {
        double lo = 0.0;
        double hi = 1.0;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (slope(mid) > 0.0) hi = mid; else lo = mid;
        }
        t = std::max(0.5 * (lo + hi), 1e-6);
      }
    }
    for (int e = 0; e < nl; ++e) Q[e] += t * dQ[e];
    // Heads enter the energy residual linearly, so they take the full step.
    for (int f = 0; f < nf; ++f) H[f] += dH[f];
    mass_feasible = true;
  }
  if (!converged) {
    throw HydraulicError(HydraulicErrorKind::kNonConvergence, "",
                         "steady state did not converge at step " + std::to_string(k + 1));
  }

  SteadyState st;
  st.iterations = iter;
  st.flow.assign(m, 0.0);
  st.head.assign(n, 0.0);
  for (int e = 0; e < nl; ++e) {
    const int l = flow_links[e];
    // Newton leaves round-off flow on links that carry nothing.
    double q = std::abs(Q[e]) < kZeroFlow ? 0.0 : Q[e];
    if (inst.links[l].kind == LinkKind::kPump) {
      if (q < -1e-9) {
        throw HydraulicError(HydraulicErrorKind::kNegativePumpFlowRequired, inst.links[l].id,
                             "active pump " + inst.links[l].id + " would need reverse flow");
      }
      q = std::max(q, 0.0);
    }
    st.flow[l] = q;
  }
  for (int i = 0; i < n; ++i) {
    const int r = rep[i];
    st.head[i] = super_fixed[r] ? super_head[r] : H[free_index[r]];
  }

  // Valve flows: spanning forest of open valves inside each hydraulic node.
  std::vector<std::vector<std::pair<int, int>>> valve_adj(n);
  for (int l : inst.valves()) {
    if (!active(l)) continue;
    valve_adj[inst.links[l].tail].push_back({l, inst.links[l].head});
    valve_adj[inst.links[l].head].push_back({l, inst.links[l].tail});
  }
  std::vector<char> visited(n, 0);
  for (int root_rep = 0; root_rep < n; ++root_rep) {
    if (rep[root_rep] != root_rep) continue;
    std::vector<int> members;
    for (int i = 0; i < n; ++i) {
      if (rep[i] == root_rep) members.push_back(i);
    }
    if (members.size() < 2) continue;
    int root = members.front();
    for (int i : members) {
      if (fixed[i]) {
        root = i;
        break;
      }
    }
    // Breadth-first tree; process in reverse order for subtree sums.
    std::vector<int> order{root};
    std::vector<int> parent_link(n, -1), parent_node(n, -1);
    visited[root] = 1;
    for (size_t p = 0; p < order.size(); ++p) {
      const int u = order[p];
      for (auto [l, v] : valve_adj[u]) {
        if (visited[v]) continue;
        visited[v] = 1;
        parent_link[v] = l;
        parent_node[v] = u;
        order.push_back(v);
      }
    }
    std::vector<double> need(n, 0.0);
    for (int i : members) {
      if (inst.nodes[i].kind == NodeKind::kDemand) {
        need[i] = inst.nodes[i].demand[k] - net_outflow(inst, i, st.flow);
      }
    }
    for (size_t p = order.size(); p-- > 1;) {
      const int v = order[p];
      const double s = fixed[v] ? 0.0 : need[v];
      const int l = parent_link[v];
      st.flow[l] = inst.links[l].tail == v ? s : -s;
      need[parent_node[v]] += s;
    }
  }

  // Residuals against the exact laws.
  double mres = 0.0;
  for (int i : inst.demands()) {
    mres = std::max(mres, std::abs(net_outflow(inst, i, st.flow) - inst.nodes[i].demand[k]));
  }
  double eres = 0.0;
  for (int l : flow_links) {
    const Link& link = inst.links[l];
    const double drop = st.head[link.tail] - st.head[link.head];
    if (link.kind == LinkKind::kPipe) {
      eres = std::max(eres, std::abs(pipe_head_loss(link.pipe, st.flow[l]) - drop));
    } else {
      eres = std::max(eres, std::abs(pump_head_gain(link.pump, st.flow[l], 1) + drop));
    }
  }
  st.mass_residual = mres;
  st.energy_residual = eres;
  return st;
}

DirectedFlows split_flows(const std::vector<double>& flow) {
  DirectedFlows d;
  d.plus.resize(flow.size());
  d.minus.resize(flow.size());
  for (size_t l = 0; l < flow.size(); ++l) {
    d.plus[l] = std::max(flow[l], 0.0);
    d.minus[l] = std::max(-flow[l], 0.0);
  }
  return d;
}

double content_objective(const Instance& inst, int k, const ControlState& controls,
                         const DirectedFlows& flows, const std::vector<double>& fixed_heads) {
  (void)k;
  const int m = static_cast<int>(inst.links.size());
  std::vector<double> q(m, 0.0);
  double value = 0.0;
  for (int l = 0; l < m; ++l) {
    if (flows.plus[l] < 0.0 || flows.minus[l] < 0.0) {
      throw std::invalid_argument("negative directed flow on link " + inst.links[l].id);
    }
    const Link& link = inst.links[l];
    const bool on = link.kind == LinkKind::kPipe || controls[l] != 0;
    if (!on) continue;
    q[l] = flows.plus[l] - flows.minus[l];
    if (link.kind == LinkKind::kPipe) {
      const PipeData& p = link.pipe;
      const double e = 1.0 + p.exponent;
      value += p.length * p.resistance / e *
               (std::pow(flows.plus[l], e) + std::pow(flows.minus[l], e));
    } else if (link.kind == LinkKind::kPump) {
      const PumpData& p = link.pump;
      value -= p.a * flows.plus[l] + p.b * std::pow(flows.plus[l], p.c + 1.0) / (p.c + 1.0);
    }
  }
  for (int i : inst.reservoirs()) value -= fixed_heads[i] * net_outflow(inst, i, q);
  for (int i : inst.tanks()) value -= fixed_heads[i] * net_outflow(inst, i, q);
  return value;
}

double cocontent_objective(const Instance& inst, int k, const ControlState& controls,
                           const std::vector<double>& heads) {
  double value = 0.0;
  for (int i : inst.demands()) value += heads[i] * inst.nodes[i].demand[k];
  for (int l = 0; l < static_cast<int>(inst.links.size()); ++l) {
    const Link& link = inst.links[l];
    const double drop = heads[link.tail] - heads[link.head];
    if (link.kind == LinkKind::kPipe) {
      const PipeData& p = link.pipe;
      const double alpha = p.exponent;
      value -= alpha / (1.0 + alpha) * std::pow(p.length * p.resistance, -1.0 / alpha) *
               std::pow(std::abs(drop), 1.0 + 1.0 / alpha);
    } else if (controls[l] != 0 && link.kind == LinkKind::kValve) {
      if (std::abs(drop) > 1e-8) {
        throw std::invalid_argument("open valve " + link.id + " with unequal heads");
      }
    } else if (controls[l] != 0 && link.kind == LinkKind::kPump) {
      const PumpData& p = link.pump;
      const double g = -drop;
      if (g < -1e-9) throw std::invalid_argument("negative implied gain on pump " + link.id);
      const double t = (g - p.a) / p.b;
      if (t > 0.0) {
        value -= p.b * std::pow(t, 1.0 + 1.0 / p.c) / (p.c + 1.0) +
                 (p.a - g) * std::pow(t, 1.0 / p.c);
      }
    }
  }
  return value;
}

std::vector<std::string> switching_violations(const Instance& inst, const Schedule& schedule) {
  std::vector<std::string> out;
  const int K = inst.num_steps();
  for (int l : inst.pumps()) {
    const PumpData& p = inst.links[l].pump;
    int switches = 0;
    for (int k = 1; k < K; ++k) {
      const int prev = schedule.status(k - 1, l);
      const int cur = schedule.status(k, l);
      if (prev == cur) continue;
      const double tau = cur == 1 ? p.min_on_s : p.min_off_s;
      if (cur == 1) ++switches;
      const double t0 = inst.time(k);
      for (int kk = k; kk < K && inst.time(kk) <= t0 + tau + 1e-9; ++kk) {
        if (schedule.status(kk, l) != cur) {
          std::ostringstream os;
          os << "pump " << inst.links[l].id << " switched " << (cur ? "on" : "off")
             << " at step " << k + 1 << " but changes again at step " << kk + 1
             << " within its minimum " << (cur ? "on" : "off") << " time";
          out.push_back(os.str());
          break;
        }
      }
    }
    if (switches > p.max_switches) {
      out.push_back("pump " + inst.links[l].id + " switches on " + std::to_string(switches) +
                    " times, limit " + std::to_string(p.max_switches));
    }
  }
  return out;
}

double schedule_cost(const Instance& inst, const Schedule& schedule,
                     const std::vector<SteadyState>& states) {
  double cost = 0.0;
  for (size_t k = 0; k < states.size(); ++k) {
    for (int l : inst.pumps()) {
      const PumpData& p = inst.links[l].pump;
      cost += p.flow_cost[k] * states[k].flow[l] + p.status_cost[k] * schedule.status(k, l);
    }
  }
  return cost;
}

SimulationResult simulate(const Instance& inst, const Schedule& schedule,
                          const SteadyStateSettings& settings) {
  const int K = inst.num_steps();
  const int n = static_cast<int>(inst.nodes.size());
  SimulationResult res;
  res.volume.assign(n, {});
  std::vector<double> tank_heads(n, 0.0);
  for (int i : inst.tanks()) {
    res.volume[i].assign(K + 1, 0.0);
    res.volume[i][0] = inst.nodes[i].tank.initial_volume;
  }
  auto fail = [&](int k, const std::string& why) {
    if (res.k_inf == 0) res.k_inf = k + 1;
    res.violations.push_back("step " + std::to_string(k + 1) + ": " + why);
  };
  auto head_of = [&](int i, int idx) {
    const TankData& t = inst.nodes[i].tank;
    return t.bottom + res.volume[i][idx] / tank_area(t);
  };
  auto check_tank_head = [&](int i, int idx, int k) {
    const Node& node = inst.nodes[i];
    const double h = head_of(i, idx);
    if (h < node.head_lb[idx] - kSimTol || h > node.head_ub[idx] + kSimTol) {
      std::ostringstream os;
      os.precision(10);
      os << "tank " << node.id << " head " << h << " outside [" << node.head_lb[idx] << ", "
         << node.head_ub[idx] << "] at index " << idx + 1;
      fail(k, os.str());
    }
  };

  for (int k = 0; k < K && res.k_inf == 0; ++k) {
    for (int i : inst.tanks()) {
      tank_heads[i] = head_of(i, k);
      if (k == 0) check_tank_head(i, 0, 0);
    }
    if (res.k_inf != 0) break;
    SteadyState st;
    try {
      st = solve_steady_state(inst, k, schedule.steps[k], tank_heads, settings);
    } catch (const HydraulicError& err) {
      fail(k, err.what());
      break;
    }
    for (int i : inst.demands()) {
      const Node& node = inst.nodes[i];
      if (st.head[i] < node.head_lb[k] - kSimTol || st.head[i] > node.head_ub[k] + kSimTol) {
        std::ostringstream os;
        os.precision(10);
        os << "node " << node.id << " head " << st.head[i] << " outside [" << node.head_lb[k]
           << ", " << node.head_ub[k] << "]";
        fail(k, os.str());
      }
    }
    for (int l = 0; l < static_cast<int>(inst.links.size()); ++l) {
      const Link& link = inst.links[l];
      const double q = st.flow[l];
      std::ostringstream os;
      os.precision(10);
      if (q < link.flow_lb[k] - kSimTol || q > link.flow_ub[k] + kSimTol) {
        os << "link " << link.id << " flow " << q << " outside [" << link.flow_lb[k] << ", "
           << link.flow_ub[k] << "]";
        fail(k, os.str());
        continue;
      }
      if (link.kind == LinkKind::kPump) {
        if (schedule.status(k, l) && q < link.plus_lb[k] - kSimTol) {
          os << "pump " << link.id << " flow " << q << " below its running minimum "
             << link.plus_lb[k];
          fail(k, os.str());
        }
        continue;
      }
      const bool fwd_ok = q >= link.plus_lb[k] - kSimTol;
      const bool bwd_ok = -q >= link.minus_lb[k] - kSimTol;
      if ((q > 0.0 && !fwd_ok) || (q < 0.0 && !bwd_ok) || (q == 0.0 && !fwd_ok && !bwd_ok)) {
        os << "link " << link.id << " flow " << q << " violates a directed lower bound";
        fail(k, os.str());
      }
    }
    for (int i : inst.reservoirs()) {
      if (net_outflow(inst, i, st.flow) < -kSimTol) {
        fail(k, "reservoir " + inst.nodes[i].id + " receives inflow");
      }
    }
    for (int i : inst.tanks()) {
      const TankData& t = inst.nodes[i].tank;
      const double q = net_outflow(inst, i, st.flow);
      if (q < t.flow_lb[k] - kSimTol || q > t.flow_ub[k] + kSimTol) {
        fail(k, "tank " + inst.nodes[i].id + " flow outside its bounds");
      }
      res.volume[i][k + 1] = res.volume[i][k] - inst.dt[k] * q;
      check_tank_head(i, k + 1, k);
    }
    res.states.push_back(std::move(st));
  }
  if (res.k_inf == 0) {
    for (int i : inst.tanks()) {
      if (res.volume[i][K] < inst.nodes[i].tank.initial_volume - kSimTol) {
        fail(K - 1, "tank " + inst.nodes[i].id + " ends below its initial volume");
      }
    }
  }
  res.feasible = res.k_inf == 0;
  if (res.feasible) res.cost = schedule_cost(inst, schedule, res.states);
  return res;
}

}  // namespace owf
