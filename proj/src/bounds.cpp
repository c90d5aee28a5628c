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

#include "owf/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace owf {

namespace {

using Vec = std::vector<double>;

template <typename F>
void for_each_node_pair(NodeBounds& a, const NodeBounds& b, F f) {
  f(a.h_lb, a.h_ub, b.h_lb, b.h_ub);
  f(a.q_lb, a.q_ub, b.q_lb, b.q_ub);
}

template <typename F>
void for_each_link_pair(LinkBounds& a, const LinkBounds& b, F f) {
  f(a.q_lb, a.q_ub, b.q_lb, b.q_ub);
  f(a.plus_lb, a.plus_ub, b.plus_lb, b.plus_ub);
  f(a.minus_lb, a.minus_ub, b.minus_lb, b.minus_ub);
  f(a.y_lb, a.y_ub, b.y_lb, b.y_ub);
  f(a.z_lb, a.z_ub, b.z_lb, b.z_ub);
}

Vec pool_min(const Vec& v, size_t n) {
  return {*std::min_element(v.begin(), v.begin() + static_cast<long>(n))};
}
Vec pool_max(const Vec& v, size_t n) {
  return {*std::max_element(v.begin(), v.begin() + static_cast<long>(n))};
}

}  // namespace

BoundsStore BoundsStore::from_instance(const Instance& inst) {
  BoundsStore b;
  const int K = inst.num_steps();
  b.steps = K;
  b.links.resize(inst.links.size());
  for (size_t l = 0; l < inst.links.size(); ++l) {
    const Link& link = inst.links[l];
    LinkBounds& lb = b.links[l];
    lb.q_lb = link.flow_lb;
    lb.q_ub = link.flow_ub;
    lb.plus_lb = link.plus_lb;
    lb.plus_ub = link.plus_ub;
    lb.minus_lb = link.minus_lb;
    lb.minus_ub = link.minus_ub;
    lb.y_lb.assign(K, 0.0);
    lb.y_ub.assign(K, 1.0);
    const bool has_status = link.kind != LinkKind::kPipe;
    lb.z_lb.assign(K, has_status ? 0.0 : 1.0);
    lb.z_ub.assign(K, 1.0);
  }
  b.nodes.resize(inst.nodes.size());
  for (size_t i = 0; i < inst.nodes.size(); ++i) {
    const Node& node = inst.nodes[i];
    NodeBounds& nb = b.nodes[i];
    nb.h_lb = node.head_lb;
    nb.h_ub = node.head_ub;
    nb.q_lb.assign(K, 0.0);
    nb.q_ub.assign(K, 0.0);
    for (int k = 0; k < K; ++k) {
      switch (node.kind) {
        case NodeKind::kDemand:
          nb.q_lb[k] = nb.q_ub[k] = node.demand[k];
          break;
        case NodeKind::kTank:
          nb.q_lb[k] = node.tank.flow_lb[k];
          nb.q_ub[k] = node.tank.flow_ub[k];
          break;
        case NodeKind::kReservoir: {
          double cap = 0.0;
          for (int l : inst.out_links(static_cast<int>(i))) cap += inst.links[l].plus_ub[k];
          for (int l : inst.in_links(static_cast<int>(i))) cap += inst.links[l].minus_ub[k];
          nb.q_ub[k] = cap;
          break;
        }
      }
    }
    if (node.kind == NodeKind::kTank) {
      const double h0 = tank_head(node.tank, node.tank.initial_volume);
      nb.h_lb[0] = std::max(nb.h_lb[0], h0);
      nb.h_ub[0] = std::min(nb.h_ub[0], h0);
      if (nb.h_lb[0] > nb.h_ub[0]) nb.h_lb[0] = nb.h_ub[0] = h0;
    }
  }
  return b;
}

BoundsStore BoundsStore::pooled() const {
  BoundsStore p;
  p.steps = 1;
  const size_t K = static_cast<size_t>(steps);
  p.nodes.resize(nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i) {
    p.nodes[i].h_lb = pool_min(nodes[i].h_lb, K);
    p.nodes[i].h_ub = pool_max(nodes[i].h_ub, K);
    p.nodes[i].q_lb = pool_min(nodes[i].q_lb, K);
    p.nodes[i].q_ub = pool_max(nodes[i].q_ub, K);
  }
  p.links.resize(links.size());
  for (size_t l = 0; l < links.size(); ++l) {
    const LinkBounds& s = links[l];
    LinkBounds& d = p.links[l];
    d.q_lb = pool_min(s.q_lb, K);
    d.q_ub = pool_max(s.q_ub, K);
    d.plus_lb = pool_min(s.plus_lb, K);
    d.plus_ub = pool_max(s.plus_ub, K);
    d.minus_lb = pool_min(s.minus_lb, K);
    d.minus_ub = pool_max(s.minus_ub, K);
    d.y_lb = pool_min(s.y_lb, K);
    d.y_ub = pool_max(s.y_ub, K);
    d.z_lb = pool_min(s.z_lb, K);
    d.z_ub = pool_max(s.z_ub, K);
  }
  return p;
}

void BoundsStore::absorb_pooled(const BoundsStore& p) {
  auto meet = [](Vec& lo, Vec& hi, const Vec& plo, const Vec& phi, size_t n) {
    for (size_t k = 0; k < n; ++k) {
      lo[k] = std::max(lo[k], plo[0]);
      hi[k] = std::min(hi[k], phi[0]);
    }
  };
  const size_t K = static_cast<size_t>(steps);
  for (size_t i = 0; i < nodes.size(); ++i) {
    meet(nodes[i].h_lb, nodes[i].h_ub, p.nodes[i].h_lb, p.nodes[i].h_ub, K);
    meet(nodes[i].q_lb, nodes[i].q_ub, p.nodes[i].q_lb, p.nodes[i].q_ub, K);
  }
  for (size_t l = 0; l < links.size(); ++l) {
    for_each_link_pair(links[l], p.links[l], [&](Vec& lo, Vec& hi, const Vec& plo, const Vec& phi) {
      meet(lo, hi, plo, phi, K);
    });
  }
}

void BoundsStore::intersect(const BoundsStore& o) {
  auto meet = [](Vec& lo, Vec& hi, const Vec& olo, const Vec& ohi) {
    for (size_t k = 0; k < lo.size(); ++k) {
      lo[k] = std::max(lo[k], olo[k]);
      hi[k] = std::min(hi[k], ohi[k]);
    }
  };
  for (size_t i = 0; i < nodes.size(); ++i) for_each_node_pair(nodes[i], o.nodes[i], meet);
  for (size_t l = 0; l < links.size(); ++l) for_each_link_pair(links[l], o.links[l], meet);
}

void BoundsStore::normalize(const Instance& inst) {
  for (size_t l = 0; l < links.size(); ++l) {
    LinkBounds& b = links[l];
    const LinkKind kind = inst.links[l].kind;
    for (int k = 0; k < steps; ++k) {
      // Binary bounds snap to the lattice.
      b.y_lb[k] = b.y_lb[k] > 1e-9 ? 1.0 : 0.0;
      b.y_ub[k] = b.y_ub[k] < 1.0 - 1e-9 ? 0.0 : 1.0;
      b.z_lb[k] = b.z_lb[k] > 1e-9 ? 1.0 : 0.0;
      b.z_ub[k] = b.z_ub[k] < 1.0 - 1e-9 ? 0.0 : 1.0;
      if (kind == LinkKind::kPipe) b.z_lb[k] = b.z_ub[k] = 1.0;

      b.plus_ub[k] = std::min(b.plus_ub[k], std::max(0.0, b.q_ub[k]));
      b.minus_ub[k] = std::min(b.minus_ub[k], std::max(0.0, -b.q_lb[k]));
      b.q_ub[k] = std::min(b.q_ub[k], b.plus_ub[k]);
      b.q_lb[k] = std::max(b.q_lb[k], -b.minus_ub[k]);
      if (kind == LinkKind::kPump) {
        if (b.z_ub[k] == 0.0) b.q_ub[k] = std::min(b.q_ub[k], 0.0);
        if (b.z_lb[k] == 1.0) b.q_lb[k] = std::max(b.q_lb[k], b.plus_lb[k]);
        continue;
      }
      if (kind == LinkKind::kValve && b.z_ub[k] == 0.0) {
        b.q_lb[k] = std::max(b.q_lb[k], 0.0);
        b.q_ub[k] = std::min(b.q_ub[k], 0.0);
      }
      if (b.y_ub[k] == 0.0) b.q_ub[k] = std::min(b.q_ub[k], -b.minus_lb[k]);
      if (b.y_lb[k] == 1.0) b.q_lb[k] = std::max(b.q_lb[k], b.plus_lb[k]);
    }
  }
}

bool BoundsStore::consistent(std::string* why) const {
  auto check = [&](const Vec& lo, const Vec& hi, const std::string& what) {
    for (size_t k = 0; k < lo.size(); ++k) {
      if (!(lo[k] <= hi[k])) {
        if (why) {
          std::ostringstream os;
          os << what << " at index " << k << ": " << lo[k] << " > " << hi[k];
          *why = os.str();
        }
        return false;
      }
    }
    return true;
  };
  for (size_t i = 0; i < nodes.size(); ++i) {
    const std::string n = "node " + std::to_string(i);
    if (!check(nodes[i].h_lb, nodes[i].h_ub, n + " head")) return false;
    if (!check(nodes[i].q_lb, nodes[i].q_ub, n + " flow")) return false;
  }
  for (size_t l = 0; l < links.size(); ++l) {
    const std::string n = "link " + std::to_string(l);
    const LinkBounds& b = links[l];
    if (!check(b.q_lb, b.q_ub, n + " flow")) return false;
    if (!check(b.plus_lb, b.plus_ub, n + " plus flow")) return false;
    if (!check(b.minus_lb, b.minus_ub, n + " minus flow")) return false;
    if (!check(b.y_lb, b.y_ub, n + " direction")) return false;
    if (!check(b.z_lb, b.z_ub, n + " status")) return false;
  }
  return true;
}

bool BoundsStore::contains(const BoundsStore& inner, double tol) const {
  bool ok = true;
  auto check = [&](const Vec& lo, const Vec& hi, const Vec& ilo, const Vec& ihi) {
    for (size_t k = 0; k < lo.size(); ++k) {
      const double slack_lo = tol * std::max(1.0, std::abs(lo[k]));
      const double slack_hi = tol * std::max(1.0, std::abs(hi[k]));
      if (ilo[k] < lo[k] - slack_lo || ihi[k] > hi[k] + slack_hi) ok = false;
    }
  };
  for (size_t i = 0; i < nodes.size(); ++i) {
    check(nodes[i].h_lb, nodes[i].h_ub, inner.nodes[i].h_lb, inner.nodes[i].h_ub);
    check(nodes[i].q_lb, nodes[i].q_ub, inner.nodes[i].q_lb, inner.nodes[i].q_ub);
  }
  for (size_t l = 0; l < links.size(); ++l) {
    const LinkBounds& a = links[l];
    const LinkBounds& b = inner.links[l];
    check(a.q_lb, a.q_ub, b.q_lb, b.q_ub);
    check(a.plus_lb, a.plus_ub, b.plus_lb, b.plus_ub);
    check(a.minus_lb, a.minus_ub, b.minus_lb, b.minus_ub);
    check(a.y_lb, a.y_ub, b.y_lb, b.y_ub);
    check(a.z_lb, a.z_ub, b.z_lb, b.z_ub);
  }
  return ok;
}

double BoundsStore::max_relative_change(const BoundsStore& before) const {
  double change = 0.0;
  auto cmp = [&](const Vec& lo, const Vec& hi, const Vec& blo, const Vec& bhi) {
    for (size_t k = 0; k < lo.size(); ++k) {
      const double scale = std::max({1.0, std::abs(bhi[k] - blo[k])});
      change = std::max(change, std::abs(lo[k] - blo[k]) / scale);
      change = std::max(change, std::abs(hi[k] - bhi[k]) / scale);
    }
  };
  for (size_t i = 0; i < nodes.size(); ++i) {
    cmp(nodes[i].h_lb, nodes[i].h_ub, before.nodes[i].h_lb, before.nodes[i].h_ub);
    cmp(nodes[i].q_lb, nodes[i].q_ub, before.nodes[i].q_lb, before.nodes[i].q_ub);
  }
  for (size_t l = 0; l < links.size(); ++l) {
    const LinkBounds& a = links[l];
    const LinkBounds& b = before.links[l];
    cmp(a.q_lb, a.q_ub, b.q_lb, b.q_ub);
    cmp(a.plus_lb, a.plus_ub, b.plus_lb, b.plus_ub);
    cmp(a.minus_lb, a.minus_ub, b.minus_lb, b.minus_ub);
    cmp(a.y_lb, a.y_ub, b.y_lb, b.y_ub);
    cmp(a.z_lb, a.z_ub, b.z_lb, b.z_ub);
  }
  return change;
}

bool BoundsStore::operator==(const BoundsStore& o) const {
  if (steps != o.steps || nodes.size() != o.nodes.size() || links.size() != o.links.size()) {
    return false;
  }
  for (size_t i = 0; i < nodes.size(); ++i) {
    const NodeBounds& a = nodes[i];
    const NodeBounds& b = o.nodes[i];
    if (a.h_lb != b.h_lb || a.h_ub != b.h_ub || a.q_lb != b.q_lb || a.q_ub != b.q_ub) return false;
  }
  for (size_t l = 0; l < links.size(); ++l) {
    const LinkBounds& a = links[l];
    const LinkBounds& b = o.links[l];
    if (a.q_lb != b.q_lb || a.q_ub != b.q_ub || a.plus_lb != b.plus_lb ||
        a.plus_ub != b.plus_ub || a.minus_lb != b.minus_lb || a.minus_ub != b.minus_ub ||
        a.y_lb != b.y_lb || a.y_ub != b.y_ub || a.z_lb != b.z_lb || a.z_ub != b.z_ub) {
      return false;
    }
  }
  return true;
}

}  // namespace owf
