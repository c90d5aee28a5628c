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

#include "owf/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace owf {

Curve Curve::loss(double coef, double exponent) {
  Curve c;
  c.kind = Kind::kLoss;
  c.coef = coef;
  c.exponent = exponent;
  return c;
}

Curve Curve::gain(double a, double b, double cc) {
  Curve c;
  c.kind = Kind::kGain;
  c.a = a;
  c.b = b;
  c.c = cc;
  return c;
}

Curve Curve::pipe(const PipeData& p) { return loss(p.length * p.resistance, p.exponent); }
Curve Curve::pump(const PumpData& p) { return gain(p.a, p.b, p.c); }

double Curve::value(double q) const {
  if (kind == Kind::kLoss) return coef * std::pow(q, exponent);
  return a + b * std::pow(q, c);
}

double Curve::slope(double q) const {
  if (kind == Kind::kLoss) {
    if (q == 0.0) return exponent > 1.0 ? 0.0 : coef;
    return coef * exponent * std::pow(q, exponent - 1.0);
  }
  if (q == 0.0) return c > 1.0 ? 0.0 : (c == 1.0 ? b : -std::numeric_limits<double>::infinity());
  return b * c * std::pow(q, c - 1.0);
}

bool Curve::convex() const {
  if (kind == Kind::kLoss) return exponent >= 1.0;
  return c < 1.0;  // b < 0: b q^c is concave for c >= 1
}

std::pair<double, double> chord_gap(const Curve& curve, double lo, double hi) {
  if (!(hi > lo)) return {0.0, lo};
  const double flo = curve.value(lo);
  const double fhi = curve.value(hi);
  const double s = (fhi - flo) / (hi - lo);
  auto gap = [&](double q) { return std::abs(flo + s * (q - lo) - curve.value(q)); };
  // The gap is concave on [lo, hi] for convex or concave curves; golden section.
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo;
  double b = hi;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double g1 = gap(x1);
  double g2 = gap(x2);
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, hi); ++it) {
    if (g1 < g2) {
      a = x1;
      x1 = x2;
      g1 = g2;
      x2 = a + phi * (b - a);
      g2 = gap(x2);
    } else {
      b = x2;
      x2 = x1;
      g2 = g1;
      x1 = b - phi * (b - a);
      g1 = gap(x1);
    }
  }
  const double q = 0.5 * (a + b);
  return {gap(q), q};
}

std::vector<double> build_partition(const Curve& curve, double lo, double hi, double xi,
                                    const std::vector<double>& seed) {
  if (!(xi > 0.0)) throw std::invalid_argument("xi must be positive");
  if (!(lo <= hi)) throw std::invalid_argument("partition interval has lo > hi");
  if (lo == hi) return {lo};
  std::vector<double> pts{lo, hi};
  for (double s : seed) {
    if (s > lo && s < hi) pts.push_back(s);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<double> out{pts.front()};
  // Depth-first bisection of each seeded interval.
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    std::vector<std::pair<double, double>> stack{{pts[i], pts[i + 1]}};
    std::vector<double> inner;
    while (!stack.empty()) {
      auto [a, b] = stack.back();
      stack.pop_back();
      auto [g, q] = chord_gap(curve, a, b);
      const double tiny = 1e-12 * std::max(1.0, std::abs(b));
      if (g <= xi || q - a <= tiny || b - q <= tiny) continue;
      inner.push_back(q);
      stack.push_back({a, q});
      stack.push_back({q, b});
    }
    std::sort(inner.begin(), inner.end());
    out.insert(out.end(), inner.begin(), inner.end());
    out.push_back(pts[i + 1]);
  }
  return out;
}

bool Partition::has(int link, int k, Direction d) const {
  return points_.count({link, k, static_cast<int>(d)}) > 0;
}

const std::vector<double>& Partition::at(int link, int k, Direction d) const {
  auto it = points_.find({link, k, static_cast<int>(d)});
  if (it == points_.end()) throw std::out_of_range("missing partition entry");
  return it->second;
}

void Partition::set(int link, int k, Direction d, std::vector<double> points) {
  points_[{link, k, static_cast<int>(d)}] = std::move(points);
}

Partition build_partitions(const Instance& inst, const BoundsStore& bounds, double xi,
                           const Partition* previous) {
  Partition part;
  part.set_xi(xi);
  auto seed = [&](int l, int k, Direction d) -> std::vector<double> {
    if (previous && previous->has(l, k, d)) return previous->at(l, k, d);
    return {};
  };
  for (int l : inst.pipes()) {
    const Curve curve = Curve::pipe(inst.links[l].pipe);
    const LinkBounds& b = bounds.links[l];
    for (int k = 0; k < bounds.steps; ++k) {
      part.set(l, k, Direction::kPlus,
               build_partition(curve, b.plus_lb[k], b.plus_ub[k], xi, seed(l, k, Direction::kPlus)));
      part.set(l, k, Direction::kMinus,
               build_partition(curve, b.minus_lb[k], b.minus_ub[k], xi,
                               seed(l, k, Direction::kMinus)));
    }
  }
  for (int l : inst.pumps()) {
    const Curve curve = Curve::pump(inst.links[l].pump);
    const LinkBounds& b = bounds.links[l];
    for (int k = 0; k < bounds.steps; ++k) {
      part.set(l, k, Direction::kPlus,
               build_partition(curve, b.plus_lb[k], b.plus_ub[k], xi, seed(l, k, Direction::kPlus)));
    }
  }
  return part;
}

}  // namespace owf
