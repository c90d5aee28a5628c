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

#include <map>
#include <tuple>
#include <vector>

#include "owf/bounds.hpp"
#include "owf/network.hpp"

namespace owf {

/**
 * A directed one-dimensional curve. kLoss is coef * q^exponent (convex for
 * exponent >= 1); kGain is a + b * q^c (concave for b < 0, c >= 1).
 */
struct Curve {
  enum class Kind { kLoss, kGain };
  Kind kind = Kind::kLoss;
  double coef = 1.0;
  double exponent = 1.852;
  double a = 0.0;
  double b = 0.0;
  double c = 2.0;

  static Curve loss(double coef, double exponent);
  static Curve gain(double a, double b, double c);
  static Curve pipe(const PipeData& pipe);
  static Curve pump(const PumpData& pump);

  double value(double q) const;
  double slope(double q) const;
  /** True when the curve is convex on q >= 0, false when concave. */
  bool convex() const;
};

/** Max |chord - curve| over [lo, hi] and the point where it is attained. */
std::pair<double, double> chord_gap(const Curve& curve, double lo, double hi);

/**
 * Breakpoints on [lo, hi] by bisection at the point of maximum chord gap until
 * every interval's gap is at most xi. `seed` points inside (lo, hi) are kept.
 * Throws std::invalid_argument for xi <= 0 or lo > hi.
 */
std::vector<double> build_partition(const Curve& curve, double lo, double hi, double xi,
                                    const std::vector<double>& seed = {});

enum class Direction { kPlus = 0, kMinus = 1 };

/** Breakpoints for every (link, step, direction). Pumps only have kPlus. */
class Partition {
 public:
  double xi() const { return xi_; }
  void set_xi(double xi) { xi_ = xi; }
  bool has(int link, int k, Direction d) const;
  const std::vector<double>& at(int link, int k, Direction d) const;
  void set(int link, int k, Direction d, std::vector<double> points);
  size_t size() const { return points_.size(); }
  const std::map<std::tuple<int, int, int>, std::vector<double>>& entries() const {
    return points_;
  }

 private:
  double xi_ = 1.0;
  std::map<std::tuple<int, int, int>, std::vector<double>> points_;
};

/**
 * Partitions over the directed bounds of every pipe and pump at every step of
 * `bounds`. When `previous` is given, its breakpoints inside the new
 * intervals are retained so that refinements stay nested.
 */
Partition build_partitions(const Instance& instance, const BoundsStore& bounds, double xi,
                           const Partition* previous = nullptr);

}  // namespace owf
