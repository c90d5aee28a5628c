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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "owf/branch_and_bound.hpp"

namespace owf {
namespace {

/** max sum v x s.t. sum w x <= cap over binaries, as a minimisation. */
MilpModel knapsack(const std::vector<double>& value, const std::vector<double>& weight,
                   double cap) {
  MilpModel m;
  LinearExpr e;
  for (size_t i = 0; i < value.size(); ++i) {
    const int x = m.add_var({VarKind::kStatus, static_cast<int>(i), 0}, 0.0, 1.0, true);
    m.set_objective(x, -value[i]);
    e.add(x, weight[i]);
  }
  m.add_constraint(e, Sense::kLe, cap, "capacity");
  return m;
}

double enumerate(const std::vector<double>& value, const std::vector<double>& weight, double cap) {
  double best = 0.0;
  const int n = static_cast<int>(value.size());
  for (int code = 0; code < (1 << n); ++code) {
    double v = 0.0, w = 0.0;
    for (int i = 0; i < n; ++i) {
      if ((code >> i) & 1) {
        v += value[i];
        w += weight[i];
      }
    }
    if (w <= cap) best = std::max(best, v);
  }
  return -best;
}

TEST(BranchAndBound, ThreeItemKnapsack) {
  const std::vector<double> v{10, 13, 7}, w{5, 7, 4};
  const MipResult r = branch_and_bound(knapsack(v, w, 10.0));
  ASSERT_EQ(r.status, MipStatus::kOptimal);
  EXPECT_DOUBLE_EQ(r.objective, enumerate(v, w, 10.0));
  EXPECT_DOUBLE_EQ(r.objective, -17.0);
  EXPECT_GT(r.branchings, 0);
  EXPECT_NEAR(r.bound, r.objective, 1e-9);
}

TEST(BranchAndBound, RandomKnapsacksMatchEnumeration) {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(1.0, 10.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + trial % 8;
    std::vector<double> v(n), w(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      v[i] = std::round(u(rng) * 10.0);
      w[i] = std::round(u(rng) * 10.0);
      total += w[i];
    }
    const MipResult r = branch_and_bound(knapsack(v, w, std::round(total / 2.0)));
    ASSERT_EQ(r.status, MipStatus::kOptimal);
    EXPECT_NEAR(r.objective, enumerate(v, w, std::round(total / 2.0)), 1e-7) << trial;
    for (size_t i = 1; i < r.trace.size(); ++i) {
      EXPECT_GE(r.trace[i].first, r.trace[i - 1].first - 1e-9);
      EXPECT_LE(r.trace[i].second, r.trace[i - 1].second + 1e-9);
    }
  }
}

TEST(BranchAndBound, IntegralRootNeedsNoBranching) {
  MilpModel m;
  const int x = m.add_var({VarKind::kStatus, 0, 0}, 0.0, 1.0, true);
  const int y = m.add_var({VarKind::kStatus, 1, 0}, 0.0, 1.0, true);
  m.set_objective(x, 1.0);
  m.set_objective(y, -1.0);
  const MipResult r = branch_and_bound(m);
  ASSERT_EQ(r.status, MipStatus::kOptimal);
  EXPECT_EQ(r.branchings, 0);
  EXPECT_EQ(r.nodes, 1);
  EXPECT_DOUBLE_EQ(r.objective, -1.0);
}

TEST(BranchAndBound, RejectingEveryPointProvesInfeasibility) {
  MilpModel m;
  const int x = m.add_var({VarKind::kStatus, 0, 0}, 0.0, 1.0, true);
  m.set_objective(x, 1.0);
  int calls = 0;
  BbCallbacks cb;
  cb.lazy = [&](const std::vector<double>& pt, double) {
    ++calls;
    LazyResult out;
    out.accept = false;
    Row r;
    if (pt[x] > 0.5) {
      r.terms = {{x, 1.0}};
      r.hi = 0.0;
    } else {
      r.terms = {{x, 1.0}};
      r.lo = 1.0;
    }
    r.tag = "no-good";
    out.cuts.push_back(r);
    return out;
  };
  const MipResult r = branch_and_bound(m, cb);
  EXPECT_EQ(r.status, MipStatus::kInfeasible);
  EXPECT_EQ(calls, 2);
  EXPECT_EQ(r.lazy_cuts, 2);
  EXPECT_TRUE(std::isinf(r.objective));
}

TEST(BranchAndBound, CallbackIncumbentIsUsed) {
  const std::vector<double> v{10, 13, 7}, w{5, 7, 4};
  MilpModel m = knapsack(v, w, 10.0);
  BbCallbacks cb;
  cb.lazy = [](const std::vector<double>&, double lp) {
    LazyResult out;
    out.accept = false;
    out.has_incumbent = true;
    out.incumbent_value = lp + 1.0;  // a primal value worse than the point
    return out;
  };
  const MipResult r = branch_and_bound(m, cb);
  // Rejected points without cuts are pruned, so the search ends with the
  // best external value.
  EXPECT_TRUE(r.x.empty());
  EXPECT_NEAR(r.objective, -17.0 + 1.0, 1e-9);
}

TEST(BranchAndBound, HeuristicIncumbentPrunesTheTree) {
  const std::vector<double> v{12, 9, 14, 5, 8, 11}, w{6, 4, 8, 3, 5, 7};
  const double opt = enumerate(v, w, 15.0);
  const MipResult plain = branch_and_bound(knapsack(v, w, 15.0));
  int calls = 0;
  BbCallbacks cb;
  cb.heuristic = [&](const std::vector<double>& x) {
    ++calls;
    for (double xi : x) EXPECT_TRUE(xi >= -1e-9 && xi <= 1.0 + 1e-9);
    return opt;
  };
  const MipResult r = branch_and_bound(knapsack(v, w, 15.0), cb);
  ASSERT_EQ(r.status, MipStatus::kOptimal);
  EXPECT_GT(calls, 0);
  EXPECT_DOUBLE_EQ(r.objective, opt);
  EXPECT_TRUE(r.x.empty());
  EXPECT_LE(r.nodes, plain.nodes);
}

TEST(BranchAndBound, NodeLimitKeepsValidBounds) {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(1.0, 10.0);
  std::vector<double> v(14), w(14);
  double total = 0.0;
  for (int i = 0; i < 14; ++i) {
    v[i] = u(rng);
    w[i] = u(rng);
    total += w[i];
  }
  const double opt = enumerate(v, w, total / 3.0);
  BbLimits lim;
  lim.node_limit = 3;
  const MipResult r = branch_and_bound(knapsack(v, w, total / 3.0), {}, lim);
  EXPECT_EQ(r.status, MipStatus::kNodeLimit);
  EXPECT_LE(r.nodes, 3);
  EXPECT_LE(r.bound, opt + 1e-9);
  if (std::isfinite(r.objective)) EXPECT_GE(r.objective, opt - 1e-9);
}

TEST(BranchAndBound, RepeatedRunsAreIdentical) {
  const std::vector<double> v{12, 9, 14, 5, 8, 11}, w{6, 4, 8, 3, 5, 7};
  const MipResult a = branch_and_bound(knapsack(v, w, 15.0));
  const MipResult b = branch_and_bound(knapsack(v, w, 15.0));
  EXPECT_EQ(a.nodes, b.nodes);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.trace, b.trace);
}

TEST(BranchAndBound, UnboundedContinuousModel) {
  MilpModel m;
  const int x = m.add_var({VarKind::kHead, 0, 0}, 0.0, kInf);
  m.set_objective(x, -1.0);
  EXPECT_EQ(branch_and_bound(m).status, MipStatus::kUnbounded);
}

}  // namespace
}  // namespace owf
