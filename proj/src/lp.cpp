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

#include "owf/lp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace owf {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kTimeLimit: return "time-limit";
    case LpStatus::kIterationLimit: return "iteration-limit";
    case LpStatus::kNumerical: return "numerical";
  }
  return "?";
}

LpProblem LpProblem::from_model(const MilpModel& model) {
  LpProblem p;
  for (const Variable& v : model.vars()) {
    p.lb.push_back(v.lb);
    p.ub.push_back(v.ub);
  }
  p.cost = model.objective();
  p.cost_constant = model.objective_constant();
  p.rows = model.rows();
  return p;
}

double lp_violation(const LpProblem& p, const std::vector<double>& x) {
  double worst = 0.0;
  for (int j = 0; j < p.num_cols(); ++j) {
    worst = std::max({worst, p.lb[j] - x[j], x[j] - p.ub[j]});
  }
  for (const Row& r : p.rows) {
    double a = 0.0;
    for (auto [j, c] : r.terms) a += c * x[j];
    worst = std::max({worst, r.lo - a, a - r.hi});
  }
  return worst;
}

namespace {

enum class State : std::uint8_t { kBasic, kLower, kUpper, kZero };

double pow2_round(double s) {
  if (!std::isfinite(s) || s <= 0.0) return 1.0;
  return std::exp2(std::round(std::log2(s)));
}

class Simplex final : public LpEngine {
 public:
  void load(const LpProblem& p) override;
  void set_bounds(int col, double lb, double ub) override;
  void set_objective(const std::vector<double>& cost, double constant) override;
  void add_row(const Row& row) override;
  LpSolution solve(const LpOptions& opt) override;

 private:
  int total() const { return n_ + m_; }
  void place_nonbasic(int j);
  bool refactor();
  void compute_basics();
  void ftran(int j, std::vector<double>& alpha) const;
  void pivot(int r, const std::vector<double>& alpha);
  double row_dot(const std::vector<double>& pi, int j) const;
  LpSolution finish(LpStatus status, int iterations);
  /** Largest row or bound violation of the current point in original units. */
  double residual() const;

  int n_ = 0;
  int m_ = 0;
  std::vector<std::vector<std::pair<int, double>>> cols_;  // scaled structural columns
  std::vector<double> col_scale_, row_scale_;
  std::vector<double> lo_, up_, cost_;  // scaled, structurals then slacks
  double cost_constant_ = 0.0;
  std::vector<double> orig_lb_, orig_ub_, orig_cost_;

  std::vector<State> state_;
  std::vector<double> x_;
  std::vector<int> basis_;      // position -> variable
  std::vector<int> where_;      // variable -> position, -1 when nonbasic
  std::vector<double> binv_;    // dense basis inverse, row-major m x m
  bool factored_ = false;
  bool stale_ = false;
  int since_refactor_ = 0;
  std::vector<int> pivot_nz_;  // scratch for pivot()
  std::vector<double> scratch_a_, scratch_inv_;  // scratch for refactor()
};

void Simplex::load(const LpProblem& p) {
  n_ = p.num_cols();
  m_ = static_cast<int>(p.rows.size());
  orig_lb_ = p.lb;
  orig_ub_ = p.ub;
  orig_cost_ = p.cost;
  cost_constant_ = p.cost_constant;

  // Geometric scaling, rounded to powers of two.
  col_scale_.assign(n_, 1.0);
  row_scale_.assign(m_, 1.0);
  std::vector<double> cmax(n_), cmin(n_);
  for (int pass = 0; pass < 6; ++pass) {
    for (int i = 0; i < m_; ++i) {
      double mx = 0.0, mn = kInf;
      for (auto [j, c] : p.rows[i].terms) {
        const double a = std::abs(c) * col_scale_[j];
        mx = std::max(mx, a);
        mn = std::min(mn, a);
      }
      row_scale_[i] = mx > 0.0 ? 1.0 / std::sqrt(mx * mn) : 1.0;
    }
    std::fill(cmax.begin(), cmax.end(), 0.0);
    std::fill(cmin.begin(), cmin.end(), kInf);
    for (int i = 0; i < m_; ++i) {
      for (auto [j, c] : p.rows[i].terms) {
        const double a = std::abs(c) * row_scale_[i];
        cmax[j] = std::max(cmax[j], a);
        cmin[j] = std::min(cmin[j], a);
      }
    }
    for (int j = 0; j < n_; ++j) col_scale_[j] = cmax[j] > 0.0 ? 1.0 / std::sqrt(cmax[j] * cmin[j]) : 1.0;
  }
  for (double& s : row_scale_) s = pow2_round(s);
  for (double& s : col_scale_) s = pow2_round(s);

  cols_.assign(n_, {});
  lo_.assign(n_ + m_, 0.0);
  up_.assign(n_ + m_, 0.0);
  cost_.assign(n_ + m_, 0.0);
  for (int i = 0; i < m_; ++i) {
    for (auto [j, c] : p.rows[i].terms) {
      if (c != 0.0) cols_[j].emplace_back(i, c * row_scale_[i] * col_scale_[j]);
    }
    lo_[n_ + i] = p.rows[i].lo * row_scale_[i];
    up_[n_ + i] = p.rows[i].hi * row_scale_[i];
  }
  for (int j = 0; j < n_; ++j) {
    lo_[j] = p.lb[j] / col_scale_[j];
    up_[j] = p.ub[j] / col_scale_[j];
    cost_[j] = p.cost[j] * col_scale_[j];
  }

  state_.assign(n_ + m_, State::kLower);
  x_.assign(n_ + m_, 0.0);
  basis_.resize(m_);
  where_.assign(n_ + m_, -1);
  for (int j = 0; j < n_; ++j) place_nonbasic(j);
  for (int i = 0; i < m_; ++i) {
    basis_[i] = n_ + i;
    where_[n_ + i] = i;
    state_[n_ + i] = State::kBasic;
  }
  factored_ = false;
}

void Simplex::place_nonbasic(int j) {
  const bool lo_ok = std::isfinite(lo_[j]);
  const bool up_ok = std::isfinite(up_[j]);
  State s = state_[j];
  if (s == State::kBasic) s = State::kLower;
  if (s == State::kLower && !lo_ok) s = up_ok ? State::kUpper : State::kZero;
  if (s == State::kUpper && !up_ok) s = lo_ok ? State::kLower : State::kZero;
  if (s == State::kZero && lo_ok) s = State::kLower;
  if (s == State::kZero && up_ok) s = State::kUpper;
  state_[j] = s;
  x_[j] = s == State::kLower ? lo_[j] : s == State::kUpper ? up_[j] : 0.0;
}

void Simplex::set_bounds(int col, double lb, double ub) {
  orig_lb_[col] = lb;
  orig_ub_[col] = ub;
  lo_[col] = lb / col_scale_[col];
  up_[col] = ub / col_scale_[col];
  if (state_[col] != State::kBasic) {
    place_nonbasic(col);
    stale_ = true;  // basics must be recomputed
  }
}

void Simplex::set_objective(const std::vector<double>& cost, double constant) {
  orig_cost_ = cost;
  cost_constant_ = constant;
  for (int j = 0; j < n_; ++j) cost_[j] = cost[j] * col_scale_[j];
}

void Simplex::add_row(const Row& row) {
  double mx = 0.0, mn = kInf;
  for (auto [j, c] : row.terms) {
    const double a = std::abs(c) * col_scale_[j];
    mx = std::max(mx, a);
    mn = std::min(mn, a);
  }
  const double rs = pow2_round(mx > 0.0 ? 1.0 / std::sqrt(mx * mn) : 1.0);
  const int i = m_;
  row_scale_.push_back(rs);
  for (auto [j, c] : row.terms) {
    if (c != 0.0) cols_[j].emplace_back(i, c * rs * col_scale_[j]);
  }
  lo_.push_back(row.lo * rs);
  up_.push_back(row.hi * rs);
  cost_.push_back(0.0);
  state_.push_back(State::kBasic);
  x_.push_back(0.0);
  where_.push_back(m_);
  basis_.push_back(n_ + m_);
  ++m_;
  factored_ = false;
}

bool Simplex::refactor() {
  const int m = m_;
  for (int attempt = 0; attempt < 3; ++attempt) {
    std::vector<double>& a = scratch_a_;
    a.assign(static_cast<size_t>(m) * m, 0.0);
    for (int p = 0; p < m; ++p) {
      const int j = basis_[p];
      if (j < n_) {
        for (auto [i, v] : cols_[j]) a[static_cast<size_t>(i) * m + p] = v;
      } else {
        a[static_cast<size_t>(j - n_) * m + p] = -1.0;
      }
    }
    std::vector<double>& inv = scratch_inv_;
    inv.assign(static_cast<size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) inv[static_cast<size_t>(i) * m + i] = 1.0;
    std::vector<int> pivot_row(m, -1);
    std::vector<char> used(m, 0);
    std::vector<int> failed;
    // Slack columns first: they pivot without fill, which keeps the
    // elimination below sparse.
    std::vector<int> order;
    order.reserve(m);
    for (int p = 0; p < m; ++p) {
      if (basis_[p] >= n_) order.push_back(p);
    }
    for (int p = 0; p < m; ++p) {
      if (basis_[p] < n_) order.push_back(p);
    }
    std::vector<int> nz_a, nz_inv;
    for (int c : order) {
      int best = -1;
      double bv = 1e-11;
      if (basis_[c] >= n_) {
        // A slack column has its only entry in its own row.
        const int i = basis_[c] - n_;
        if (!used[i]) best = i;
      }
      for (int i = 0; best < 0 && i < m; ++i) {
        if (used[i]) continue;
        const double v = std::abs(a[static_cast<size_t>(i) * m + c]);
        if (v > bv) {
          bv = v;
          best = i;
        }
      }
      if (best < 0) {
        failed.push_back(c);
        continue;
      }
      used[best] = 1;
      pivot_row[c] = best;
      double* prow = &a[static_cast<size_t>(best) * m];
      double* pinv = &inv[static_cast<size_t>(best) * m];
      const double d = prow[c];
      nz_a.clear();
      nz_inv.clear();
      for (int k = 0; k < m; ++k) {
        if (prow[k] != 0.0) {
          prow[k] /= d;
          nz_a.push_back(k);
        }
        if (pinv[k] != 0.0) {
          pinv[k] /= d;
          nz_inv.push_back(k);
        }
      }
      for (int i = 0; i < m; ++i) {
        if (i == best) continue;
        double* row = &a[static_cast<size_t>(i) * m];
        const double f = row[c];
        if (f == 0.0) continue;
        double* rinv = &inv[static_cast<size_t>(i) * m];
        for (int k : nz_a) row[k] -= f * prow[k];
        row[c] = 0.0;
        for (int k : nz_inv) rinv[k] -= f * pinv[k];
      }
    }
    if (failed.empty()) {
      binv_.resize(static_cast<size_t>(m) * m);
      for (int c = 0; c < m; ++c) {
        std::copy_n(&inv[static_cast<size_t>(pivot_row[c]) * m], m,
                    &binv_[static_cast<size_t>(c) * m]);
      }
      factored_ = true;
      since_refactor_ = 0;
      return true;
    }
    // Swap dependent columns for slacks of uncovered rows.
    std::vector<int> free_slacks;
    for (int i = 0; i < m; ++i) {
      if (!used[i] && where_[n_ + i] < 0) free_slacks.push_back(n_ + i);
    }
    if (free_slacks.size() < failed.size()) {
      // Fall back to the all-slack basis, which is always regular.
      for (int j = 0; j < total(); ++j) {
        if (where_[j] >= 0 && j < n_) {
          where_[j] = -1;
          state_[j] = State::kLower;
          place_nonbasic(j);
        }
      }
      for (int i = 0; i < m; ++i) {
        basis_[i] = n_ + i;
        where_[n_ + i] = i;
        state_[n_ + i] = State::kBasic;
      }
      continue;
    }
    for (size_t f = 0; f < failed.size(); ++f) {
      const int p = failed[f];
      const int old = basis_[p];
      const int slack = free_slacks[f];
      where_[old] = -1;
      state_[old] = State::kLower;
      place_nonbasic(old);
      basis_[p] = slack;
      where_[slack] = p;
      state_[slack] = State::kBasic;
    }
  }
  return false;
}

void Simplex::compute_basics() {
  const int m = m_;
  std::vector<double> rhs(m, 0.0);
  for (int j = 0; j < n_; ++j) {
    if (state_[j] == State::kBasic || x_[j] == 0.0) continue;
    for (auto [i, v] : cols_[j]) rhs[i] -= v * x_[j];
  }
  for (int i = 0; i < m; ++i) {
    const int j = n_ + i;
    if (state_[j] != State::kBasic) rhs[i] += x_[j];
  }
  for (int r = 0; r < m; ++r) {
    const double* row = &binv_[static_cast<size_t>(r) * m];
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += row[i] * rhs[i];
    x_[basis_[r]] = s;
  }
}

void Simplex::ftran(int j, std::vector<double>& alpha) const {
  const int m = m_;
  alpha.assign(m, 0.0);
  if (j < n_) {
    for (auto [i, v] : cols_[j]) {
      for (int r = 0; r < m; ++r) alpha[r] += binv_[static_cast<size_t>(r) * m + i] * v;
    }
  } else {
    const int i = j - n_;
    for (int r = 0; r < m; ++r) alpha[r] = -binv_[static_cast<size_t>(r) * m + i];
  }
}

double Simplex::row_dot(const std::vector<double>& pi, int j) const {
  if (j >= n_) return -pi[j - n_];
  double s = 0.0;
  for (auto [i, v] : cols_[j]) s += pi[i] * v;
  return s;
}

void Simplex::pivot(int r, const std::vector<double>& alpha) {
  const int m = m_;
  double* prow = &binv_[static_cast<size_t>(r) * m];
  const double d = alpha[r];
  std::vector<int>& nz = pivot_nz_;
  nz.clear();
  for (int k = 0; k < m; ++k) {
    if (prow[k] != 0.0) {
      prow[k] /= d;
      nz.push_back(k);
    }
  }
  for (int i = 0; i < m; ++i) {
    if (i == r || alpha[i] == 0.0) continue;
    double* row = &binv_[static_cast<size_t>(i) * m];
    const double f = alpha[i];
    for (int k : nz) row[k] -= f * prow[k];
  }
  ++since_refactor_;
}

double Simplex::residual() const {
  std::vector<double> act(m_, 0.0);
  double worst = 0.0;
  for (int j = 0; j < n_; ++j) {
    for (auto [i, v] : cols_[j]) act[i] += v * x_[j];
    const double cs = col_scale_[j];
    worst = std::max({worst, (lo_[j] - x_[j]) * cs, (x_[j] - up_[j]) * cs});
  }
  for (int i = 0; i < m_; ++i) {
    const double rs = row_scale_[i];
    worst = std::max({worst, (lo_[n_ + i] - act[i]) / rs, (act[i] - up_[n_ + i]) / rs});
  }
  return worst;
}

LpSolution Simplex::finish(LpStatus status, int iterations) {
  LpSolution sol;
  sol.status = status;
  sol.iterations = iterations;
  if (status == LpStatus::kInfeasible) {
    sol.dual_bound = kInf;
    return sol;
  }
  if (status != LpStatus::kOptimal) return sol;
  sol.x.resize(n_);
  double obj = cost_constant_;
  for (int j = 0; j < n_; ++j) {
    sol.x[j] = std::clamp(x_[j] * col_scale_[j], orig_lb_[j], orig_ub_[j]);
    obj += orig_cost_[j] * sol.x[j];
  }
  sol.objective = obj;
  sol.dual_bound = obj;
  return sol;
}

LpSolution Simplex::solve(const LpOptions& opt) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const double ftol = opt.feasibility_tol;
  // Feasibility is judged in original units: scale the tolerance per variable.
  std::vector<double> tol(total());
  for (int j = 0; j < n_; ++j) tol[j] = std::max(ftol / col_scale_[j], 1e-13);
  for (int i = 0; i < m_; ++i) tol[n_ + i] = std::max(ftol * row_scale_[i], 1e-13);
  const double dtol = opt.optimality_tol;
  const double piv_tol = 1e-9;
  const int max_iter = opt.max_iterations > 0 ? opt.max_iterations : 50 * (n_ + m_) + 10000;

  for (int j = 0; j < n_; ++j) {
    if (orig_lb_[j] > orig_ub_[j] + ftol) return finish(LpStatus::kInfeasible, 0);
  }
  if (m_ == 0) {
    // Pure box problem: each variable sits at its cheaper bound.
    for (int j = 0; j < n_; ++j) {
      if (cost_[j] > 0.0) {
        if (!std::isfinite(lo_[j])) return finish(LpStatus::kUnbounded, 0);
        x_[j] = lo_[j];
      } else if (cost_[j] < 0.0) {
        if (!std::isfinite(up_[j])) return finish(LpStatus::kUnbounded, 0);
        x_[j] = up_[j];
      } else {
        place_nonbasic(j);
      }
    }
    return finish(LpStatus::kOptimal, 0);
  }

  if (!factored_) {
    if (!refactor()) return finish(LpStatus::kNumerical, 0);
    compute_basics();
  } else if (stale_) {
    compute_basics();
  }
  stale_ = false;

  std::vector<double> cb(m_), pi(m_), alpha(m_);
  int degenerate = 0;
  bool verified = false;
  int refactor_failures = 0;
  for (int iter = 0; iter < max_iter; ++iter) {
    if (opt.time_limit > 0.0 && (iter & 15) == 0) {
      const double el = std::chrono::duration<double>(Clock::now() - start).count();
      if (el > opt.time_limit) return finish(LpStatus::kTimeLimit, iter);
    }
    if (since_refactor_ >= 100) {
      if (!refactor()) return finish(LpStatus::kNumerical, iter);
      compute_basics();
    }

    // Phase from the current basic values.
    bool phase1 = false;
    for (int r = 0; r < m_; ++r) {
      const int b = basis_[r];
      if (x_[b] < lo_[b] - tol[b]) {
        cb[r] = -1.0;
        phase1 = true;
      } else if (x_[b] > up_[b] + tol[b]) {
        cb[r] = 1.0;
        phase1 = true;
      } else {
        cb[r] = 0.0;
      }
    }
    if (!phase1) {
      for (int r = 0; r < m_; ++r) cb[r] = cost_[basis_[r]];
    }
    std::fill(pi.begin(), pi.end(), 0.0);
    for (int r = 0; r < m_; ++r) {
      if (cb[r] == 0.0) continue;
      const double* row = &binv_[static_cast<size_t>(r) * m_];
      for (int i = 0; i < m_; ++i) pi[i] += cb[r] * row[i];
    }

    // Pricing: Dantzig, or Bland's rule while stalling.
    const bool bland = degenerate > 50;
    int enter = -1;
    double enter_d = 0.0;
    double best = 0.0;
    for (int j = 0; j < total(); ++j) {
      const State s = state_[j];
      if (s == State::kBasic) continue;
      if (lo_[j] == up_[j]) continue;
      const double c = phase1 ? 0.0 : cost_[j];
      const double d = c - row_dot(pi, j);
      bool ok = false;
      if (s == State::kLower) ok = d < -dtol;
      else if (s == State::kUpper) ok = d > dtol;
      else ok = std::abs(d) > dtol;
      if (!ok) continue;
      if (bland) {
        enter = j;
        enter_d = d;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        enter = j;
        enter_d = d;
      }
    }

    if (enter < 0) {
      // Confirm on a fresh factorisation before declaring the outcome.
      if (!verified && since_refactor_ > 0) {
        if (!refactor()) return finish(LpStatus::kNumerical, iter);
        compute_basics();
        verified = true;
        continue;
      }
      if (!phase1 && residual() > 1e-6) return finish(LpStatus::kNumerical, iter);
      return finish(phase1 ? LpStatus::kInfeasible : LpStatus::kOptimal, iter);
    }
    verified = false;

    const double dir = enter_d < 0.0 ? 1.0 : -1.0;
    ftran(enter, alpha);

    // Harris two-pass ratio test.
    double tmax = kInf;
    for (int r = 0; r < m_; ++r) {
      const double a = alpha[r];
      if (std::abs(a) < piv_tol) continue;
      const double delta = -dir * a;
      const int b = basis_[r];
      const double x = x_[b];
      double t = kInf;
      if (phase1 && x < lo_[b] - tol[b]) {
        if (delta > 0.0) t = (lo_[b] - x) / delta;
      } else if (phase1 && x > up_[b] + tol[b]) {
        if (delta < 0.0) t = (x - up_[b]) / -delta;
      } else if (delta < 0.0) {
        if (std::isfinite(lo_[b])) t = (x - lo_[b] + tol[b]) / -delta;
      } else {
        if (std::isfinite(up_[b])) t = (up_[b] + tol[b] - x) / delta;
      }
      tmax = std::min(tmax, t);
    }
    int leave = -1;
    double step = kInf;
    double best_a = 0.0;
    bool leave_at_upper = false;
    if (std::isfinite(tmax)) {
      for (int r = 0; r < m_; ++r) {
        const double a = alpha[r];
        if (std::abs(a) < piv_tol) continue;
        const double delta = -dir * a;
        const int b = basis_[r];
        const double x = x_[b];
        double t = kInf;
        bool upper = false;
        if (phase1 && x < lo_[b] - tol[b]) {
          if (delta > 0.0) t = (lo_[b] - x) / delta;
        } else if (phase1 && x > up_[b] + tol[b]) {
          if (delta < 0.0) {
            t = (x - up_[b]) / -delta;
            upper = true;
          }
        } else if (delta < 0.0) {
          if (std::isfinite(lo_[b])) t = (x - lo_[b]) / -delta;
        } else {
          if (std::isfinite(up_[b])) {
            t = (up_[b] - x) / delta;
            upper = true;
          }
        }
        if (t <= tmax && std::abs(a) > best_a) {
          best_a = std::abs(a);
          leave = r;
          step = std::max(0.0, t);
          leave_at_upper = upper;
        }
      }
    }

    const double range = up_[enter] - lo_[enter];
    if (std::isfinite(range) && range <= step) {
      // Bound flip of the entering variable.
      for (int r = 0; r < m_; ++r) x_[basis_[r]] -= dir * alpha[r] * range;
      if (state_[enter] == State::kLower) {
        state_[enter] = State::kUpper;
        x_[enter] = up_[enter];
      } else {
        state_[enter] = State::kLower;
        x_[enter] = lo_[enter];
      }
      degenerate = 0;
      continue;
    }
    if (leave < 0) {
      if (!phase1) return finish(LpStatus::kUnbounded, iter);
      if (++refactor_failures > 5 || !refactor()) return finish(LpStatus::kNumerical, iter);
      compute_basics();
      continue;
    }

    degenerate = step <= 1e-12 ? degenerate + 1 : 0;
    for (int r = 0; r < m_; ++r) x_[basis_[r]] -= dir * alpha[r] * step;
    x_[enter] += dir * step;
    const int out = basis_[leave];
    state_[out] = leave_at_upper ? State::kUpper : State::kLower;
    x_[out] = leave_at_upper ? up_[out] : lo_[out];
    where_[out] = -1;
    basis_[leave] = enter;
    where_[enter] = leave;
    state_[enter] = State::kBasic;
    pivot(leave, alpha);
    if (std::abs(alpha[leave]) < 1e-7) {
      if (!refactor()) return finish(LpStatus::kNumerical, iter);
      compute_basics();
    }
  }
  return finish(LpStatus::kIterationLimit, max_iter);
}

}  // namespace

std::unique_ptr<LpEngine> make_simplex_engine() { return std::make_unique<Simplex>(); }

LpSolution solve_lp(const LpProblem& problem, const LpOptions& options) {
  Simplex s;
  s.load(problem);
  return s.solve(options);
}

LpSolution solve_lp(const MilpModel& model, const LpOptions& options) {
  return solve_lp(LpProblem::from_model(model), options);
}

}  // namespace owf
