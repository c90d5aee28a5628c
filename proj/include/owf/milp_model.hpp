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

#include <compare>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace owf {

struct Instance;

constexpr double kInf = std::numeric_limits<double>::infinity();

/** Semantic class of a model variable. */
enum class VarKind {
  kHead,          // h, node, time index
  kNodeFlow,      // q_i, node, step
  kVolume,        // v, tank, time index
  kFlow,          // q, link, step
  kFlowPlus,      // q+, link, step
  kFlowMinus,     // q-, link, step
  kDirection,     // y, link, step
  kStatus,        // z, link, step
  kGain,          // g, pump, step
  kDeltaPlus,     // dh+, pipe, step
  kDeltaMinus,    // dh-, pipe, step
  kSwitchOn,      // z_on, pump, step
  kSwitchOff,     // z_off, pump, step
  kLambdaPlus,    // convex multiplier, link, step, breakpoint
  kLambdaMinus,
  kIntervalPlus,  // interval binary, link, step, breakpoint
  kIntervalMinus,
  kMcCormick,     // w = q*h, tank, step
  kPhiPlus,       // epigraph of L r (q+)^(1+alpha), pipe, step
  kPhiMinus,
  kPsi,           // epigraph of -(a q + b q^(c+1)), pump, step
};

const char* to_string(VarKind kind);

/** Registry key. `p` is the breakpoint index for convex-combination variables. */
struct VarKey {
  VarKind kind = VarKind::kHead;
  int entity = 0;
  int k = 0;
  int p = -1;

  auto operator<=>(const VarKey&) const = default;
};

struct Variable {
  VarKey key;
  double lb = 0.0;
  double ub = 0.0;
  bool integer = false;
  int priority = 0;
};

enum class Sense { kLe, kGe, kEq };

/** Sparse row lo <= sum(coef * x) <= hi with a provenance tag. */
struct Row {
  std::vector<std::pair<int, double>> terms;
  double lo = -kInf;
  double hi = kInf;
  std::string tag;
};

/** Linear expression over variable ids plus a constant. */
struct LinearExpr {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  LinearExpr& add(int var, double coef) {
    if (coef != 0.0) terms.emplace_back(var, coef);
    return *this;
  }
  LinearExpr& add_constant(double c) {
    constant += c;
    return *this;
  }
};

class MilpModel {
 public:
  /** Adds a variable. Throws std::invalid_argument on a duplicate key or lb > ub. */
  int add_var(const VarKey& key, double lb, double ub, bool integer = false);
  /** Variable id for key or -1. */
  int find(const VarKey& key) const;
  /** Variable id for key; throws std::out_of_range when absent. */
  int at(const VarKey& key) const;
  bool has(const VarKey& key) const { return find(key) >= 0; }

  /** Adds expr (sense) rhs, folding the expression constant into the bounds. */
  int add_constraint(const LinearExpr& expr, Sense sense, double rhs, const std::string& tag);
  int add_range(const LinearExpr& expr, double lo, double hi, const std::string& tag);

  void set_objective(int var, double coef) { objective_.at(var) = coef; }
  void add_objective(int var, double coef) { objective_.at(var) += coef; }
  void set_objective_constant(double c) { objective_constant_ = c; }

  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const Variable& var(int id) const { return vars_[id]; }
  Variable& var(int id) { return vars_[id]; }
  const std::vector<Variable>& vars() const { return vars_; }
  const Row& row(int id) const { return rows_[id]; }
  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<double>& objective() const { return objective_; }
  double objective_constant() const { return objective_constant_; }

  /** Tightens a variable's bounds by intersection. */
  void tighten(int id, double lb, double ub);

  /** Human-readable registry name, e.g. "qp_p1_3". */
  std::string name(int id, const Instance* instance = nullptr) const;

  /** Max violation of rows and bounds at x. */
  double max_violation(const std::vector<double>& x, std::string* worst = nullptr) const;
  double evaluate_objective(const std::vector<double>& x) const;

 private:
  std::vector<Variable> vars_;
  std::map<VarKey, int> index_;
  std::vector<Row> rows_;
  std::vector<double> objective_;
  double objective_constant_ = 0.0;
};

/** LP-format text with registry names and provenance comments. */
std::string export_lp(const MilpModel& model, const Instance* instance = nullptr);

}  // namespace owf
