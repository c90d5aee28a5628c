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

#include "owf/milp_model.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "owf/network.hpp"

namespace owf {

const char* to_string(VarKind kind) {
  switch (kind) {
    case VarKind::kHead: return "h";
    case VarKind::kNodeFlow: return "qn";
    case VarKind::kVolume: return "v";
    case VarKind::kFlow: return "q";
    case VarKind::kFlowPlus: return "qp";
    case VarKind::kFlowMinus: return "qm";
    case VarKind::kDirection: return "y";
    case VarKind::kStatus: return "z";
    case VarKind::kGain: return "g";
    case VarKind::kDeltaPlus: return "dhp";
    case VarKind::kDeltaMinus: return "dhm";
    case VarKind::kSwitchOn: return "zon";
    case VarKind::kSwitchOff: return "zoff";
    case VarKind::kLambdaPlus: return "lp";
    case VarKind::kLambdaMinus: return "lm";
    case VarKind::kIntervalPlus: return "xp";
    case VarKind::kIntervalMinus: return "xm";
    case VarKind::kMcCormick: return "w";
    case VarKind::kPhiPlus: return "phip";
    case VarKind::kPhiMinus: return "phim";
    case VarKind::kPsi: return "psi";
  }
  return "?";
}

int MilpModel::add_var(const VarKey& key, double lb, double ub, bool integer) {
  if (index_.count(key)) {
    throw std::invalid_argument(std::string("duplicate variable ") + to_string(key.kind));
  }
  if (!(lb <= ub)) {
    std::ostringstream os;
    os << "variable " << to_string(key.kind) << " entity " << key.entity << " step " << key.k
       << " has lb " << lb << " > ub " << ub;
    throw std::invalid_argument(os.str());
  }
  const int id = num_vars();
  vars_.push_back({key, lb, ub, integer, 0});
  index_[key] = id;
  objective_.push_back(0.0);
  return id;
}

int MilpModel::find(const VarKey& key) const {
  auto it = index_.find(key);
  return it == index_.end() ? -1 : it->second;
}

int MilpModel::at(const VarKey& key) const {
  const int id = find(key);
  if (id < 0) {
    std::ostringstream os;
    os << "unregistered variable " << to_string(key.kind) << " entity " << key.entity << " step "
       << key.k << " p " << key.p;
    throw std::out_of_range(os.str());
  }
  return id;
}

int MilpModel::add_constraint(const LinearExpr& expr, Sense sense, double rhs,
                              const std::string& tag) {
  const double r = rhs - expr.constant;
  switch (sense) {
    case Sense::kLe: return add_range(LinearExpr{expr.terms, 0.0}, -kInf, r, tag);
    case Sense::kGe: return add_range(LinearExpr{expr.terms, 0.0}, r, kInf, tag);
    case Sense::kEq: return add_range(LinearExpr{expr.terms, 0.0}, r, r, tag);
  }
  return -1;
}

int MilpModel::add_range(const LinearExpr& expr, double lo, double hi, const std::string& tag) {
  Row row;
  // Merge duplicate references.
  std::map<int, double> merged;
  for (auto [v, c] : expr.terms) {
    if (v < 0 || v >= num_vars()) throw std::out_of_range("row references unknown variable");
    merged[v] += c;
  }
  for (auto [v, c] : merged) {
    if (c != 0.0) row.terms.emplace_back(v, c);
  }
  row.lo = lo - expr.constant;
  row.hi = hi - expr.constant;
  row.tag = tag;
  rows_.push_back(std::move(row));
  return num_rows() - 1;
}

void MilpModel::tighten(int id, double lb, double ub) {
  Variable& v = vars_.at(id);
  v.lb = std::max(v.lb, lb);
  v.ub = std::min(v.ub, ub);
}

std::string MilpModel::name(int id, const Instance* instance) const {
  const VarKey& key = vars_.at(id).key;
  std::ostringstream os;
  os << to_string(key.kind) << "_";
  bool node_kind = key.kind == VarKind::kHead || key.kind == VarKind::kNodeFlow ||
                   key.kind == VarKind::kVolume || key.kind == VarKind::kMcCormick;
  if (instance) {
    os << (node_kind ? instance->nodes.at(key.entity).id : instance->links.at(key.entity).id);
  } else {
    os << (node_kind ? "n" : "l") << key.entity;
  }
  os << "_" << key.k + 1;
  if (key.p >= 0) os << "_" << key.p + 1;
  return os.str();
}

double MilpModel::max_violation(const std::vector<double>& x, std::string* worst) const {
  double viol = 0.0;
  auto note = [&](double v, const std::string& what) {
    if (v > viol) {
      viol = v;
      if (worst) *worst = what;
    }
  };
  for (int j = 0; j < num_vars(); ++j) {
    note(vars_[j].lb - x[j], "lower bound of " + name(j));
    note(x[j] - vars_[j].ub, "upper bound of " + name(j));
  }
  for (int r = 0; r < num_rows(); ++r) {
    double a = 0.0;
    for (auto [v, c] : rows_[r].terms) a += c * x[v];
    note(rows_[r].lo - a, "row " + std::to_string(r) + " (" + rows_[r].tag + ")");
    note(a - rows_[r].hi, "row " + std::to_string(r) + " (" + rows_[r].tag + ")");
  }
  return viol;
}

double MilpModel::evaluate_objective(const std::vector<double>& x) const {
  double f = objective_constant_;
  for (int j = 0; j < num_vars(); ++j) f += objective_[j] * x[j];
  return f;
}

namespace {

void write_terms(std::ostringstream& os, const std::vector<std::pair<int, double>>& terms,
                 const MilpModel& model, const Instance* instance) {
  if (terms.empty()) {
    os << " 0 " << model.name(0, instance);
    return;
  }
  for (auto [v, c] : terms) {
    os << (c < 0 ? " - " : " + ") << std::abs(c) << " " << model.name(v, instance);
  }
}

}  // namespace

std::string export_lp(const MilpModel& model, const Instance* instance) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "\\ owfkit model: " << model.num_vars() << " variables, " << model.num_rows()
     << " rows\nMinimize\n obj:";
  std::vector<std::pair<int, double>> obj;
  for (int j = 0; j < model.num_vars(); ++j) {
    if (model.objective()[j] != 0.0) obj.emplace_back(j, model.objective()[j]);
  }
  if (obj.empty() && model.num_vars() > 0) obj.emplace_back(0, 0.0);
  write_terms(os, obj, model, instance);
  if (model.objective_constant() != 0.0) os << " + " << model.objective_constant() << " constant";
  os << "\nSubject To\n";
  std::string last_tag;
  for (int r = 0; r < model.num_rows(); ++r) {
    const Row& row = model.row(r);
    if (row.tag != last_tag) {
      os << "\\ " << row.tag << "\n";
      last_tag = row.tag;
    }
    if (std::isfinite(row.lo) && std::isfinite(row.hi) && row.lo == row.hi) {
      os << " c" << r << ":";
      write_terms(os, row.terms, model, instance);
      os << " = " << row.lo << "\n";
      continue;
    }
    if (std::isfinite(row.lo)) {
      os << " c" << r << (std::isfinite(row.hi) ? "_lo" : "") << ":";
      write_terms(os, row.terms, model, instance);
      os << " >= " << row.lo << "\n";
    }
    if (std::isfinite(row.hi)) {
      os << " c" << r << (std::isfinite(row.lo) ? "_hi" : "") << ":";
      write_terms(os, row.terms, model, instance);
      os << " <= " << row.hi << "\n";
    }
  }
  os << "Bounds\n";
  for (int j = 0; j < model.num_vars(); ++j) {
    const Variable& v = model.var(j);
    const std::string n = model.name(j, instance);
    if (v.lb == v.ub) {
      os << " " << n << " = " << v.lb << "\n";
      continue;
    }
    os << " " << (std::isfinite(v.lb) ? (std::ostringstream() << std::setprecision(17) << v.lb).str()
                                      : std::string("-inf"))
       << " <= " << n << " <= "
       << (std::isfinite(v.ub) ? (std::ostringstream() << std::setprecision(17) << v.ub).str()
                               : std::string("+inf"))
       << "\n";
  }
  bool any_int = false;
  for (int j = 0; j < model.num_vars(); ++j) any_int |= model.var(j).integer;
  if (any_int) {
    os << "General\n";
    for (int j = 0; j < model.num_vars(); ++j) {
      if (model.var(j).integer) os << " " << model.name(j, instance) << "\n";
    }
  }
  os << "End\n";
  return os.str();
}

}  // namespace owf
