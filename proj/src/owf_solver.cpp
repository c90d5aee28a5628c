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

#include "owf/owf_solver.hpp"

#include <chrono>
#include <cmath>

#include "owf/relaxation.hpp"

namespace owf {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::kConverged: return "converged";
    case Termination::kTimeLimit: return "time-limit";
    case Termination::kNodeLimit: return "node-limit";
    case Termination::kGapLimit: return "gap-limit";
    case Termination::kInfeasibleCertified: return "infeasible-certified";
    case Termination::kNumerical: return "numerical";
  }
  return "?";
}

Schedule extract_schedule(const MilpModel& m, const Instance& inst, const std::vector<double>& x) {
  Schedule s = uniform_schedule(inst, 0);
  for (int k = 0; k < inst.num_steps(); ++k) {
    for (int l : inst.controls()) {
      const int id = m.find({VarKind::kStatus, l, k, -1});
      s.steps[k][l] = id >= 0 && x[id] > 0.5 ? 1 : 0;
    }
  }
  return s;
}

double gap(double lb, double ub, bool* absolute) {
  if (absolute) *absolute = false;
  if (ub == 0.0) {
    if (lb == 0.0) return 0.0;
    if (absolute) *absolute = true;
    return std::max(0.0, ub - lb);
  }
  return std::max(0.0, (ub - lb) / std::abs(ub));
}

double improvement(double f1, double f2) { return 100.0 * (f2 - f1) / f1; }

double root_bound(const Instance& inst, const BoundsStore& bounds, const RelaxationOptions& opt,
                  const CutSet* cuts, const Partition* partition) {
  const Partition part = partition ? *partition : build_partitions(inst, bounds, opt.xi);
  const MilpModel m = build_relaxation(inst, bounds, part, opt, ModelScope::full(inst), cuts);
  const LpSolution sol = solve_lp(m);
  if (sol.status == LpStatus::kInfeasible) return kInf;
  if (sol.status != LpStatus::kOptimal) return -kInf;
  return sol.objective;
}

OwfResult solve_owf(const Instance& inst, const SolveOptions& options, const BoundsStore& bounds,
                    const CutSet* cuts) {
  const auto start = std::chrono::steady_clock::now();
  OwfResult out;
  const Partition part = build_partitions(inst, bounds, options.relaxation.xi);
  const MilpModel model =
      build_relaxation(inst, bounds, part, options.relaxation, ModelScope::full(inst), cuts);

  auto to_row = [&](const Cut& cut) {
    Row r;
    double rhs = cut.rhs;
    for (const auto& [key, coef] : cut.terms) r.terms.emplace_back(model.at(key), coef);
    if (cut.sense != Sense::kLe) r.lo = rhs;
    if (cut.sense != Sense::kGe) r.hi = rhs;
    r.tag = to_string(cut.family);
    return r;
  };

  BbCallbacks cb;
  cb.lazy = [&](const std::vector<double>& x, double) {
    LazyResult verdict;
    verdict.accept = false;
    const Schedule s = extract_schedule(model, inst, x);
    if (inst.controls().empty()) {
      // Nothing to exclude: the single schedule is settled here.
      const SimulationResult sim = simulate(inst, s);
      if (sim.feasible && sim.cost < out.upper_bound) {
        out.has_incumbent = true;
        out.schedule = s;
        out.simulation = sim;
        out.upper_bound = sim.cost;
        verdict.has_incumbent = true;
        verdict.incumbent_value = sim.cost;
      }
      return verdict;
    }
    SimulationResult sim;
    if (switching_violations(inst, s).empty()) {
      sim = simulate(inst, s);
    } else {
      sim.feasible = false;
      sim.k_inf = inst.num_steps();
    }
    if (sim.feasible) {
      if (sim.cost < out.upper_bound) {
        out.has_incumbent = true;
        out.schedule = s;
        out.simulation = sim;
        out.upper_bound = sim.cost;
      }
      verdict.has_incumbent = true;
      verdict.incumbent_value = sim.cost;
      verdict.cuts.push_back(to_row(no_good_cut(inst, s, inst.num_steps())));
    } else {
      verdict.cuts.push_back(to_row(no_good_cut(inst, s, sim.k_inf)));
    }
    return verdict;
  };
  // Rounds the statuses of a fractional point at two thresholds and keeps
  // any schedule the simulator accepts.
  cb.heuristic = [&](const std::vector<double>& x) {
    double best = kInf;
    for (double threshold : {0.5, 1e-6}) {
      std::vector<double> r = x;
      for (int k = 0; k < inst.num_steps(); ++k) {
        for (int l : inst.controls()) {
          const int id = model.find({VarKind::kStatus, l, k, -1});
          if (id >= 0) r[id] = x[id] > threshold ? 1.0 : 0.0;
        }
      }
      const Schedule s = extract_schedule(model, inst, r);
      if (!switching_violations(inst, s).empty()) continue;
      const SimulationResult sim = simulate(inst, s);
      if (!sim.feasible) continue;
      if (sim.cost < out.upper_bound) {
        out.has_incumbent = true;
        out.schedule = s;
        out.simulation = sim;
        out.upper_bound = sim.cost;
      }
      best = std::min(best, sim.cost);
    }
    return best;
  };
  cb.progress = [&](double lower, double upper) { out.trace.emplace_back(lower, upper); };

  const MipResult mip = branch_and_bound(model, cb, options.limits, options.lp);
  out.nodes = mip.nodes;
  out.lazy_cuts = mip.lazy_cuts;
  out.lower_bound = mip.bound;
  switch (mip.status) {
    case MipStatus::kOptimal:
      out.termination = Termination::kConverged;
      out.lower_bound = out.upper_bound;
      break;
    case MipStatus::kInfeasible:
      out.termination = Termination::kInfeasibleCertified;
      out.lower_bound = kInf;
      break;
    case MipStatus::kTimeLimit: out.termination = Termination::kTimeLimit; break;
    case MipStatus::kNodeLimit: out.termination = Termination::kNodeLimit; break;
    case MipStatus::kGapLimit: out.termination = Termination::kGapLimit; break;
    default: out.termination = Termination::kNumerical; break;
  }
  if (out.has_incumbent) out.lower_bound = std::min(out.lower_bound, out.upper_bound);
  out.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace owf
