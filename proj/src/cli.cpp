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

#include "owf/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "CLI11.hpp"
#include "owf/io.hpp"
#include "owf/obbt.hpp"
#include "owf/obcg.hpp"
#include "owf/owf_solver.hpp"
#include "owf/relaxation.hpp"

namespace owf {

std::uint64_t fnv1a(const std::string& text, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string cache_key(const Instance& instance, const std::string& config) {
  const std::uint64_t a = fnv1a(render_instance(instance));
  const std::uint64_t b = fnv1a(config);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%016llx-%016llx", static_cast<unsigned long long>(a),
                static_cast<unsigned long long>(b));
  return buf;
}

namespace {

struct RunConfig {
  std::string instance_path;
  std::string schedule_path;
  std::string relaxation = "oa";
  double xi = 1.0;
  std::string obbt;
  bool obcg = false;
  bool duality_cuts = false;
  bool direction_vis = false;
  bool symmetry_cuts = false;
  bool relax_directions = false;
  double time_limit = 0.0;
  long nodes = 0;
  int jobs = 0;
  std::string out;
  std::string bounds_path;
  std::string cuts_path;
};

struct Artifacts {
  BoundsStore bounds;
  CutSet cuts;
  bool infeasible = false;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

RelaxationOptions relaxation_options(const RunConfig& c) {
  RelaxationOptions o;
  o.kind = c.relaxation == "pw" ? RelaxationKind::kPW : RelaxationKind::kOA;
  o.xi = c.xi;
  o.duality_cuts = c.duality_cuts;
  o.direction_vis = c.direction_vis;
  o.symmetry_cuts = c.symmetry_cuts;
  o.relax_directions = c.relax_directions;
  return o;
}

/** Everything that changes the preprocessing output, in a stable spelling. */
std::string preprocess_signature(const RunConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "obbt=" << c.obbt << ";obcg=" << c.obcg << ";xi=" << c.xi
     << ";subproblem_time=" << (c.time_limit > 0 ? c.time_limit : 60.0);
  return os.str();
}

std::string root_text(double v) {
  if (std::isinf(v) && v > 0) return "infeasible";
  if (!std::isfinite(v)) return "unavailable";
  return fmt("%.6f", v);
}

/** Runs the OBBT chain and OBCG, printing one line per stage. */
Artifacts preprocess(const Instance& inst, const RunConfig& c, std::ostream& out) {
  Artifacts a;
  a.bounds = BoundsStore::from_instance(inst);
  const RelaxationOptions ro = relaxation_options(c);
  const double naive = root_bound(inst, a.bounds, ro);
  out << "stage naive root " << root_text(naive) << "\n";
  if (std::isinf(naive) && naive > 0) {
    a.infeasible = true;
    return a;
  }
  auto report = [&](const std::string& name, double seconds, double root) {
    out << "stage " << name << " time " << fmt("%.2f", seconds) << " s root " << root_text(root);
    if (std::isfinite(root) && std::isfinite(naive) && naive != 0.0) {
      out << " improvement " << fmt("%.1f", improvement(naive, root)) << "%";
    }
    out << "\n";
  };
  for (ObbtVariant v : parse_obbt_chain(c.obbt)) {
    ObbtConfig oc;
    oc.variant = v;
    oc.xi = c.xi;
    oc.jobs = c.jobs;
    if (c.time_limit > 0) oc.subproblem_time = c.time_limit;
    const auto t0 = std::chrono::steady_clock::now();
    ObbtResult r = obbt(inst, a.bounds, oc);
    const double secs = seconds_since(t0);
    if (r.status == ObbtStatus::kInfeasible) {
      out << "stage " << to_string(v) << " proved the instance infeasible\n";
      a.infeasible = true;
      return a;
    }
    a.bounds = std::move(r.bounds);
    report(to_string(v), secs, root_bound(inst, a.bounds, ro));
  }
  if (c.obcg) {
    ObcgConfig cc;
    cc.xi = c.xi;
    cc.jobs = c.jobs;
    if (c.time_limit > 0) cc.subproblem_time = c.time_limit;
    const auto t0 = std::chrono::steady_clock::now();
    ObcgOutput r = obcg(inst, a.bounds, cc);
    const double secs = seconds_since(t0);
    if (r.infeasible) {
      out << "stage OBCG proved the instance infeasible\n";
      a.infeasible = true;
      return a;
    }
    a.cuts = std::move(r.cuts);
    report("OBCG (" + std::to_string(a.cuts.size()) + " cuts)", secs,
           root_bound(inst, a.bounds, ro, &a.cuts));
  }
  return a;
}

/** Preprocessing through the cache when OWFKIT_CACHE_DIR is set. */
Artifacts cached_preprocess(const Instance& inst, const RunConfig& c, std::ostream& out) {
  const char* dir = std::getenv("OWFKIT_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return preprocess(inst, c, out);
  const std::filesystem::path base =
      std::filesystem::path(dir) / cache_key(inst, preprocess_signature(c));
  const std::filesystem::path bounds_file = base / "bounds.json";
  const std::filesystem::path cuts_file = base / "cuts.json";
  if (std::filesystem::exists(bounds_file) && std::filesystem::exists(cuts_file)) {
    out << "cache hit " << base.string() << "\n";
    Artifacts a;
    a.bounds = parse_bounds(inst, read_file(bounds_file.string()));
    a.cuts = parse_cuts(inst, read_file(cuts_file.string()));
    return a;
  }
  Artifacts a = preprocess(inst, c, out);
  if (!a.infeasible) {
    write_file(bounds_file.string(), render_bounds(inst, a.bounds));
    write_file(cuts_file.string(), render_cuts(inst, a.cuts));
    out << "cached " << base.string() << "\n";
  }
  return a;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

int cmd_validate(const RunConfig& c, std::ostream& out) {
  const std::string text = read_file(c.instance_path);
  const Instance inst =
      parse_instance(text, std::filesystem::path(c.instance_path).parent_path().string());
  const ValidationReport report = validate(inst);
  if (!report.ok()) {
    out << "invalid: " << report.violations.size() << " violation(s)\n" << report.to_string();
    return kExitInvalid;
  }
  out << "valid: " << inst.nodes.size() << " nodes, " << inst.links.size() << " links, "
      << inst.num_steps() << " steps\n";
  return kExitOk;
}

int cmd_preprocess(const RunConfig& c, std::ostream& out) {
  const Instance inst = load_instance_file(c.instance_path);
  const Artifacts a = cached_preprocess(inst, c, out);
  if (a.infeasible) {
    out << "instance infeasible\n";
    return kExitInfeasible;
  }
  const std::filesystem::path dir(c.out.empty() ? std::string(".") : c.out);
  write_file((dir / "bounds.json").string(), render_bounds(inst, a.bounds));
  write_file((dir / "cuts.json").string(), render_cuts(inst, a.cuts));
  out << "wrote " << (dir / "bounds.json").string() << " and " << (dir / "cuts.json").string()
      << "\n";
  return kExitOk;
}

int cmd_solve(const RunConfig& c, std::ostream& out) {
  const Instance inst = load_instance_file(c.instance_path);
  const auto t0 = std::chrono::steady_clock::now();
  Artifacts a;
  if (!c.obbt.empty() || c.obcg) {
    a = cached_preprocess(inst, c, out);
  } else {
    a.bounds = BoundsStore::from_instance(inst);
  }
  if (!c.bounds_path.empty()) a.bounds = parse_bounds(inst, read_file(c.bounds_path));
  if (!c.cuts_path.empty()) a.cuts.append(parse_cuts(inst, read_file(c.cuts_path)));

  ResultDocument doc;
  doc.instance = inst.name;
  if (a.infeasible) {
    doc.lower_bound = kInf;
    doc.termination = to_string(Termination::kInfeasibleCertified);
    doc.wall_time_s = seconds_since(t0);
  } else {
    SolveOptions so;
    so.relaxation = relaxation_options(c);
    so.limits.time_limit = c.time_limit;
    so.limits.node_limit = c.nodes;
    const OwfResult r = solve_owf(inst, so, a.bounds, a.cuts.size() ? &a.cuts : nullptr);
    doc.lower_bound = r.lower_bound;
    doc.termination = to_string(r.termination);
    doc.nodes = r.nodes;
    doc.wall_time_s = seconds_since(t0);
    if (r.has_incumbent) {
      doc.upper_bound = r.upper_bound;
      for (int l : inst.controls()) {
        std::vector<int> z;
        for (const ControlState& s : r.schedule.steps) z.push_back(s[l]);
        doc.schedule[inst.links[l].id] = z;
      }
      for (int t : inst.tanks()) {
        std::vector<double> h;
        for (double v : r.simulation.volume[t]) h.push_back(tank_head(inst.nodes[t].tank, v));
        doc.tank_heads[inst.nodes[t].id] = h;
      }
    }
  }
  out << "UB LB Gap Time\n" << format_report_row(doc) << "\n";
  out << "termination " << doc.termination << "\n";
  if (!c.out.empty()) write_file(c.out, write_result(doc));
  if (doc.termination == to_string(Termination::kInfeasibleCertified)) return kExitInfeasible;
  return doc.upper_bound ? kExitOk : kExitNoIncumbent;
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  const Instance inst = load_instance_file(c.instance_path);
  const Schedule schedule = parse_schedule(inst, read_file(c.schedule_path));
  SimulationResult sim;
  // Switching limits are checked before any hydraulics.
  const std::vector<std::string> switching = switching_violations(inst, schedule);
  if (switching.empty()) {
    sim = simulate(inst, schedule);
  } else {
    sim.feasible = false;
    sim.volume.assign(inst.nodes.size(), {});
    for (int t : inst.tanks()) sim.volume[t] = {inst.nodes[t].tank.initial_volume};
    for (const std::string& v : switching) sim.violations.push_back("switching: " + v);
  }
  emit(render_simulation(inst, schedule, sim), c.out, out);
  if (!c.out.empty()) {
    out << (sim.feasible ? "feasible cost " + fmt("%.10g", sim.cost) : "infeasible") << "\n";
  }
  return sim.feasible ? kExitOk : kExitInvalid;
}

int cmd_export_lp(const RunConfig& c, std::ostream& out) {
  const Instance inst = load_instance_file(c.instance_path);
  BoundsStore bounds = BoundsStore::from_instance(inst);
  CutSet cuts;
  if (!c.bounds_path.empty()) bounds = parse_bounds(inst, read_file(c.bounds_path));
  if (!c.cuts_path.empty()) cuts = parse_cuts(inst, read_file(c.cuts_path));
  const RelaxationOptions ro = relaxation_options(c);
  const Partition part = build_partitions(inst, bounds, ro.xi);
  const MilpModel m = build_relaxation(inst, bounds, part, ro, ModelScope::full(inst), &cuts);
  emit(export_lp(m, &inst), c.out, out);
  return kExitOk;
}

void add_relaxation_flags(CLI::App* app, RunConfig& c) {
  app->add_option("--relaxation", c.relaxation, "Relaxation of the nonlinear terms")
      ->check(CLI::IsMember({"oa", "pw"}));
  app->add_option("--xi", c.xi, "Partition tolerance in meters")->check(CLI::PositiveNumber);
  app->add_flag("--duality-cuts", c.duality_cuts, "Add the per-step energy balance cuts");
  app->add_flag("--direction-vis", c.direction_vis, "Add flow-direction inequalities");
  app->add_flag("--symmetry-cuts", c.symmetry_cuts, "Order identical parallel pumps");
  app->add_flag("--relax-directions", c.relax_directions, "Treat direction binaries as continuous");
}

void add_preprocess_flags(CLI::App* app, RunConfig& c) {
  app->add_option("--obbt", c.obbt, "Bound tightening chain, e.g. BT-SR,BT-SS,BT-SQ");
  app->add_flag("--obcg", c.obcg, "Generate conditional bound cuts");
  app->add_option("--jobs", c.jobs, "Worker threads for preprocessing (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal water flow scheduling with bound tightening and cut generation"};
  app.require_subcommand(1);
  RunConfig c;

  CLI::App* validate_cmd = app.add_subcommand("validate", "Check an instance document");
  validate_cmd->add_option("instance", c.instance_path, "Instance file")->required();

  CLI::App* pre = app.add_subcommand("preprocess", "Tighten bounds and generate cuts");
  pre->add_option("instance", c.instance_path, "Instance file")->required();
  add_relaxation_flags(pre, c);
  add_preprocess_flags(pre, c);
  pre->add_option("--time-limit", c.time_limit, "Seconds per subproblem")
      ->check(CLI::NonNegativeNumber);
  pre->add_option("--out", c.out, "Output directory for bounds.json and cuts.json");

  CLI::App* solve = app.add_subcommand("solve", "Branch and bound with simulation checks");
  solve->add_option("instance", c.instance_path, "Instance file")->required();
  add_relaxation_flags(solve, c);
  add_preprocess_flags(solve, c);
  solve->add_option("--time-limit", c.time_limit, "Wall-clock limit in seconds (0 = none)")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--nodes", c.nodes, "Node limit (0 = none)")->check(CLI::NonNegativeNumber);
  solve->add_option("--bounds", c.bounds_path, "Bounds document from preprocess");
  solve->add_option("--cuts", c.cuts_path, "Cut document from preprocess");
  solve->add_option("--out", c.out, "Result document path");

  CLI::App* sim = app.add_subcommand("simulate", "Extended-period simulation of a schedule");
  sim->add_option("instance", c.instance_path, "Instance file")->required();
  sim->add_option("schedule", c.schedule_path, "Schedule or result document")->required();
  sim->add_option("--out", c.out, "Simulation document path");

  CLI::App* lp = app.add_subcommand("export-lp", "Write the relaxation in LP format");
  lp->add_option("instance", c.instance_path, "Instance file")->required();
  add_relaxation_flags(lp, c);
  lp->add_option("--bounds", c.bounds_path, "Bounds document from preprocess");
  lp->add_option("--cuts", c.cuts_path, "Cut document from preprocess");
  lp->add_option("--out", c.out, "LP file path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(c, out);
    if (pre->parsed()) return cmd_preprocess(c, out);
    if (solve->parsed()) return cmd_solve(c, out);
    if (sim->parsed()) return cmd_simulate(c, out);
    if (lp->parsed()) return cmd_export_lp(c, out);
  } catch (const ValidationError& e) {
    err << "invalid instance:\n" << e.report().to_string();
    return kExitInvalid;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace owf
