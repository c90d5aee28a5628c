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

#include "owf/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "owf/owf_solver.hpp"

namespace owf {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Scalars

ordered num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

ordered nums(const std::vector<double>& v) {
  ordered a = ordered::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::string field(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string item(const std::string& path, size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

double as_number(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw ParseError(path, "expected a number");
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path, "expected an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path, "expected a string");
  return j.get<std::string>();
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(field(path, key), "missing field");
  return *it;
}

const json* optional_field(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

std::vector<double> as_numbers(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], item(path, i)));
  return out;
}

/** A number broadcast to `n` entries, or an explicit array kept as written. */
std::vector<double> as_series(const json& j, size_t n, const std::string& path) {
  if (j.is_array()) return as_numbers(j, path);
  return std::vector<double>(n, as_number(j, path));
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line and column.
    size_t line = 1, col = 1;
    const size_t end = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
    for (size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    const size_t cut = msg.find(": ");
    if (cut != std::string::npos) msg = msg.substr(cut + 2);
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col), msg);
  }
}

std::string dump(const ordered& j) { return j.dump(2) + "\n"; }

void check_schema(const json& doc) {
  const int v = as_int(require(doc, "schema_version", ""), "schema_version");
  if (v != kSchemaVersion) {
    throw ParseError("schema_version", "unsupported version " + std::to_string(v));
  }
}

// ---------------------------------------------------------------------------
// Instance

NodeKind node_kind(const std::string& s, const std::string& path) {
  if (s == "demand") return NodeKind::kDemand;
  if (s == "reservoir") return NodeKind::kReservoir;
  if (s == "tank") return NodeKind::kTank;
  throw ParseError(path, "unknown node kind '" + s + "'");
}

LinkKind link_kind(const std::string& s, const std::string& path) {
  if (s == "pipe") return LinkKind::kPipe;
  if (s == "pump") return LinkKind::kPump;
  if (s == "valve") return LinkKind::kValve;
  throw ParseError(path, "unknown link kind '" + s + "'");
}

Node parse_node(const json& j, size_t K, const std::string& path) {
  Node n;
  n.id = as_string(require(j, "id", path), field(path, "id"));
  n.kind = node_kind(as_string(require(j, "kind", path), field(path, "kind")), field(path, "kind"));
  const size_t nh = n.kind == NodeKind::kTank ? K + 1 : K;
  if (n.kind == NodeKind::kReservoir) {
    if (const json* h = optional_field(j, "head")) {
      n.head_lb = n.head_ub = as_series(*h, nh, field(path, "head"));
    } else {
      n.head_lb = as_series(require(j, "head_lb", path), nh, field(path, "head_lb"));
      n.head_ub = as_series(require(j, "head_ub", path), nh, field(path, "head_ub"));
    }
    return n;
  }
  n.head_lb = as_series(require(j, "head_lb", path), nh, field(path, "head_lb"));
  n.head_ub = as_series(require(j, "head_ub", path), nh, field(path, "head_ub"));
  if (n.kind == NodeKind::kDemand) {
    n.demand = as_series(require(j, "demand", path), K, field(path, "demand"));
    return n;
  }
  TankData& t = n.tank;
  t.diameter = as_number(require(j, "diameter", path), field(path, "diameter"));
  t.bottom = as_number(require(j, "bottom", path), field(path, "bottom"));
  if (const json* v = optional_field(j, "initial_volume")) {
    t.initial_volume = as_number(*v, field(path, "initial_volume"));
  } else {
    const double h0 = as_number(require(j, "initial_head", path), field(path, "initial_head"));
    if (!(t.diameter > 0.0) || h0 < t.bottom) {
      throw ParseError(field(path, "initial_head"), "needs a positive diameter and head >= bottom");
    }
    t.initial_volume = tank_volume(t, h0);
  }
  t.flow_lb = as_series(require(j, "flow_lb", path), K, field(path, "flow_lb"));
  t.flow_ub = as_series(require(j, "flow_ub", path), K, field(path, "flow_ub"));
  return n;
}

Link parse_link(const json& j, size_t K, const std::string& path) {
  Link l;
  l.id = as_string(require(j, "id", path), field(path, "id"));
  l.kind = link_kind(as_string(require(j, "kind", path), field(path, "kind")), field(path, "kind"));
  l.tail_id = as_string(require(j, "from", path), field(path, "from"));
  l.head_id = as_string(require(j, "to", path), field(path, "to"));
  if (l.kind == LinkKind::kPump) {
    l.flow_lb.assign(K, 0.0);
    if (const json* lb = optional_field(j, "flow_lb")) l.flow_lb = as_series(*lb, K, field(path, "flow_lb"));
  } else {
    l.flow_lb = as_series(require(j, "flow_lb", path), K, field(path, "flow_lb"));
  }
  l.flow_ub = as_series(require(j, "flow_ub", path), K, field(path, "flow_ub"));
  if (const json* v = optional_field(j, "plus_lb")) l.plus_lb = as_series(*v, K, field(path, "plus_lb"));
  if (const json* v = optional_field(j, "minus_lb")) l.minus_lb = as_series(*v, K, field(path, "minus_lb"));
  derive_directed_bounds(l);
  if (l.kind == LinkKind::kPipe) {
    l.pipe.length = as_number(require(j, "length", path), field(path, "length"));
    l.pipe.resistance = as_number(require(j, "resistance", path), field(path, "resistance"));
    if (const json* e = optional_field(j, "exponent")) l.pipe.exponent = as_number(*e, field(path, "exponent"));
  } else if (l.kind == LinkKind::kPump) {
    l.pump.a = as_number(require(j, "a", path), field(path, "a"));
    l.pump.b = as_number(require(j, "b", path), field(path, "b"));
    if (const json* c = optional_field(j, "c")) l.pump.c = as_number(*c, field(path, "c"));
    if (const json* g = optional_field(j, "group")) l.pump.group = as_string(*g, field(path, "group"));
  }
  return l;
}

void parse_prices(const json& prices, Instance& inst, const std::string& base_dir) {
  const size_t K = inst.dt.size();
  std::vector<double> profile;
  bool has_profile = false;
  if (const json* p = optional_field(prices, "profile")) {
    const std::string name = as_string(*p, "prices.profile");
    std::filesystem::path file(name);
    if (file.is_relative() && !base_dir.empty()) file = std::filesystem::path(base_dir) / file;
    std::string text;
    try {
      text = read_file(file.string());
    } catch (const std::exception& e) {
      throw ParseError("prices.profile", e.what());
    }
    profile = load_price_profile(text, inst);
    has_profile = true;
  }
  const json& pumps = require(prices, "pumps", "prices");
  if (!pumps.is_object()) throw ParseError("prices.pumps", "expected an object");
  for (auto it = pumps.begin(); it != pumps.end(); ++it) {
    const std::string path = "prices.pumps." + it.key();
    const int l = inst.link_index(it.key());
    if (l < 0 || inst.links[l].kind != LinkKind::kPump) throw ParseError(path, "not a pump id");
    PumpData& pump = inst.links[l].pump;
    const json& e = it.value();
    if (optional_field(e, "flow_cost") || optional_field(e, "status_cost")) {
      pump.flow_cost = as_series(require(e, "flow_cost", path), K, field(path, "flow_cost"));
      pump.status_cost = as_series(require(e, "status_cost", path), K, field(path, "status_cost"));
      continue;
    }
    if (!has_profile) throw ParseError(path, "power coefficients need prices.profile");
    // Energy price per joule times power (W) times step length (s).
    const double per_flow = as_number(require(e, "power_per_flow", path), field(path, "power_per_flow"));
    const double fixed = as_number(require(e, "power_fixed", path), field(path, "power_fixed"));
    pump.flow_cost.resize(K);
    pump.status_cost.resize(K);
    for (size_t k = 0; k < K; ++k) {
      pump.flow_cost[k] = profile[k] * per_flow * inst.dt[k];
      pump.status_cost[k] = profile[k] * fixed * inst.dt[k];
    }
  }
}

void parse_switching(const json& sw, Instance& inst) {
  if (!sw.is_object()) throw ParseError("switching", "expected an object");
  for (auto it = sw.begin(); it != sw.end(); ++it) {
    const std::string path = "switching." + it.key();
    const int l = inst.link_index(it.key());
    if (l < 0 || inst.links[l].kind != LinkKind::kPump) throw ParseError(path, "not a pump id");
    PumpData& pump = inst.links[l].pump;
    const json& e = it.value();
    if (const json* v = optional_field(e, "min_on_s")) pump.min_on_s = as_number(*v, field(path, "min_on_s"));
    if (const json* v = optional_field(e, "min_off_s")) pump.min_off_s = as_number(*v, field(path, "min_off_s"));
    if (const json* v = optional_field(e, "max_switches")) pump.max_switches = as_int(*v, field(path, "max_switches"));
  }
}

/** Registry kinds whose entity is a node; all others index links. */
bool node_entity(VarKind kind) {
  return kind == VarKind::kHead || kind == VarKind::kNodeFlow || kind == VarKind::kVolume ||
         kind == VarKind::kMcCormick;
}

VarKind var_kind(const std::string& s, const std::string& path) {
  for (int i = 0; i <= static_cast<int>(VarKind::kPsi); ++i) {
    const VarKind k = static_cast<VarKind>(i);
    if (s == to_string(k)) return k;
  }
  throw ParseError(path, "unknown variable kind '" + s + "'");
}

ordered render_key(const Instance& inst, const VarKey& key) {
  ordered j;
  j["var"] = to_string(key.kind);
  j["id"] = node_entity(key.kind) ? inst.nodes[key.entity].id : inst.links[key.entity].id;
  j["k"] = key.k;
  if (key.p >= 0) j["p"] = key.p;
  return j;
}

VarKey parse_key(const Instance& inst, const json& j, const std::string& path) {
  VarKey key;
  key.kind = var_kind(as_string(require(j, "var", path), field(path, "var")), field(path, "var"));
  const std::string id = as_string(require(j, "id", path), field(path, "id"));
  key.entity = node_entity(key.kind) ? inst.node_index(id) : inst.link_index(id);
  if (key.entity < 0) throw ParseError(field(path, "id"), "unknown id '" + id + "'");
  key.k = as_int(require(j, "k", path), field(path, "k"));
  if (const json* p = optional_field(j, "p")) key.p = as_int(*p, field(path, "p"));
  return key;
}

const char* sense_name(Sense s) {
  switch (s) {
    case Sense::kLe: return "<=";
    case Sense::kGe: return ">=";
    case Sense::kEq: return "==";
  }
  return "?";
}

Sense parse_sense(const std::string& s, const std::string& path) {
  if (s == "<=") return Sense::kLe;
  if (s == ">=") return Sense::kGe;
  if (s == "==") return Sense::kEq;
  throw ParseError(path, "unknown sense '" + s + "'");
}

CutFamily parse_family(const std::string& s, const std::string& path) {
  for (CutFamily f : {CutFamily::kSymmetry, CutFamily::kDirectionVi, CutFamily::kDuality,
                      CutFamily::kObcg, CutFamily::kNoGood}) {
    if (s == to_string(f)) return f;
  }
  throw ParseError(path, "unknown cut family '" + s + "'");
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------

Instance parse_instance(const std::string& text, const std::string& base_dir) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("", "document must be an object");
  check_schema(doc);

  Instance inst;
  if (const json* v = optional_field(doc, "name")) inst.name = as_string(*v, "name");
  if (const json* v = optional_field(doc, "description")) inst.description = as_string(*v, "description");

  const json& horizon = require(doc, "horizon", "");
  const json& dt = require(horizon, "dt", "horizon");
  if (dt.is_array()) {
    inst.dt = as_numbers(dt, "horizon.dt");
  } else {
    const int K = as_int(require(horizon, "steps", "horizon"), "horizon.steps");
    if (K < 0) throw ParseError("horizon.steps", "must be nonnegative");
    inst.dt.assign(K, as_number(dt, "horizon.dt"));
  }
  const size_t K = inst.dt.size();

  const json& network = require(doc, "network", "");
  const json& nodes = require(network, "nodes", "network");
  const json& links = require(network, "links", "network");
  if (!nodes.is_array()) throw ParseError("network.nodes", "expected an array");
  if (!links.is_array()) throw ParseError("network.links", "expected an array");
  for (size_t i = 0; i < nodes.size(); ++i) {
    inst.nodes.push_back(parse_node(nodes[i], K, item("network.nodes", i)));
  }
  std::unordered_map<std::string, int> index;
  for (size_t i = 0; i < inst.nodes.size(); ++i) index.emplace(inst.nodes[i].id, static_cast<int>(i));
  for (size_t i = 0; i < links.size(); ++i) {
    Link l = parse_link(links[i], K, item("network.links", i));
    auto t = index.find(l.tail_id);
    auto h = index.find(l.head_id);
    l.tail = t == index.end() ? -1 : t->second;
    l.head = h == index.end() ? -1 : h->second;
    inst.links.push_back(std::move(l));
  }
  inst.finalize();

  if (const json* p = optional_field(doc, "prices")) parse_prices(*p, inst, base_dir);
  if (const json* s = optional_field(doc, "switching")) parse_switching(*s, inst);
  return inst;
}

Instance load_instance(const std::string& text, const std::string& base_dir) {
  Instance inst = parse_instance(text, base_dir);
  ValidationReport report = validate(inst);
  if (!report.ok()) throw ValidationError(std::move(report));
  return inst;
}

Instance load_instance_file(const std::string& path) {
  const std::string text = read_file(path);
  return load_instance(text, std::filesystem::path(path).parent_path().string());
}

std::string render_instance(const Instance& inst) {
  ordered doc;
  doc["schema_version"] = kSchemaVersion;
  doc["name"] = inst.name;
  doc["description"] = inst.description;
  doc["horizon"]["dt"] = nums(inst.dt);

  ordered nodes = ordered::array();
  for (const Node& n : inst.nodes) {
    ordered j;
    j["id"] = n.id;
    j["kind"] = to_string(n.kind);
    j["head_lb"] = nums(n.head_lb);
    j["head_ub"] = nums(n.head_ub);
    if (n.kind == NodeKind::kDemand) j["demand"] = nums(n.demand);
    if (n.kind == NodeKind::kTank) {
      j["diameter"] = num(n.tank.diameter);
      j["bottom"] = num(n.tank.bottom);
      j["initial_volume"] = num(n.tank.initial_volume);
      j["flow_lb"] = nums(n.tank.flow_lb);
      j["flow_ub"] = nums(n.tank.flow_ub);
    }
    nodes.push_back(std::move(j));
  }
  ordered links = ordered::array();
  ordered prices = ordered::object();
  ordered switching = ordered::object();
  for (const Link& l : inst.links) {
    ordered j;
    j["id"] = l.id;
    j["kind"] = to_string(l.kind);
    j["from"] = l.tail >= 0 ? inst.nodes[l.tail].id : l.tail_id;
    j["to"] = l.head >= 0 ? inst.nodes[l.head].id : l.head_id;
    j["flow_lb"] = nums(l.flow_lb);
    j["flow_ub"] = nums(l.flow_ub);
    j["plus_lb"] = nums(l.plus_lb);
    j["minus_lb"] = nums(l.minus_lb);
    if (l.kind == LinkKind::kPipe) {
      j["length"] = num(l.pipe.length);
      j["resistance"] = num(l.pipe.resistance);
      j["exponent"] = num(l.pipe.exponent);
    }
    if (l.kind == LinkKind::kPump) {
      j["a"] = num(l.pump.a);
      j["b"] = num(l.pump.b);
      j["c"] = num(l.pump.c);
      if (!l.pump.group.empty()) j["group"] = l.pump.group;
      prices[l.id]["flow_cost"] = nums(l.pump.flow_cost);
      prices[l.id]["status_cost"] = nums(l.pump.status_cost);
      switching[l.id]["min_on_s"] = num(l.pump.min_on_s);
      switching[l.id]["min_off_s"] = num(l.pump.min_off_s);
      switching[l.id]["max_switches"] = l.pump.max_switches;
    }
    links.push_back(std::move(j));
  }
  doc["network"]["nodes"] = std::move(nodes);
  doc["network"]["links"] = std::move(links);
  doc["prices"]["pumps"] = std::move(prices);
  doc["switching"] = std::move(switching);
  return dump(doc);
}

std::vector<double> load_price_profile(const std::string& csv_text, const Instance& inst) {
  std::istringstream in(csv_text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const char* ws = " \t\r";
    const size_t a = s.find_first_not_of(ws);
    if (a == std::string::npos) return std::string();
    return s.substr(a, s.find_last_not_of(ws) - a + 1);
  };
  bool header = false;
  std::vector<double> times, prices;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    const std::string ctx = "line " + std::to_string(lineno);
    const size_t comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(ctx, "expected two comma-separated columns");
    const std::string a = trim(line.substr(0, comma));
    const std::string b = trim(line.substr(comma + 1));
    if (!header) {
      if (a != "time" || b != "energy_price") {
        throw ParseError(ctx, "header must be 'time,energy_price'");
      }
      header = true;
      continue;
    }
    double t = 0.0, p = 0.0;
    try {
      size_t used_a = 0, used_b = 0;
      t = std::stod(a, &used_a);
      p = std::stod(b, &used_b);
      if (used_a != a.size() || used_b != b.size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw ParseError(ctx, "malformed number");
    }
    if (!std::isfinite(t) || !std::isfinite(p)) throw ParseError(ctx, "values must be finite");
    if (!times.empty() && !(t > times.back())) {
      throw ParseError(ctx, "time column must be strictly increasing");
    }
    times.push_back(t);
    prices.push_back(p);
  }
  if (!header) throw ParseError("line 1", "missing header 'time,energy_price'");
  const int K = inst.num_steps();
  if (static_cast<int>(prices.size()) != K) {
    throw ParseError("", "price profile has " + std::to_string(prices.size()) +
                             " rows but the horizon has " + std::to_string(K) + " steps");
  }
  for (int k = 0; k < K; ++k) {
    const double expect = inst.time(k);
    if (std::abs(times[k] - expect) > 1e-9 * (1.0 + std::abs(expect))) {
      throw ParseError("row " + std::to_string(k + 1),
                       "time " + fixed(times[k], 3) + " does not match step start " +
                           fixed(expect, 3));
    }
  }
  return prices;
}

// ---------------------------------------------------------------------------
// Results

std::string format_gap(double lower_bound, std::optional<double> upper_bound) {
  if (!upper_bound || !std::isfinite(*upper_bound) || !std::isfinite(lower_bound)) return "-";
  bool absolute = false;
  const double g = gap(lower_bound, *upper_bound, &absolute);
  if (absolute) return fixed(g, 6) + " (absolute)";
  return fixed(100.0 * g, 1) + "%";
}

std::string format_report_row(const ResultDocument& r) {
  const bool has_ub = r.upper_bound && std::isfinite(*r.upper_bound);
  std::ostringstream os;
  os << (has_ub ? fixed(*r.upper_bound, 1) : "-") << " "
     << (std::isfinite(r.lower_bound) ? fixed(r.lower_bound, 1) : "-") << " "
     << format_gap(r.lower_bound, r.upper_bound) << " " << fixed(r.wall_time_s, 1);
  return os.str();
}

std::string write_result(const ResultDocument& r) {
  ordered doc;
  doc["schema_version"] = kSchemaVersion;
  doc["instance"] = r.instance;
  doc["lower_bound"] = num(r.lower_bound);
  doc["upper_bound"] = r.upper_bound ? num(*r.upper_bound) : ordered(nullptr);
  doc["gap"] = format_gap(r.lower_bound, r.upper_bound);
  doc["wall_time_s"] = num(r.wall_time_s);
  doc["termination"] = r.termination;
  doc["nodes"] = r.nodes;
  if (r.baseline_bound) {
    doc["baseline_bound"] = num(*r.baseline_bound);
    doc["improvement_pct"] = num(improvement(*r.baseline_bound, r.lower_bound));
  }
  ordered sched = ordered::object();
  for (const auto& [id, z] : r.schedule) sched[id] = z;
  doc["schedule"] = std::move(sched);
  ordered tanks = ordered::object();
  for (const auto& [id, h] : r.tank_heads) tanks[id] = nums(h);
  doc["tank_heads"] = std::move(tanks);
  return dump(doc);
}

ResultDocument parse_result(const std::string& text) {
  const json doc = parse_json(text);
  check_schema(doc);
  ResultDocument r;
  r.instance = as_string(require(doc, "instance", ""), "instance");
  r.lower_bound = as_number(require(doc, "lower_bound", ""), "lower_bound");
  const json& ub = require(doc, "upper_bound", "");
  if (!ub.is_null()) r.upper_bound = as_number(ub, "upper_bound");
  r.wall_time_s = as_number(require(doc, "wall_time_s", ""), "wall_time_s");
  r.termination = as_string(require(doc, "termination", ""), "termination");
  const json& nodes = require(doc, "nodes", "");
  if (!nodes.is_number_integer()) throw ParseError("nodes", "expected an integer");
  r.nodes = nodes.get<long>();
  if (const json* b = optional_field(doc, "baseline_bound")) {
    r.baseline_bound = as_number(*b, "baseline_bound");
  }
  if (const json* s = optional_field(doc, "schedule")) {
    for (auto it = s->begin(); it != s->end(); ++it) {
      const std::string path = "schedule." + it.key();
      if (!it.value().is_array()) throw ParseError(path, "expected an array");
      std::vector<int> z;
      for (size_t k = 0; k < it.value().size(); ++k) z.push_back(as_int(it.value()[k], item(path, k)));
      r.schedule[it.key()] = std::move(z);
    }
  }
  if (const json* t = optional_field(doc, "tank_heads")) {
    for (auto it = t->begin(); it != t->end(); ++it) {
      r.tank_heads[it.key()] = as_numbers(it.value(), "tank_heads." + it.key());
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Schedules, bounds, cuts, simulations

std::string render_schedule(const Instance& inst, const Schedule& schedule) {
  ordered doc;
  doc["schema_version"] = kSchemaVersion;
  ordered s = ordered::object();
  for (int l : inst.controls()) {
    std::vector<int> z;
    for (const ControlState& step : schedule.steps) z.push_back(step[l]);
    s[inst.links[l].id] = z;
  }
  doc["schedule"] = std::move(s);
  return dump(doc);
}

Schedule parse_schedule(const Instance& inst, const std::string& text) {
  const json doc = parse_json(text);
  const json& s = require(doc, "schedule", "");
  if (!s.is_object()) throw ParseError("schedule", "expected an object");
  const int K = inst.num_steps();
  Schedule out = uniform_schedule(inst, 0);
  for (auto it = s.begin(); it != s.end(); ++it) {
    const int l = inst.link_index(it.key());
    if (l < 0 || !inst.links[l].is_control()) {
      throw ParseError("schedule." + it.key(), "not a pump or valve id");
    }
  }
  for (int l : inst.controls()) {
    const std::string path = "schedule." + inst.links[l].id;
    const json& z = require(s, inst.links[l].id, "schedule");
    if (!z.is_array() || static_cast<int>(z.size()) != K) {
      throw ParseError(path, "expected " + std::to_string(K) + " statuses");
    }
    for (int k = 0; k < K; ++k) {
      const int v = as_int(z[k], item(path, k));
      if (v != 0 && v != 1) throw ParseError(item(path, k), "status must be 0 or 1");
      out.steps[k][l] = v;
    }
  }
  return out;
}

namespace {

struct Series {
  const char* name;
  std::vector<double> NodeBounds::*node;
  std::vector<double> LinkBounds::*link;
};

constexpr Series kNodeSeries[] = {
    {"h_lb", &NodeBounds::h_lb, nullptr}, {"h_ub", &NodeBounds::h_ub, nullptr},
    {"q_lb", &NodeBounds::q_lb, nullptr}, {"q_ub", &NodeBounds::q_ub, nullptr}};
constexpr Series kLinkSeries[] = {
    {"q_lb", nullptr, &LinkBounds::q_lb},         {"q_ub", nullptr, &LinkBounds::q_ub},
    {"plus_lb", nullptr, &LinkBounds::plus_lb},   {"plus_ub", nullptr, &LinkBounds::plus_ub},
    {"minus_lb", nullptr, &LinkBounds::minus_lb}, {"minus_ub", nullptr, &LinkBounds::minus_ub},
    {"y_lb", nullptr, &LinkBounds::y_lb},         {"y_ub", nullptr, &LinkBounds::y_ub},
    {"z_lb", nullptr, &LinkBounds::z_lb},         {"z_ub", nullptr, &LinkBounds::z_ub}};

}  // namespace

std::string render_bounds(const Instance& inst, const BoundsStore& b) {
  ordered doc;
  doc["schema_version"] = kSchemaVersion;
  doc["steps"] = b.steps;
  ordered nodes = ordered::object();
  for (size_t i = 0; i < b.nodes.size(); ++i) {
    ordered j;
    for (const Series& s : kNodeSeries) j[s.name] = nums(b.nodes[i].*s.node);
    nodes[inst.nodes[i].id] = std::move(j);
  }
  ordered links = ordered::object();
  for (size_t l = 0; l < b.links.size(); ++l) {
    ordered j;
    for (const Series& s : kLinkSeries) j[s.name] = nums(b.links[l].*s.link);
    links[inst.links[l].id] = std::move(j);
  }
  doc["nodes"] = std::move(nodes);
  doc["links"] = std::move(links);
  return dump(doc);
}

BoundsStore parse_bounds(const Instance& inst, const std::string& text) {
  const json doc = parse_json(text);
  check_schema(doc);
  BoundsStore b;
  b.steps = as_int(require(doc, "steps", ""), "steps");
  const json& nodes = require(doc, "nodes", "");
  const json& links = require(doc, "links", "");
  if (nodes.size() != inst.nodes.size() || links.size() != inst.links.size()) {
    throw ParseError("", "bounds do not match the instance's nodes and links");
  }
  b.nodes.resize(inst.nodes.size());
  b.links.resize(inst.links.size());
  for (size_t i = 0; i < inst.nodes.size(); ++i) {
    const std::string path = "nodes." + inst.nodes[i].id;
    const json& j = require(nodes, inst.nodes[i].id, "nodes");
    for (const Series& s : kNodeSeries) {
      b.nodes[i].*s.node = as_numbers(require(j, s.name, path), field(path, s.name));
    }
  }
  for (size_t l = 0; l < inst.links.size(); ++l) {
    const std::string path = "links." + inst.links[l].id;
    const json& j = require(links, inst.links[l].id, "links");
    for (const Series& s : kLinkSeries) {
      b.links[l].*s.link = as_numbers(require(j, s.name, path), field(path, s.name));
    }
  }
  return b;
}

std::string render_cuts(const Instance& inst, const CutSet& cuts) {
  ordered doc;
  doc["schema_version"] = kSchemaVersion;
  ordered vars = ordered::array();
  for (const AuxVariable& v : cuts.vars) {
    ordered j = render_key(inst, v.key);
    j["lb"] = num(v.lb);
    j["ub"] = num(v.ub);
    vars.push_back(std::move(j));
  }
  ordered list = ordered::array();
  for (const Cut& c : cuts.cuts) {
    ordered j;
    j["family"] = to_string(c.family);
    j["k"] = c.k;
    ordered terms = ordered::array();
    for (const auto& [key, coef] : c.terms) {
      ordered t = render_key(inst, key);
      t["coef"] = num(coef);
      terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    j["sense"] = sense_name(c.sense);
    j["rhs"] = num(c.rhs);
    list.push_back(std::move(j));
  }
  doc["vars"] = std::move(vars);
  doc["cuts"] = std::move(list);
  return dump(doc);
}

CutSet parse_cuts(const Instance& inst, const std::string& text) {
  const json doc = parse_json(text);
  check_schema(doc);
  CutSet out;
  const json& vars = require(doc, "vars", "");
  const json& cuts = require(doc, "cuts", "");
  if (!vars.is_array()) throw ParseError("vars", "expected an array");
  if (!cuts.is_array()) throw ParseError("cuts", "expected an array");
  for (size_t i = 0; i < vars.size(); ++i) {
    const std::string path = item("vars", i);
    AuxVariable v;
    v.key = parse_key(inst, vars[i], path);
    v.lb = as_number(require(vars[i], "lb", path), field(path, "lb"));
    v.ub = as_number(require(vars[i], "ub", path), field(path, "ub"));
    out.vars.push_back(v);
  }
  for (size_t i = 0; i < cuts.size(); ++i) {
    const std::string path = item("cuts", i);
    const json& j = cuts[i];
    Cut c;
    c.family = parse_family(as_string(require(j, "family", path), field(path, "family")),
                            field(path, "family"));
    c.k = as_int(require(j, "k", path), field(path, "k"));
    c.sense = parse_sense(as_string(require(j, "sense", path), field(path, "sense")),
                          field(path, "sense"));
    c.rhs = as_number(require(j, "rhs", path), field(path, "rhs"));
    const json& terms = require(j, "terms", path);
    if (!terms.is_array()) throw ParseError(field(path, "terms"), "expected an array");
    for (size_t t = 0; t < terms.size(); ++t) {
      const std::string tp = item(field(path, "terms"), t);
      c.terms.emplace_back(parse_key(inst, terms[t], tp),
                           as_number(require(terms[t], "coef", tp), field(tp, "coef")));
    }
    out.cuts.push_back(std::move(c));
  }
  return out;
}

std::string render_simulation(const Instance& inst, const Schedule& schedule,
                              const SimulationResult& sim) {
  ordered doc;
  doc["schema_version"] = kSchemaVersion;
  doc["instance"] = inst.name;
  doc["feasible"] = sim.feasible;
  doc["k_inf"] = sim.k_inf;
  doc["cost"] = sim.feasible ? num(sim.cost) : ordered(nullptr);
  doc["violations"] = sim.violations;
  ordered sched = ordered::object();
  for (int l : inst.controls()) {
    std::vector<int> z;
    for (const ControlState& step : schedule.steps) z.push_back(step[l]);
    sched[inst.links[l].id] = z;
  }
  doc["schedule"] = std::move(sched);
  ordered steps = ordered::array();
  for (size_t k = 0; k < sim.states.size(); ++k) {
    const SteadyState& s = sim.states[k];
    ordered j;
    j["k"] = k;
    ordered flows = ordered::object();
    for (size_t l = 0; l < inst.links.size(); ++l) flows[inst.links[l].id] = num(s.flow[l]);
    ordered heads = ordered::object();
    for (size_t i = 0; i < inst.nodes.size(); ++i) heads[inst.nodes[i].id] = num(s.head[i]);
    j["flows"] = std::move(flows);
    j["heads"] = std::move(heads);
    steps.push_back(std::move(j));
  }
  doc["steps"] = std::move(steps);
  ordered tanks = ordered::object();
  for (int t : inst.tanks()) {
    ordered j;
    // Volumes past the last solved step are placeholders.
    const size_t n = std::min(sim.volume[t].size(), sim.states.size() + 1);
    const std::vector<double> volume(sim.volume[t].begin(), sim.volume[t].begin() + n);
    std::vector<double> heads;
    for (double v : volume) heads.push_back(tank_head(inst.nodes[t].tank, std::max(0.0, v)));
    j["volume"] = nums(volume);
    j["head"] = nums(heads);
    tanks[inst.nodes[t].id] = std::move(j);
  }
  doc["tanks"] = std::move(tanks);
  return dump(doc);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace owf
