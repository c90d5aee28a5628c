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
#include <sstream>

#include "owf/io.hpp"
#include "owf/obcg.hpp"
#include "owf/owf_solver.hpp"
#include "support/instances.hpp"

namespace owf {
namespace {

using testing::InstanceBuilder;

const char* kMinimal = R"({
  "schema_version": 1,
  "name": "minimal",
  "horizon": {"dt": [3600]},
  "network": {
    "nodes": [
      {"id": "r1", "kind": "reservoir", "head": 100},
      {"id": "d1", "kind": "demand", "demand": -0.1, "head_lb": 0, "head_ub": 200}
    ],
    "links": [
      {"id": "p1", "kind": "pipe", "from": "r1", "to": "d1", "length": 1000,
       "resistance": 0.0012, "flow_lb": -10, "flow_ub": 10}
    ]
  }
})";

std::string hourly_csv(int rows, double step = 3600.0) {
  std::ostringstream os;
  os << "time,energy_price\n";
  for (int i = 0; i < rows; ++i) os << i * step << "," << 1e-8 * (1 + i % 5) << "\n";
  return os.str();
}

Instance hourly_instance(int K) {
  InstanceBuilder b(K);
  b.reservoir("r1", 10.0).demand("d1", -0.01, 0.0, 100.0).pipe("p1", "r1", "d1", 10, 1, -1, 1);
  return b.build();
}

/** Field-by-field equality of two instances. */
void expect_same(const Instance& a, const Instance& b) {
  EXPECT_EQ(a.name, b.name);
  EXPECT_EQ(a.description, b.description);
  EXPECT_EQ(a.dt, b.dt);
  ASSERT_EQ(a.nodes.size(), b.nodes.size());
  for (size_t i = 0; i < a.nodes.size(); ++i) {
    const Node& x = a.nodes[i];
    const Node& y = b.nodes[i];
    EXPECT_EQ(x.id, y.id);
    EXPECT_EQ(x.kind, y.kind);
    EXPECT_EQ(x.head_lb, y.head_lb);
    EXPECT_EQ(x.head_ub, y.head_ub);
    EXPECT_EQ(x.demand, y.demand);
    EXPECT_EQ(x.tank.diameter, y.tank.diameter);
    EXPECT_EQ(x.tank.bottom, y.tank.bottom);
    EXPECT_EQ(x.tank.initial_volume, y.tank.initial_volume);
    EXPECT_EQ(x.tank.flow_lb, y.tank.flow_lb);
    EXPECT_EQ(x.tank.flow_ub, y.tank.flow_ub);
  }
  ASSERT_EQ(a.links.size(), b.links.size());
  for (size_t l = 0; l < a.links.size(); ++l) {
    const Link& x = a.links[l];
    const Link& y = b.links[l];
    EXPECT_EQ(x.id, y.id);
    EXPECT_EQ(x.kind, y.kind);
    EXPECT_EQ(x.tail, y.tail);
    EXPECT_EQ(x.head, y.head);
    EXPECT_EQ(x.flow_lb, y.flow_lb);
    EXPECT_EQ(x.flow_ub, y.flow_ub);
    EXPECT_EQ(x.plus_lb, y.plus_lb);
    EXPECT_EQ(x.plus_ub, y.plus_ub);
    EXPECT_EQ(x.minus_lb, y.minus_lb);
    EXPECT_EQ(x.minus_ub, y.minus_ub);
    EXPECT_EQ(x.pipe.length, y.pipe.length);
    EXPECT_EQ(x.pipe.resistance, y.pipe.resistance);
    EXPECT_EQ(x.pipe.exponent, y.pipe.exponent);
    EXPECT_EQ(x.pump.a, y.pump.a);
    EXPECT_EQ(x.pump.b, y.pump.b);
    EXPECT_EQ(x.pump.c, y.pump.c);
    EXPECT_EQ(x.pump.flow_cost, y.pump.flow_cost);
    EXPECT_EQ(x.pump.status_cost, y.pump.status_cost);
    EXPECT_EQ(x.pump.min_on_s, y.pump.min_on_s);
    EXPECT_EQ(x.pump.min_off_s, y.pump.min_off_s);
    EXPECT_EQ(x.pump.max_switches, y.pump.max_switches);
    EXPECT_EQ(x.pump.group, y.pump.group);
  }
}

TEST(LoadInstance, MinimalDocument) {
  const Instance inst = load_instance(kMinimal);
  EXPECT_EQ(inst.nodes.size(), 2u);
  EXPECT_EQ(inst.links.size(), 1u);
  EXPECT_EQ(inst.num_steps(), 1);
  EXPECT_EQ(inst.links[0].pipe.resistance, 0.0012);
  EXPECT_EQ(inst.links[0].pipe.exponent, 1.852);
  EXPECT_EQ(inst.links[0].plus_ub[0], 10.0);
  EXPECT_EQ(inst.links[0].minus_ub[0], 10.0);
  EXPECT_TRUE(validate(inst).ok());
}

TEST(LoadInstance, DuplicateNodeIdIsNamed) {
  std::string doc = kMinimal;
  doc.replace(doc.find("\"d1\", \"kind\""), 4, "\"r1\"");
  try {
    load_instance(doc);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("duplicate node id r1"), std::string::npos) << e.what();
  }
}

TEST(LoadInstance, MissingEndpointIsAValidationError) {
  std::string doc = kMinimal;
  doc.replace(doc.find("\"to\": \"d1\""), 10, "\"to\": \"n99\"");
  try {
    load_instance(doc);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("n99"), std::string::npos) << e.what();
  }
}

TEST(LoadInstance, SyntaxErrorCarriesLine) {
  std::string doc = kMinimal;
  doc.replace(doc.find("\"head\": 100"), 11, "\"head\": 100,,");
  try {
    parse_instance(doc);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.context().rfind("line 7", 0), 0u) << e.what();
  }
}

TEST(LoadInstance, FieldErrorsCarryPath) {
  std::string doc = kMinimal;
  doc.replace(doc.find("\"length\": 1000"), 14, "\"length\": \"long\"");
  try {
    parse_instance(doc);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.context(), "network.links[0].length");
  }
  std::string no_version = kMinimal;
  no_version.replace(no_version.find("\"schema_version\": 1,"), 20, "");
  EXPECT_THROW(parse_instance(no_version), ParseError);
}

TEST(LoadInstance, ReconstructedDayNetworkCounts) {
  const Instance inst = load_instance_file(std::string(OWF_DATA_DIR) + "/simple_fsd_reconstruction.json");
  EXPECT_EQ(inst.nodes.size(), 6u);
  EXPECT_EQ(inst.demands().size(), 2u);
  EXPECT_EQ(inst.reservoirs().size(), 3u);
  EXPECT_EQ(inst.tanks().size(), 1u);
  EXPECT_EQ(inst.links.size(), 5u);
  EXPECT_EQ(inst.pipes().size(), 2u);
  EXPECT_EQ(inst.pumps().size(), 3u);
  EXPECT_EQ(inst.num_steps(), 24);
}

TEST(LoadInstance, ProfilePricesBecomeCostCoefficients) {
  const Instance inst = load_instance_file(std::string(OWF_DATA_DIR) + "/simple_fsd_reconstruction.json");
  const std::vector<double> price =
      load_price_profile(read_file(std::string(OWF_DATA_DIR) + "/prices_24h.csv"), inst);
  const PumpData& pump = inst.links[inst.link_index("pu1")].pump;
  // price (currency/J) * power (W) * 3600 s
  EXPECT_DOUBLE_EQ(pump.flow_cost[0], 2.2e-8 * 392400.0 * 3600.0);
  EXPECT_DOUBLE_EQ(pump.status_cost[8], 4.6e-8 * 4000.0 * 3600.0);
  EXPECT_DOUBLE_EQ(price[18], 5.1e-8);
}

TEST(LoadInstance, BundledFilesMatchBuilders) {
  Instance toy = load_instance_file(std::string(OWF_DATA_DIR) + "/toy.json");
  Instance series = load_instance_file(std::string(OWF_DATA_DIR) + "/series_pumps.json");
  toy.description.clear();
  series.description.clear();
  expect_same(toy, testing::toy_instance());
  expect_same(series, testing::series_pumps_instance());
}

Instance random_instance(std::mt19937& rng) {
  std::uniform_int_distribution<int> steps(1, 5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int K = steps(rng);
  InstanceBuilder b(K, 900.0 * (1 + static_cast<int>(4 * u(rng))));
  std::vector<double> demand(K);
  for (double& d : demand) d = -0.1 * u(rng);
  b.reservoir("r1", 10.0 + 20.0 * u(rng))
      .tank("t1", 5.0 + 20.0 * u(rng), 30.0, 34.0, 31.0, 38.0 + u(rng), 0.1 + u(rng))
      .demand("d1", demand, 25.0 * u(rng), 100.0 + u(rng));
  std::vector<double> lam(K), mu(K);
  for (int k = 0; k < K; ++k) {
    lam[k] = 200.0 * u(rng);
    mu[k] = 5.0 * u(rng);
  }
  b.pump("pu1", "r1", "t1", 40.0 + u(rng), -1000.0 * (0.2 + 0.8 * u(rng)), 1.5 + u(rng), 0.1, lam, mu)
      .switching(3600.0 * u(rng), 1800.0 * u(rng), 1 + static_cast<int>(4 * u(rng)))
      .running_minimum(0.01 * u(rng))
      .pipe("p1", "t1", "d1", 100.0 + 900.0 * u(rng), 0.5 + u(rng), -0.3, 0.3)
      .valve("v1", "r1", "d1", -0.2 * u(rng), 0.2);
  Instance inst = b.build();
  inst.name = "random";
  inst.description = "seeded " + std::to_string(u(rng));
  inst.links[0].pump.group = u(rng) < 0.5 ? "" : "g1";
  return inst;
}

TEST(RenderInstance, RandomDocumentsRoundTrip) {
  std::mt19937 rng(20240611);
  for (int trial = 0; trial < 50; ++trial) {
    const Instance inst = random_instance(rng);
    ASSERT_TRUE(validate(inst).ok()) << validate(inst).to_string();
    const std::string text = render_instance(inst);
    const Instance back = load_instance(text);
    expect_same(inst, back);
    EXPECT_EQ(render_instance(back), text);
  }
}

TEST(PriceProfile, HourlyRows) {
  const std::vector<double> p = load_price_profile(hourly_csv(24), hourly_instance(24));
  ASSERT_EQ(p.size(), 24u);
  EXPECT_DOUBLE_EQ(p[0], 1e-8);
  EXPECT_DOUBLE_EQ(p[4], 5e-8);
}

TEST(PriceProfile, RowsOutOfOrder) {
  const std::string csv = "time,energy_price\n0,1\n7200,2\n3600,3\n";
  EXPECT_THROW(load_price_profile(csv, hourly_instance(3)), ParseError);
}

TEST(PriceProfile, WrongRowCount) {
  try {
    load_price_profile(hourly_csv(48, 1800.0), hourly_instance(24));
    FAIL() << "expected a length error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("48 rows"), std::string::npos) << e.what();
  }
}

TEST(PriceProfile, HeaderAndTimesChecked) {
  EXPECT_THROW(load_price_profile("t,price\n0,1\n", hourly_instance(1)), ParseError);
  EXPECT_THROW(load_price_profile("time,energy_price\n10,1\n", hourly_instance(1)), ParseError);
  EXPECT_THROW(load_price_profile("time,energy_price\n0,abc\n", hourly_instance(1)), ParseError);
}

TEST(Result, GapFormatting) {
  EXPECT_EQ(format_gap(155.6, 155.6), "0.0%");
  EXPECT_EQ(format_gap(92.5, 102.8), "10.0%");
  EXPECT_EQ(format_gap(0.0, 0.0), "0.0%");
  EXPECT_EQ(format_gap(-1.5, 0.0), "1.500000 (absolute)");
  EXPECT_EQ(format_gap(50.0, std::nullopt), "-");
}

TEST(Result, ImprovementWithBaseline) {
  ResultDocument r;
  r.instance = "x";
  r.lower_bound = 110.0;
  r.upper_bound = 120.0;
  r.baseline_bound = 100.0;
  r.termination = "converged";
  const std::string text = write_result(r);
  EXPECT_NE(text.find("\"improvement_pct\": 10.0"), std::string::npos) << text;
}

TEST(Result, MissingIncumbentRendersDash) {
  ResultDocument r;
  r.instance = "starved";
  r.lower_bound = kInf;
  r.termination = "infeasible-certified";
  const std::string text = write_result(r);
  EXPECT_NE(text.find("\"gap\": \"-\""), std::string::npos) << text;
  EXPECT_NE(text.find("\"upper_bound\": null"), std::string::npos);
  EXPECT_EQ(format_report_row(r), "- - - 0.0");
  EXPECT_EQ(parse_result(text), r);
}

TEST(Result, DeterministicRoundTrip) {
  ResultDocument r;
  r.instance = "toy";
  r.lower_bound = 26.339335179983557;
  r.upper_bound = 26.339335179983557;
  r.wall_time_s = 0.123456789;
  r.termination = "converged";
  r.nodes = 33;
  r.schedule["pu1"] = {1, 0, 1, 0};
  r.tank_heads["t1"] = {34.0, 36.1, 35.2, 37.4, 36.4};
  const std::string text = write_result(r);
  EXPECT_EQ(write_result(r), text);
  EXPECT_EQ(parse_result(text), r);
  for (const char* key : {"\"lower_bound\"", "\"upper_bound\"", "\"gap\"", "\"wall_time_s\"",
                          "\"termination\""}) {
    EXPECT_NE(text.find(key), std::string::npos) << key;
  }
  EXPECT_EQ(format_report_row(r), "26.3 26.3 0.0% 0.1");
}

TEST(Schedule, RoundTripAndErrors) {
  const Instance inst = testing::parallel_pumps_instance();
  Schedule s = uniform_schedule(inst, 0);
  s.steps[1][inst.link_index("pu2")] = 1;
  EXPECT_EQ(parse_schedule(inst, render_schedule(inst, s)), s);
  EXPECT_THROW(parse_schedule(inst, R"({"schedule": {"pu1": [0, 1, 0]}})"), ParseError);
  EXPECT_THROW(parse_schedule(inst, R"({"schedule": {"pu1": [0, 1], "pu2": [0, 0, 0]}})"),
               ParseError);
  EXPECT_THROW(parse_schedule(inst, R"({"schedule": {"pu1": [0, 2, 0], "pu2": [0, 0, 0]}})"),
               ParseError);
  EXPECT_THROW(
      parse_schedule(inst, R"({"schedule": {"pu1": [0, 0, 0], "pu2": [0, 0, 0], "p1": [1, 1, 1]}})"),
      ParseError);
}

TEST(Bounds, RoundTripWithInfinities) {
  const Instance inst = testing::two_source_instance();
  BoundsStore b = BoundsStore::from_instance(inst);
  b.nodes[inst.node_index("j1")].h_ub[1] = kInf;
  b.nodes[inst.node_index("j1")].h_lb[0] = -kInf;
  const BoundsStore back = parse_bounds(inst, render_bounds(inst, b));
  EXPECT_TRUE(back == b);
}

TEST(Cuts, RoundTrip) {
  const Instance inst = testing::series_pumps_instance();
  const BoundsStore b = BoundsStore::from_instance(inst);
  ObcgConfig cfg;
  cfg.jobs = 1;
  CutSet cuts = obcg(inst, b, cfg).cuts;
  cuts.append(duality_cuts(inst, b, build_partitions(inst, b, 1.0), DualityMode::kTangents, {0, 1}));
  ASSERT_GT(cuts.size(), 0u);
  ASSERT_GT(cuts.vars.size(), 0u);
  const std::string text = render_cuts(inst, cuts);
  const CutSet back = parse_cuts(inst, text);
  ASSERT_EQ(back.cuts.size(), cuts.cuts.size());
  ASSERT_EQ(back.vars.size(), cuts.vars.size());
  for (size_t i = 0; i < cuts.cuts.size(); ++i) {
    EXPECT_EQ(back.cuts[i].terms, cuts.cuts[i].terms);
    EXPECT_EQ(back.cuts[i].sense, cuts.cuts[i].sense);
    EXPECT_EQ(back.cuts[i].rhs, cuts.cuts[i].rhs);
    EXPECT_EQ(back.cuts[i].family, cuts.cuts[i].family);
    EXPECT_EQ(back.cuts[i].k, cuts.cuts[i].k);
  }
  for (size_t i = 0; i < cuts.vars.size(); ++i) {
    EXPECT_EQ(back.vars[i].key, cuts.vars[i].key);
    EXPECT_EQ(back.vars[i].lb, cuts.vars[i].lb);
    EXPECT_EQ(back.vars[i].ub, cuts.vars[i].ub);
  }
  EXPECT_EQ(render_cuts(inst, back), text);
}

}  // namespace
}  // namespace owf
