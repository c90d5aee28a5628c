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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "owf/bounds.hpp"
#include "owf/cuts.hpp"
#include "owf/hydraulics.hpp"
#include "owf/network.hpp"

namespace owf {

constexpr int kSchemaVersion = 1;

/** Malformed input. `context` names the field or line. */
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& context, const std::string& what)
      : std::runtime_error(context.empty() ? what : context + ": " + what), context_(context) {}
  const std::string& context() const { return context_; }

 private:
  std::string context_;
};

/** Well-formed input that describes an invalid instance. */
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report)
      : std::runtime_error(report.to_string()), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/**
 * Parses an instance document without validating it. Price profiles
 * referenced by file name are resolved against `base_dir`.
 */
Instance parse_instance(const std::string& text, const std::string& base_dir = "");

/** parse_instance followed by validate; throws ValidationError on violations. */
Instance load_instance(const std::string& text, const std::string& base_dir = "");

/** Reads and loads an instance file. */
Instance load_instance_file(const std::string& path);

/** Instance document with every per-step vector written out. */
std::string render_instance(const Instance& instance);

/**
 * Prices from `time,energy_price` CSV text, one row per step. Times must be
 * strictly increasing and match the instance's step start times.
 */
std::vector<double> load_price_profile(const std::string& csv_text, const Instance& instance);

/** Outcome of a solve in the stable document layout. */
struct ResultDocument {
  std::string instance;
  std::optional<double> upper_bound;  // absent without an incumbent
  double lower_bound = 0.0;
  double wall_time_s = 0.0;
  std::string termination;
  long nodes = 0;
  std::map<std::string, std::vector<int>> schedule;        // control id -> status per step
  std::map<std::string, std::vector<double>> tank_heads;   // tank id -> head over K+1 indices
  std::optional<double> baseline_bound;                    // for the improvement metric

  bool operator==(const ResultDocument&) const = default;
};

/** Deterministic JSON text; includes `gap` and, with a baseline, `improvement_pct`. */
std::string write_result(const ResultDocument& result);
ResultDocument parse_result(const std::string& text);

/** Gap as a percentage with one decimal ("0.0%"), or "-" without an upper bound. */
std::string format_gap(double lower_bound, std::optional<double> upper_bound);

/** One line "UB LB Gap Time" in report layout; absent values are dashes. */
std::string format_report_row(const ResultDocument& result);

std::string render_schedule(const Instance& instance, const Schedule& schedule);
/** Accepts a schedule document or a result document carrying a schedule. */
Schedule parse_schedule(const Instance& instance, const std::string& text);

std::string render_bounds(const Instance& instance, const BoundsStore& bounds);
BoundsStore parse_bounds(const Instance& instance, const std::string& text);

std::string render_cuts(const Instance& instance, const CutSet& cuts);
CutSet parse_cuts(const Instance& instance, const std::string& text);

std::string render_simulation(const Instance& instance, const Schedule& schedule,
                              const SimulationResult& simulation);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace owf
