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

#include <cstdint>
#include <ostream>
#include <string>

#include "owf/network.hpp"

namespace owf {

/** Process exit codes, one per outcome class. */
enum ExitCode : int {
  kExitOk = 0,
  kExitInvalid = 1,          // validation failure or infeasible schedule
  kExitUsage = 2,            // IO, parse or usage error
  kExitInfeasible = 3,       // infeasibility certified by the relaxation
  kExitNoIncumbent = 4,      // a limit was hit before any feasible schedule was found
};

/** 64-bit FNV-1a. */
std::uint64_t fnv1a(const std::string& text, std::uint64_t seed = 14695981039346656037ull);

/** Cache directory name for preprocessing artifacts of an instance under a configuration. */
std::string cache_key(const Instance& instance, const std::string& config);

/** Runs the command line; argv[0] is the program name. */
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace owf
