// Copyright 2026 gqlab contributors
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

#include <string>
#include <vector>

#include "gqlab/report.hpp"

namespace gqlab {

struct ScenarioConfig {
  std::string suite;
  int n = 2;
  std::vector<double> b_values = {0.3, 0.8, 1.2};
  std::uint64_t seed = 42;
  int steps = 200;            // ODE/sampling steps per unit parameter
  double tol_scale = 1.0;
  std::string out_dir;
  bool timings = false;

  void validate() const;
};

/// Parses a JSON config document; throws ConfigError with field-level
/// messages on invalid input.
ScenarioConfig config_from_json(const std::string& text);
std::string config_to_json(const ScenarioConfig& cfg);

const std::vector<std::string>& suite_names();

/// Runs one named suite deterministically for the given config.
VerificationReport run_suite(const ScenarioConfig& cfg);

}  // namespace gqlab
