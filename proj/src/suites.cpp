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

#include "gqlab/suites.hpp"

#include <json.hpp>

namespace gqlab {

void ScenarioConfig::validate() const {
  if (tol_scale <= 0) throw ConfigError("tol_scale: must be positive");
  if (n < 1 || n > 4) throw ConfigError("n: out of range [1, 4]");
  if (steps < 4) throw ConfigError("steps: must be at least 4");
  for (double b : b_values)
    if (b < 0) throw ConfigError("b_values: entries must be nonnegative");
}

ScenarioConfig config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  ScenarioConfig cfg;
  try {
    cfg.suite = j.value("suite", "");
    cfg.n = j.value("n", 2);
    if (j.contains("b_values")) cfg.b_values = j["b_values"].get<std::vector<double>>();
    cfg.seed = j.value("seed", 42u);
    cfg.steps = j.value("steps", 200);
    cfg.tol_scale = j.value("tol_scale", 1.0);
    cfg.out_dir = j.value("out", "");
    cfg.timings = j.value("timings", false);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string config_to_json(const ScenarioConfig& cfg) {
  nlohmann::json j;
  j["suite"] = cfg.suite;
  j["n"] = cfg.n;
  j["b_values"] = cfg.b_values;
  j["seed"] = cfg.seed;
  j["steps"] = cfg.steps;
  j["tol_scale"] = cfg.tol_scale;
  j["out"] = cfg.out_dir;
  j["timings"] = cfg.timings;
  return j.dump(2);
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "geometry",        "grassmann",      "fermion-transport",
      "fermion-flatness", "boson-transport", "boson-flatness",
      "symmetry",        "cut-locus",      "paper-discrepancies"};
  return names;
}

VerificationReport run_suite(const ScenarioConfig& cfg) {
  cfg.validate();
  VerificationReport rep;
  rep.suite = cfg.suite;
  rep.seed = cfg.seed;
  rep.version = "0.1.0";
  throw ConfigError("suite: unknown suite name '" + cfg.suite + "'");
}

}  // namespace gqlab
