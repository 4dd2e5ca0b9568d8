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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gqlab {

struct CheckRecord {
  std::string id;
  std::string anchor;      // paper anchor or "plumbing"
  double measured = 0.0;
  double expected = 0.0;
  std::string provenance;  // paper | derived | trivial | plumbing | info
  double tol = 0.0;
  bool pass = false;
  bool diagnostic = false;  // informational; never fails the suite
};

struct VerificationReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> checks;
  std::vector<std::pair<std::string, double>> timings;
  std::string version;

  bool overall() const {
    for (const auto& c : checks)
      if (!c.diagnostic && !c.pass) return false;
    return true;
  }
  const CheckRecord* find(const std::string& id) const {
    for (const auto& c : checks)
      if (c.id == id) return &c;
    return nullptr;
  }
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Canonical JSON serialization: fixed key order, floats at 17 significant
/// digits; identical reports serialize to identical bytes.
std::string report_to_json(const VerificationReport& rep);
std::string report_to_csv(const VerificationReport& rep);
VerificationReport report_from_json(const std::string& text);

struct CompareResult {
  bool ok;
  std::string message;
};

/// Golden-file comparison: same check ids in the same order, measured
/// values within per-check tolerance scaled by tol_scale.
CompareResult compare_reports(const VerificationReport& current,
                              const VerificationReport& golden,
                              double tol_scale = 1.0);

std::string format_double_17(double v);

}  // namespace gqlab
