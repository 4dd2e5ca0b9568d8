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

#include "gqlab/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace gqlab {

std::string format_double_17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out.push_back('\\');
      out.push_back(c);
    } else {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string report_to_json(const VerificationReport& rep) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"suite\": \"" << escape(rep.suite) << "\",\n";
  os << "  \"seed\": " << rep.seed << ",\n";
  os << "  \"checks\": [\n";
  for (std::size_t i = 0; i < rep.checks.size(); ++i) {
    const auto& c = rep.checks[i];
    os << "    {\"id\": \"" << escape(c.id) << "\", \"anchor\": \""
       << escape(c.anchor) << "\", \"measured\": " << format_double_17(c.measured)
       << ", \"expected\": " << format_double_17(c.expected)
       << ", \"provenance\": \"" << escape(c.provenance)
       << "\", \"tol\": " << format_double_17(c.tol)
       << ", \"pass\": " << (c.pass ? "true" : "false")
       << ", \"diagnostic\": " << (c.diagnostic ? "true" : "false") << "}"
       << (i + 1 < rep.checks.size() ? "," : "") << "\n";
  }
  os << "  ],\n";
  os << "  \"timings\": {";
  for (std::size_t i = 0; i < rep.timings.size(); ++i) {
    os << "\"" << escape(rep.timings[i].first)
       << "\": " << format_double_17(rep.timings[i].second)
       << (i + 1 < rep.timings.size() ? ", " : "");
  }
  os << "},\n";
  os << "  \"version\": \"" << escape(rep.version) << "\"\n";
  os << "}\n";
  return os.str();
}

std::string report_to_csv(const VerificationReport& rep) {
  std::ostringstream os;
  os << "id,anchor,measured,expected,provenance,tol,pass,diagnostic\n";
  for (const auto& c : rep.checks) {
    os << c.id << "," << c.anchor << "," << format_double_17(c.measured) << ","
       << format_double_17(c.expected) << "," << c.provenance << ","
       << format_double_17(c.tol) << "," << (c.pass ? "true" : "false") << ","
       << (c.diagnostic ? "true" : "false") << "\n";
  }
  return os.str();
}

VerificationReport report_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  VerificationReport rep;
  rep.suite = j.at("suite").get<std::string>();
  rep.seed = j.at("seed").get<std::uint64_t>();
  rep.version = j.value("version", "");
  for (const auto& cj : j.at("checks")) {
    CheckRecord c;
    c.id = cj.at("id").get<std::string>();
    c.anchor = cj.value("anchor", "");
    c.measured = cj.at("measured").get<double>();
    c.expected = cj.at("expected").get<double>();
    c.provenance = cj.value("provenance", "");
    c.tol = cj.at("tol").get<double>();
    c.pass = cj.at("pass").get<bool>();
    c.diagnostic = cj.value("diagnostic", false);
    rep.checks.push_back(std::move(c));
  }
  if (j.contains("timings"))
    for (auto it = j["timings"].begin(); it != j["timings"].end(); ++it)
      rep.timings.emplace_back(it.key(), it.value().get<double>());
  return rep;
}

CompareResult compare_reports(const VerificationReport& current,
                              const VerificationReport& golden,
                              double tol_scale) {
  if (current.checks.size() != golden.checks.size())
    return {false, "check count differs"};
  for (std::size_t i = 0; i < current.checks.size(); ++i) {
    const auto& a = current.checks[i];
    const auto& b = golden.checks[i];
    if (a.id != b.id) return {false, "check id mismatch at " + a.id};
    const double tol = (b.tol > 0 ? b.tol : 1e-12) * tol_scale;
    if (std::abs(a.measured - b.measured) > tol)
      return {false, "drift beyond tolerance in " + a.id + ": " +
                         format_double_17(a.measured) + " vs " +
                         format_double_17(b.measured)};
  }
  return {true, "ok"};
}

}  // namespace gqlab
