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

#include "gqlab/branch.hpp"

#include <cmath>

namespace gqlab {

BranchTrackedScalar tracked_root(const std::vector<Complex>& path, int order,
                                 double continuity_fraction, double zero_tol) {
  if (order != 2 && order != 4)
    throw std::invalid_argument("tracked_root: order must be 2 or 4");
  if (path.empty())
    throw std::invalid_argument("tracked_root: empty path");

  BranchTrackedScalar out;
  out.history.reserve(path.size());

  const Complex v0 = path.front();
  if (std::abs(v0) <= zero_tol)
    throw DegeneratePairingError("tracked_root: path starts at zero");
  // Positive real root of the starting value.
  Complex root = std::pow(v0, 1.0 / order);
  if (std::abs(std::arg(v0)) > 1e-8)
    throw BranchResolutionError(
        "tracked_root: path must start at a positive real value");
  root = Complex(std::pow(std::abs(v0), 1.0 / order), 0.0);
  out.history.push_back(root);

  for (std::size_t i = 1; i < path.size(); ++i) {
    const Complex v = path[i];
    if (std::abs(v) <= zero_tol)
      throw DegeneratePairingError("tracked_root: value on path is zero");
    // Candidates are the order-th roots of v; continue with the closest.
    const Complex principal = std::pow(v, 1.0 / order);
    Complex best = principal;
    double best_dist = std::abs(principal - root);
    for (int k = 1; k < order; ++k) {
      const double phi = 2.0 * M_PI * k / order;
      const Complex cand = principal * Complex(std::cos(phi), std::sin(phi));
      const double d = std::abs(cand - root);
      if (d < best_dist) {
        best_dist = d;
        best = cand;
      }
    }
    if (best_dist >= continuity_fraction * std::abs(root))
      throw BranchResolutionError(
          "tracked_root: branch jump detected; refine the sampling");
    root = best;
    out.history.push_back(root);
  }
  out.value = root;
  return out;
}

}  // namespace gqlab
