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

#include <stdexcept>
#include <vector>

#include "gqlab/linalg.hpp"

namespace gqlab {

/// A scalar obtained by continuous continuation along a sampled path.
/// `history` keeps the accepted samples so consumers can audit that no
/// branch jump occurred.
struct BranchTrackedScalar {
  Complex value{1.0, 0.0};
  std::vector<Complex> history;
};

class DegeneratePairingError : public std::runtime_error {
 public:
  explicit DegeneratePairingError(const std::string& what)
      : std::runtime_error(what) {}
};

class BranchResolutionError : public std::runtime_error {
 public:
  explicit BranchResolutionError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Continuous branch of the order-th root along a path of complex values.
/// The branch starts at the positive real root of the first value (which
/// must have non-negative real part and small imaginary part relative to
/// the continuity threshold -- in practice paths start at 1).
///
/// `continuity_fraction`: consecutive accepted roots must differ by less
/// than this fraction of the current magnitude, otherwise a
/// BranchResolutionError asks the caller to refine sampling.  A zero (or
/// near-zero) value on the path raises DegeneratePairingError.
BranchTrackedScalar tracked_root(const std::vector<Complex>& path, int order,
                                 double continuity_fraction = 0.5,
                                 double zero_tol = 1e-14);

}  // namespace gqlab
