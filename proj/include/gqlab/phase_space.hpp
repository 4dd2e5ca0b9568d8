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

#include <optional>
#include <string>

#include "gqlab/linalg.hpp"

namespace gqlab {

enum class FormKind { kSymplectic, kEuclidean };

///  The phase space (V, omega) or (V, g) in a fixed basis.
///
///  Standard models:
///   - symplectic: basis (u_1..u_n, v_1..v_n), omega = [[0, I], [-I, 0]],
///     reference J0 = [[0, -I], [I, 0]].
///   - euclidean: interleaved basis (x_1, y_1, ..., x_n, y_n), g = I,
///     reference J0 = blockdiag([[0, 1], [-1, 0]]), which normalizes
///     pf(J0) = +1; holomorphic frame vectors are (x_k + i y_k)/sqrt(2).
class LinearPhaseSpace {
 public:
  LinearPhaseSpace(FormKind kind, RMatrix form);

  static LinearPhaseSpace standard_symplectic(int n);
  static LinearPhaseSpace standard_euclidean(int n);

  FormKind kind() const { return kind_; }
  const RMatrix& form() const { return form_; }
  int dim() const { return static_cast<int>(form_.rows()); }
  int half_dim() const { return dim() / 2; }
  /// Reference compatible complex structure of the standard model.
  const RMatrix& reference_j() const { return j0_; }

  /// Musical isomorphism x -> form(x, .) as a row-covector matrix action.
  RVector flat(const RVector& x) const { return form_.transpose() * x; }
  RVector sharp(const RVector& alpha) const;

 private:
  FormKind kind_;
  RMatrix form_;
  RMatrix j0_;
};

/// A linear complex structure; J is real with J^2 = -I.
struct ComplexStructure {
  RMatrix j;

  int dim() const { return static_cast<int>(j.rows()); }
  double square_residual() const {
    return (j * j + RMatrix::Identity(j.rows(), j.cols())).norm();
  }
};

/// Projection onto the holomorphic subspace along the antiholomorphic one.
CMatrix projection_p(const ComplexStructure& j);

struct CompatibilityReport {
  bool pass = false;
  double j_square_residual = 0.0;
  double form_invariance_residual = 0.0;
  /// Smallest eigenvalue of the symmetrized form omega(., J.) in the
  /// symplectic case; the orientation pfaffian of J in the euclidean case.
  double positivity_margin = 0.0;
  std::string note;
};

CompatibilityReport check_compatibility(const ComplexStructure& j,
                                        const LinearPhaseSpace& space,
                                        double tol = 1e-10);

/// Chart Z describing V^{1,0} as a graph over the base structure.
struct GraphChart {
  ComplexStructure base;
  CMatrix z;  // n x n
};

class ChartDomainError : public std::runtime_error {
 public:
  explicit ChartDomainError(const std::string& what) : std::runtime_error(what) {}
};

/// h-orthonormal frame columns spanning V_J^{1,0} (2n x n complex).
CMatrix unitary_frame(const ComplexStructure& j, const LinearPhaseSpace& space);

/// Hermitian inner product on V^{1,0}: g(x, conj(y)) or -i omega(x, conj(y)).
Complex hermitian_pairing(const LinearPhaseSpace& space, const CVector& x,
                          const CVector& y);

ComplexStructure chart_to_j(const GraphChart& chart, const LinearPhaseSpace& space);
GraphChart graph_chart(const ComplexStructure& base, const ComplexStructure& j,
                       const LinearPhaseSpace& space, double tol = 1e-10);

/// Seeded random compatible structure k J0 k^{-1} with k = exp(X) for a
/// random Lie algebra element of scale `spread`.
ComplexStructure random_compatible(const LinearPhaseSpace& space, Rng& rng,
                                   double spread = 0.4);

/// Assembles J = i (P - conj(P)) from a holomorphic-subspace basis
/// (columns).  Throws if the basis does not split V^C.
ComplexStructure structure_from_holomorphic_basis(const CMatrix& basis);

}  // namespace gqlab
