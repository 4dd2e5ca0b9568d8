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
#include <vector>

#include "gqlab/grassmann.hpp"
#include "gqlab/symm_space.hpp"

namespace gqlab {

/// Pre-quantum data of the fermionic system (V, g) at fixed n: the
/// 4^n-dimensional space of "functions" on Pi V, operator matrices in the
/// monomial basis of the complex-paired algebra, and the ambient Hermitian
/// form (antilinear in the first argument).
class FermionContext {
 public:
  explicit FermionContext(int n);

  int n() const { return n_; }
  int dim0() const { return 1 << (2 * n_); }
  const LinearPhaseSpace& space() const { return space_; }
  const AlgebraPtr& algebra() const { return algebra_; }
  const AlgebraPtr& real_mode_algebra() const { return real_algebra_; }
  /// Frame columns (e_1, e-bar_1, ..., e_n, e-bar_n) of the reference J0.
  const CMatrix& reference_frame() const { return frame_; }

  /// Element of a complexified covector (components in the real basis).
  GrassmannElement covector_element(const CVector& alpha) const;
  /// Element of the coordinate function dual to the real basis vector a.
  GrassmannElement coordinate_element(int a) const;

  /// Covariant derivative along the (complexified) vector x, as a matrix
  /// on H0.
  CMatrix nabla(const CVector& x) const;
  /// Pre-quantum Clifford operator of the covector alpha.
  CMatrix clifford(const CVector& alpha) const;

  /// Hermitian Gram matrix of the monomial basis: <psi, psi'> =
  /// psi-coeffs^H G psi'-coeffs.
  const CMatrix& gram() const { return gram_; }
  Complex inner(const CVector& a, const CVector& b) const {
    return (a.adjoint() * gram_ * b)(0, 0);
  }

  /// Substitution matrices between complex-paired and real-mode monomial
  /// coefficients.
  const CMatrix& to_real_mode() const { return to_real_; }
  const CMatrix& to_complex_mode() const { return to_complex_; }

  /// exp((i/2) varpi_J) as an element (the Gaussian factor of H_J).
  GrassmannElement gaussian_factor(const ComplexStructure& j) const;
  /// The 2-form varpi_J = g(J., .) in real coordinates.
  RMatrix varpi(const ComplexStructure& j) const;

  GrassmannElement element_from_coeffs(const CVector& v) const;
  CVector coeffs_from_element(const GrassmannElement& e) const;

 private:
  int n_;
  LinearPhaseSpace space_;
  AlgebraPtr algebra_;
  AlgebraPtr real_algebra_;
  CMatrix frame_;      // 2n x 2n frame columns, pair-interleaved
  CMatrix frame_inv_;
  CMatrix gram_;
  CMatrix to_real_, to_complex_;
  std::vector<CMatrix> nabla_basis_;  // along real coordinate directions
};

struct HilbertSubspace {
  ComplexStructure j;
  CMatrix frame;  // 2n x n unitary frame used for the monomial states
  CMatrix basis;  // 4^n x 2^n coefficient columns, monomial mask order
};

/// Quantum subspace H_J with its monomial basis e^{(i/2) varpi_J} wedge
/// (frame covector monomials).
HilbertSubspace hilbert_subspace(const FermionContext& ctx,
                                 const ComplexStructure& j);
HilbertSubspace hilbert_subspace(const FermionContext& ctx,
                                 const ComplexStructure& j, const CMatrix& frame);

/// Orthogonal projection onto H_J through the subspace Gram system.
CVector bergman_project(const FermionContext& ctx, const HilbertSubspace& h,
                        const CVector& psi);
/// Same projection evaluated through the Berezin kernel integral.
CVector bergman_project_kernel(const FermionContext& ctx,
                               const HilbertSubspace& h, const CVector& psi);

/// Connection operator A^H at J for the tangent dJ, assembled in the
/// frame of `h`; psi-dot = -A psi.
CMatrix connection_operator(const FermionContext& ctx, const HilbertSubspace& h,
                            const TangentVector& v);

enum class TransportKind { kOde, kBogoliubov, kKernel, kCoherent, kCorrected };

struct TransportOperator {
  ComplexStructure source;
  ComplexStructure target;
  CMatrix matrix;  // 2^n x 2^n between subspace bases
  double scale_factor;
  TransportKind kind;
};

/// Minimum midpoint determinant before transports refuse (cut-locus
/// guard); probes below it must use the diagnostic entry points.
constexpr double kCutLocusGuard = 1e-8;

/// RK4 integration of the parallel-transport equation; returns the ambient
/// endpoint state.
CVector transport_ode(const FermionContext& ctx, const GeodesicPath& path,
                      const CVector& psi0, int steps);

/// Rescaled projection between the subspace bases of the endpoint
/// structures based at frames `a` and `b`.
TransportOperator transport_bogoliubov(const FermionContext& ctx,
                                       const HilbertSubspace& a,
                                       const HilbertSubspace& b);
/// Ambient-state application of the rescaled projection.
CVector transport_bogoliubov_apply(const FermionContext& ctx,
                                   const HilbertSubspace& a,
                                   const HilbertSubspace& b,
                                   const CVector& psi0);

/// Fermionic coherent state over the algebra extended by n auxiliary odd
/// parameter pairs (alpha, alpha-bar); n <= 4.
GrassmannElement coherent_state(const FermionContext& ctx,
                                const HilbertSubspace& h);
/// The extended algebra: [theta pairs | alpha pairs].
AlgebraPtr coherent_algebra(const FermionContext& ctx);

/// Closed-form parallel transport of the coherent state along the path.
GrassmannElement transport_coherent(const FermionContext& ctx,
                                    const GeodesicPath& path,
                                    const HilbertSubspace& start,
                                    const HilbertSubspace& end);

/// Transport through the Bergman-kernel Berezin integral in real fermionic
/// coordinates.
CVector kernel_transport(const FermionContext& ctx, const GeodesicPath& path,
                         const HilbertSubspace& start, const HilbertSubspace& end,
                         const CVector& psi0);

struct CorrectedTransport {
  TransportOperator hilbert_part;   // includes det^{-1/4}
  Complex half_form_coefficient;    // tracked sqrt of the V-transport det
  double det_quarter;               // det((J0+J1)/2)^{1/4}
  double det_inverse_quarter;       // det((J0+J1)/2)^{-1/4}
  double scale_cancellation;        // det^{-1/4} * det^{+1/4}
  CMatrix corrected_matrix;         // hilbert part times half-form scalar
};

CorrectedTransport corrected_transport(const FermionContext& ctx,
                                       const GeodesicPath& path,
                                       const HilbertSubspace& start,
                                       const HilbertSubspace& end);

struct HolonomyResult {
  CMatrix uncorrected;       // composed loop operator on the start fibre
  double off_identity;       // || U - e^{i phi} I ||
  double phase;              // extracted phi
  double curvature_integral; // integral of sigma_family / 2 over the patch
  CMatrix corrected;         // with half-form factors
  double corrected_residual; // || U_corrected - I ||
};

/// Holonomy of the piecewise-geodesic loop through the given vertices
/// (closed automatically).  The curvature integral is evaluated for
/// triangle loops.
HolonomyResult holonomy(const FermionContext& ctx,
                        const std::vector<ComplexStructure>& vertices);

}  // namespace gqlab
