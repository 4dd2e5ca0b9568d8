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

#include <map>
#include <vector>

#include "gqlab/symm_space.hpp"

namespace gqlab {

/// Sparse polynomial in the 2n real coordinates with complex coefficients.
class Polynomial {
 public:
  using Index = std::vector<int>;  // exponent per variable

  Polynomial() = default;
  explicit Polynomial(int vars) : vars_(vars) {}
  static Polynomial constant(int vars, Complex c);
  static Polynomial variable(int vars, int i);
  /// Linear form sum_a c_a x_a.
  static Polynomial linear(const CVector& coeffs);

  int vars() const { return vars_; }
  const std::map<Index, Complex>& terms() const { return terms_; }
  void add_term(const Index& idx, Complex c);

  Polynomial operator+(const Polynomial& rhs) const;
  Polynomial operator-(const Polynomial& rhs) const;
  Polynomial operator*(const Polynomial& rhs) const;
  Polynomial& operator*=(Complex c);

  /// Directional derivative along the complexified vector x.
  Polynomial directional_derivative(const CVector& x) const;
  Polynomial conjugate() const;
  Complex eval(const CVector& x) const;
  int degree() const;
  double norm() const;

 private:
  int vars_ = 0;
  std::map<Index, Complex> terms_;
};

/// psi = p(x) exp(-q_J(x)/4).
struct PolynomialSection {
  ComplexStructure j;
  Polynomial p;
};

/// c exp[lambda(x) + (1/2) x^T q x - (1/4) q_J(x)].
struct GaussianState {
  Complex c;
  CVector lambda;
  CMatrix q;
  ComplexStructure j;
};

class BosonContext {
 public:
  explicit BosonContext(int n);

  int n() const { return n_; }
  const LinearPhaseSpace& space() const { return space_; }
  /// q_J matrix (omega(., J.)), symmetric positive definite.
  RMatrix metric_of(const ComplexStructure& j) const;

  /// Covariant derivative along the (complexified) constant vector x.
  PolynomialSection nabla(const CVector& x, const PolynomialSection& s) const;
  /// Pre-quantum operator of the covector alpha.
  PolynomialSection prequant(const CVector& alpha, const PolynomialSection& s) const;

  /// Exact H0 inner product of two sections over the same J via Wick
  /// enumeration; normalization: the vacuum has norm 1.
  Complex wick_inner(const PolynomialSection& a, const PolynomialSection& b) const;

  /// Closed-form overlap of coherent states with parameters alpha, beta in
  /// V^{1,0}_J (complex 2n-vectors).
  Complex coherent_overlap(const ComplexStructure& j, const CVector& alpha,
                           const CVector& beta) const;

  GaussianState coherent_gaussian(const ComplexStructure& j,
                                  const CVector& alpha) const;
  Complex gaussian_value(const GaussianState& g, const RVector& x) const;
  /// H0 inner product of two Gaussian states (closed form).
  Complex gaussian_inner(const GaussianState& a, const GaussianState& b) const;

  /// Parallel transport of a Gaussian state from its J to j1 via the
  /// closed-form Bergman integral.
  GaussianState gaussian_transport(const GaussianState& g,
                                   const ComplexStructure& j1) const;

  /// Closed-form transported coherent state (the displayed formula).
  GaussianState bogoliubov_coherent(const ComplexStructure& j0,
                                    const ComplexStructure& j1,
                                    const CVector& alpha) const;

  /// Transport of a polynomial section evaluated at sample points by Wick
  /// reduction of the Bergman integral.
  Complex polynomial_transport_value(const ComplexStructure& j0,
                                     const ComplexStructure& j1,
                                     const Polynomial& phi,
                                     const RVector& x) const;

  Complex section_value(const PolynomialSection& s, const RVector& x) const;

 private:
  int n_;
  LinearPhaseSpace space_;
};

struct QuadratureResult {
  std::vector<Complex> values;
  double error_estimate;
  bool converged;
};

/// Gauss-Hermite evaluation of the Bergman-kernel transport integral at
/// the sample points; `nodes` per axis, with a refinement disagreement as
/// the error estimate.
QuadratureResult bergman_transport_quadrature(
    const BosonContext& ctx, const ComplexStructure& j0,
    const ComplexStructure& j1, const Polynomial& phi,
    const std::vector<RVector>& samples, int nodes = 40);

struct BosonHalfFormReport {
  Complex transport_value;   // sqrt(K) transport coefficient
  double pairing_factor;     // det((J0+J1)/2)^{-1/4}
  double hilbert_factor;     // det((J0+J1)/2)^{+1/4}
  double cancellation;       // product of the two quarter powers
};

BosonHalfFormReport half_form_pairing_boson(const BosonContext& ctx,
                                            const ComplexStructure& j0,
                                            const ComplexStructure& j1);

struct BosonHolonomyResult {
  double phase;               // common phase of the transported Gram
  double gram_residual;       // || Gram_out - e^{i phi} Gram_in ||
  double curvature_integral;  // integral of sigma_omega / 2
};

/// Transports a coherent Gram matrix around the triangle loop and compares
/// the result with the curvature integral.
BosonHolonomyResult boson_triangle_holonomy(const BosonContext& ctx,
                                            const ComplexStructure& a,
                                            const ComplexStructure& b,
                                            const ComplexStructure& c,
                                            const std::vector<CVector>& alphas);

}  // namespace gqlab
