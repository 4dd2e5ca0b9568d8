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
#include <memory>
#include <string>
#include <vector>

#include "gqlab/linalg.hpp"

namespace gqlab {

/// Exterior algebra over N anticommuting generators with dense 2^N complex
/// coefficient storage.  Basis monomials are indexed by bitmasks; the set
/// bits name the generators present, multiplied in ascending index order.
class GrassmannAlgebra {
 public:
  static constexpr int kMaxGenerators = 16;

  /// All generators self-conjugate (real fermionic coordinates).
  static std::shared_ptr<const GrassmannAlgebra> real_generators(
      int count, const std::string& prefix = "t");

  /// n conjugate pairs stored interleaved: p, p-bar, p2, p2-bar, ...
  static std::shared_ptr<const GrassmannAlgebra> complex_pairs(
      int pairs, const std::string& prefix = "th");

  /// Concatenation of two algebras (labels and pairing preserved).
  static std::shared_ptr<const GrassmannAlgebra> tensor(
      const std::shared_ptr<const GrassmannAlgebra>& a,
      const std::shared_ptr<const GrassmannAlgebra>& b);

  GrassmannAlgebra(std::vector<std::string> labels, std::vector<int> conjugate);

  int size() const { return static_cast<int>(labels_.size()); }
  std::uint32_t dim() const { return 1u << labels_.size(); }
  const std::string& label(int i) const { return labels_[static_cast<std::size_t>(i)]; }
  /// Index of the conjugate generator (self for real generators).
  int conjugate_index(int i) const { return conjugate_[static_cast<std::size_t>(i)]; }
  bool compatible_with(const GrassmannAlgebra& other) const;

 private:
  std::vector<std::string> labels_;
  std::vector<int> conjugate_;
};

using AlgebraPtr = std::shared_ptr<const GrassmannAlgebra>;

/// Sign accumulated when moving the generators of `b` past those of `a`
/// while merging two ascending monomials a, b into one ascending monomial.
int merge_sign(std::uint32_t a, std::uint32_t b);

class GrassmannElement {
 public:
  GrassmannElement() = default;
  explicit GrassmannElement(AlgebraPtr algebra);

  static GrassmannElement scalar(AlgebraPtr algebra, Complex c);
  static GrassmannElement generator(AlgebraPtr algebra, int index);

  const AlgebraPtr& algebra() const { return algebra_; }
  Complex coeff(std::uint32_t mask) const { return coeff_[mask]; }
  void set_coeff(std::uint32_t mask, Complex c) { coeff_[mask] = c; }

  GrassmannElement& operator+=(const GrassmannElement& rhs);
  GrassmannElement& operator-=(const GrassmannElement& rhs);
  GrassmannElement& operator*=(Complex c);
  friend GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b) { return a += b; }
  friend GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b) { return a -= b; }
  friend GrassmannElement operator*(Complex c, GrassmannElement a) { return a *= c; }
  GrassmannElement operator*(const GrassmannElement& rhs) const;

  /// Component of homogeneous degree k.
  GrassmannElement degree_part(int k) const;
  int max_degree(double tol = 0.0) const;
  double norm() const;
  bool approx_equal(const GrassmannElement& other, double tol) const;

  /// Wedge by a single generator from the left.
  GrassmannElement wedge_generator(int index) const;
  /// Interior product (left derivative) with respect to one generator.
  GrassmannElement derivative(int index) const;

  const std::vector<Complex>& raw() const { return coeff_; }
  std::vector<Complex>& raw() { return coeff_; }

 private:
  AlgebraPtr algebra_;
  std::vector<Complex> coeff_;
};

/// exp of an element whose lowest nonzero degree is >= 1 plus an optional
/// scalar part (the nilpotent series terminates).
GrassmannElement grassmann_exp(const GrassmannElement& e);

/// Coefficient-wise complex conjugation composed with generator
/// conjugation (masks are remapped through the pairing, keeping ascending
/// order, with the corresponding permutation sign).
GrassmannElement conjugate_element(const GrassmannElement& e);

/// Antilinear star involution: conjugation plus order reversal,
/// (a b ... z)* = z* ... b* a*.
GrassmannElement star_involution(const GrassmannElement& e);

enum class IntegralConvention {
  /// Fermionic-coordinate convention: measure symbols anticommute,
  /// int t1...tk dt1...dtk = (-1)^{k(k-1)/2}.
  kFermionic,
  /// Plain pairing with the wedge of the listed generators.
  kBerezin,
};

/// Integrate out the listed generators (an ordered measure list).
/// The result lives in the same algebra with the listed generators absent.
/// Duplicate generators in the list are an error.
GrassmannElement berezin_integral(const GrassmannElement& e,
                                  const std::vector<int>& generators,
                                  IntegralConvention convention =
                                      IntegralConvention::kFermionic);

/// Integration against the scaled volume element (i^n eps_g for real-mode
/// generators, with the equivalent pair-count scalar for complex pairs).
/// `subset` must be conjugation-closed and is integrated in storage order;
/// the remaining generators survive.
GrassmannElement integrate_eps_tilde(const GrassmannElement& e,
                                     std::uint32_t subset);
/// Full-space version; returns the scalar.
Complex integrate_eps_tilde_full(const GrassmannElement& e);

/// Hodge star for the Euclidean metric in which the generators are
/// orthonormal.  scale_half selects the star of the metric g/2, which is
/// 2^{p-n} times the g-star on degree p (N = 2n generators).
GrassmannElement hodge_star(const GrassmannElement& e, bool scale_half = false);
/// Hodge star for an arbitrary SPD metric on the span of the generators.
GrassmannElement hodge_star(const GrassmannElement& e, const RMatrix& metric,
                            bool scale_half = false);

/// Algebra homomorphism defined on generators: source generator j maps to
/// sum_i map(i, j) * target generator i.  `target` defaults to the source
/// algebra.
GrassmannElement substitute_linear(const GrassmannElement& e, const CMatrix& map,
                                   AlgebraPtr target = nullptr);

/// Finite exponential series of the quadratic form of a g-skew matrix A
/// over real-mode generators: exp((i/2) g(A theta, theta)).  Its integral
/// against eps-tilde equals pf(gA).
GrassmannElement fermionic_gaussian(const RMatrix& a, AlgebraPtr algebra,
                                    const RMatrix* metric = nullptr,
                                    double skew_tol = 1e-10);

/// Degree-2 element of a 2-form given by its coefficient matrix
/// (antisymmetric): sum_{k<l} b(k,l) gen_k gen_l.
GrassmannElement two_form_element(const CMatrix& b, AlgebraPtr algebra);

/// Reproducing kernel exp(theta chi-bar - theta theta-bar / 2
/// - chi chi-bar / 2) over a doubled complex-paired algebra laid out as
/// [theta pairs | chi pairs] with n pairs each.
GrassmannElement standard_bergman_kernel(int n, AlgebraPtr doubled);

}  // namespace gqlab
