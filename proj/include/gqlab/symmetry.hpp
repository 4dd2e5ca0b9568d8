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

#include <vector>

#include "gqlab/fermion.hpp"
#include "gqlab/phase_space.hpp"

namespace gqlab {

/// Group action on the phase space: either an explicit finite element list
/// or a torus with integer weights on the complex coordinates of the
/// reference structure.
struct GroupAction {
  enum class Kind { kFinite, kTorus };
  Kind kind;
  LinearPhaseSpace space;
  std::vector<RMatrix> elements;  // finite: all group elements
  std::vector<int> weights;       // torus

  /// Real matrix of a torus element at angle phi.
  RMatrix torus_element(double phi) const;
  /// Lie algebra generator of the torus action.
  RMatrix torus_generator() const;
  /// Representation matrices on V^{1,0} of the reference structure, for a
  /// finite list or for sampled torus angles.
  std::vector<CMatrix> holomorphic_rep(const std::vector<double>& phis = {}) const;
};

GroupAction finite_action(const LinearPhaseSpace& space,
                          std::vector<RMatrix> elements);
GroupAction torus_action(const LinearPhaseSpace& space, std::vector<int> weights);

enum class BilinearParity { kSymmetric, kAntisymmetric };

struct InvariantBilinearBasis {
  int dimension;  // complex dimension
  std::vector<CMatrix> basis;
};

/// Basis of invariant (anti)symmetric complex bilinear forms on V^{1,0}
/// of the reference structure.
InvariantBilinearBasis invariant_bilinear(const GroupAction& action,
                                          BilinearParity parity);

/// Antilinear operator x -> c * conj(x) with c the stored matrix.
struct ConjugationOperator {
  CMatrix c;
  int epsilon;  // +1 real, -1 quaternionic

  CVector apply(const CVector& x) const { return c * x.conjugate(); }
};

struct ConjugationResiduals {
  double square;      // ||C^2 - eps I||
  double invariance;  // max over elements of ||rho C - C rho||
  double hermitian;   // max |h(Cx, Cy) - conj(h(x, y))|
};

/// Normalizes an invariant conjugation against an invariant Hermitian form
/// h (represented by a positive matrix H with h(x, y) = y^H H x).
ConjugationOperator normalize_conjugation(const std::vector<CMatrix>& rep,
                                          const CMatrix& h, const CMatrix& c0,
                                          int epsilon);
ConjugationResiduals conjugation_residuals(const std::vector<CMatrix>& rep,
                                           const CMatrix& h,
                                           const ConjugationOperator& c,
                                           Rng& rng, int samples = 20);

/// Complex dimension of the invariant tangent space at the reference
/// structure: (Sym^2 V^{1,0})^K for the symplectic family,
/// (Lambda^2 V^{1,0})^K for the euclidean one.
int fixed_tangent_dim(const GroupAction& action);

struct PropernessCertificate {
  bool obstructed;          // true: explicit non-properness witness found
  RMatrix real_subspace;    // columns span V'_0 (real) when obstructed
  double moment_residual;   // max |mu| over sampled witness points
  std::string note;
};

/// Contrapositive properness test for a symplectic action: a positive
/// fixed-tangent dimension yields a real-type subrepresentation on whose
/// real points the moment map vanishes.
PropernessCertificate properness_probe(const GroupAction& action, Rng& rng,
                                       int samples = 25);

struct TorusFixedSet {
  bool continuum;
  std::vector<RMatrix> points;  // fixed structures when discrete
};

/// Fixed compatible complex structures of a torus action on the euclidean
/// space, by brute-force enumeration of per-plane orientations.
TorusFixedSet torus_fixed_points(const std::vector<int>& weights, int n);

struct IsotypicSplit {
  std::vector<int> weight_of_state;  // per H_J basis state (torus)
  std::vector<int> block_dims;       // dimensions grouped by weight
  std::vector<int> block_weights;
  double connection_commute_residual;
};

/// Weight decomposition of the fibre H_J under a torus action fixing J,
/// with the commutation check of the lifted action against the connection
/// along invariant tangent directions.
IsotypicSplit isotypic_split(const FermionContext& ctx, const GroupAction& action,
                             const ComplexStructure& j);

struct QuotientRingDescription {
  int ambient_dimension;       // 2^{2n}
  int invariant_dimension;     // dim of weight-zero subspace of the quotient
  double relation_residual;    // the moment element reduces to zero
  bool matches_reduced_exterior;  // r = 1: exterior algebra on the rest
};

/// Coordinate ring of the fermionic S^1 quotient: invariant part of the
/// exterior algebra modulo the ideal generated by the moment element.
QuotientRingDescription s1_quotient_ring(int n, const std::vector<double>& weights);

/// Fermionic moment map components: the 2-form (1/2) g(A., .) for the
/// torus generator A.
RMatrix fermionic_moment_form(const GroupAction& action);

}  // namespace gqlab
