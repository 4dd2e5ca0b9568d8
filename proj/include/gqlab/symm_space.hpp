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

#include <functional>
#include <vector>

#include "gqlab/branch.hpp"
#include "gqlab/phase_space.hpp"

namespace gqlab {

class CutLocusError : public std::runtime_error {
 public:
  CutLocusError(const std::string& what, double det)
      : std::runtime_error(what), midpoint_det(det) {}
  double midpoint_det;
};

/// Geodesic t -> exp(tM) J0 exp(-tM) in the space of compatible complex
/// structures.  The normal form holds the U(n) frame rotation `k` and the
/// parameters b (symplectic: diagonal entries; euclidean: one entry per
/// 2x2 rotation block).
class GeodesicPath {
 public:
  GeodesicPath(LinearPhaseSpace space, ComplexStructure j0, RMatrix generator);

  static GeodesicPath from_normal_form(const LinearPhaseSpace& space,
                                       const ComplexStructure& j0,
                                       const CMatrix& k, const RVector& b);

  const LinearPhaseSpace& space() const { return space_; }
  const ComplexStructure& start() const { return j0_; }
  const RMatrix& generator() const { return m_; }
  const CMatrix& start_frame() const { return frame0_; }

  ComplexStructure sample(double t) const;
  /// Transported (smooth) unitary frame exp(tM) E0 at J_t.
  CMatrix moving_frame(double t) const;
  RMatrix group_element(double t) const;
  /// Velocity dJ/dt at parameter t.
  RMatrix velocity(double t) const;

  /// Normal-form parameters b_i, descending (computed on demand).
  const RVector& normal_b() const;
  const CMatrix& normal_k() const;

 private:
  void ensure_normal_form() const;

  LinearPhaseSpace space_;
  ComplexStructure j0_;
  RMatrix m_;
  CMatrix frame0_;
  mutable bool have_normal_ = false;
  mutable CMatrix k_;
  mutable RVector b_;
};

/// det((J0 + J1)/2); positive exactly off the cut locus in the euclidean
/// family, always positive in the symplectic one.
double cut_locus_det(const ComplexStructure& j0, const ComplexStructure& j1);

/// Minimising geodesic with sample(0)=J0, sample(1)=J1.  Throws
/// CutLocusError when J1 lies on the cut locus of J0 (euclidean family).
GeodesicPath geodesic_between(const LinearPhaseSpace& space,
                              const ComplexStructure& j0,
                              const ComplexStructure& j1);

/// Tangent vector dJ at J; dJ anticommutes with J.
struct TangentVector {
  ComplexStructure at;
  RMatrix dj;

  double anticommute_residual() const { return (at.j * dj + dj * at.j).norm(); }
};

/// Tangent vector from a chart direction dZ at the structure of `frame`.
TangentVector tangent_from_chart(const ComplexStructure& j, const CMatrix& frame,
                                 const CMatrix& dz);

/// Frame components of dP = -(i/2) dJ: the matrix X with
/// dP(e-bar_i) = sum_j X(j, i) e_j.  Symmetric for symplectic tangents,
/// antisymmetric for euclidean ones (in a unitary frame).
CMatrix tangent_frame_components(const TangentVector& v, const CMatrix& frame);

struct KahlerValue {
  double eta;    // Riemannian metric of the family
  double sigma;  // Kaehler form of the family
};

/// Metric and Kaehler form values on two tangents at J, restricted to the
/// compatible family of `space`.  Both restrictions are positive definite
/// with the conventions used here.
KahlerValue kahler_eval(const TangentVector& v1, const TangentVector& v2,
                        const LinearPhaseSpace& space);

/// Scalar value of the curvature 2-form of the quantum-bundle connection,
/// sigma_family / 2i.
Complex curvature_2form(const TangentVector& v1, const TangentVector& v2,
                        const LinearPhaseSpace& space);

/// Parallel transport in the tautological bundle along the path, as the
/// matrix of J_{1/2}/i between the deterministic unitary frames at the
/// endpoints.  Unitary.
CMatrix v_bundle_transport(const GeodesicPath& path);
/// Same, but between explicitly supplied frames.
CMatrix v_bundle_transport(const GeodesicPath& path, const CMatrix& frame_start,
                           const CMatrix& frame_end);

/// Pairing of two holomorphic frames: the ratio of
/// conj(mu_left) wedge mu_right to the scaled volume, where mu is the
/// wedge of the frame columns.
Complex frame_pairing(const CMatrix& left, const CMatrix& right);

/// Unitary frame of V_J^{1,0} obtained by projecting a reference frame and
/// re-orthonormalizing in fixed column order.  Continuous in J as long as
/// the projected reference stays nondegenerate (off the cut locus of the
/// reference structure).
CMatrix aligned_frame(const ComplexStructure& j, const LinearPhaseSpace& space,
                      const CMatrix& reference);

enum class HalfFormDirection { kCanonical, kInverseCanonical };

struct HalfFormTransport {
  BranchTrackedScalar coefficient;  // tracked sqrt of the transport det
  Complex pairing;                  // <sqrt(mu_t), sqrt(mu_0)> at t = 1
  double det_power_factor;          // det((J0+J1)/2)^{-1/4 or +1/4}
};

/// Half-form parallel transport along the path.  Direction kCanonical is
/// the bosonic sqrt(K) bundle, kInverseCanonical the fermionic
/// sqrt(K^{-1}).  Throws DegeneratePairingError when the pairing
/// degenerates along the path (reporting the earliest failing t).
HalfFormTransport half_form_transport(const GeodesicPath& path,
                                      HalfFormDirection direction,
                                      int samples = 200);

/// Numerical surface integral of the family Kaehler form over the
/// geodesic triangle patch spanned by (a, b, c), oriented to match the
/// boundary loop a -> b -> c -> a.  `order` is the Gauss-Legendre order
/// per axis.
double triangle_sigma_integral(const LinearPhaseSpace& space,
                               const ComplexStructure& a,
                               const ComplexStructure& b,
                               const ComplexStructure& c, int order = 24);

}  // namespace gqlab
