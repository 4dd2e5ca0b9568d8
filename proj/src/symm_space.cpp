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

#include "gqlab/symm_space.hpp"

#include <cmath>

namespace gqlab {

namespace {

// Frame matrix C = [E, conj(E)] and its inverse action.
CMatrix full_frame(const CMatrix& e) {
  const int d = static_cast<int>(e.rows());
  const int n = static_cast<int>(e.cols());
  CMatrix c(d, 2 * n);
  c.leftCols(n) = e;
  c.rightCols(n) = e.conjugate();
  return c;
}

}  // namespace

GeodesicPath::GeodesicPath(LinearPhaseSpace space, ComplexStructure j0,
                           RMatrix generator)
    : space_(std::move(space)), j0_(std::move(j0)), m_(std::move(generator)) {
  if ((m_ * j0_.j + j0_.j * m_).norm() > 1e-8 * (1.0 + m_.norm()))
    throw std::invalid_argument("GeodesicPath: generator must anticommute with J0");
  frame0_ = unitary_frame(j0_, space_);
}

GeodesicPath GeodesicPath::from_normal_form(const LinearPhaseSpace& space,
                                            const ComplexStructure& j0,
                                            const CMatrix& k, const RVector& b) {
  const int n = space.half_dim();
  CMatrix bp = CMatrix::Zero(n, n);
  if (space.kind() == FormKind::kSymplectic) {
    if (b.size() > n) throw std::invalid_argument("normal form: too many parameters");
    for (int i = 0; i < b.size(); ++i) bp(i, i) = Complex(b(i), 0);
  } else {
    if (2 * b.size() > n)
      throw std::invalid_argument("normal form: too many parameters");
    for (int i = 0; i < b.size(); ++i) {
      bp(2 * i, 2 * i + 1) = Complex(b(i), 0);
      bp(2 * i + 1, 2 * i) = Complex(-b(i), 0);
    }
  }
  for (int i = 0; i < b.size(); ++i)
    if (b(i) < 0) throw std::invalid_argument("normal form: b must be nonnegative");
  const CMatrix bk = k * bp * k.transpose();
  const CMatrix e0 = unitary_frame(j0, space);
  const CMatrix c = full_frame(e0);
  CMatrix mf = CMatrix::Zero(2 * n, 2 * n);
  mf.topRightCorner(n, n) = bk;
  mf.bottomLeftCorner(n, n) = bk.conjugate();
  const CMatrix m = c * mf * c.inverse();
  if (m.imag().norm() > 1e-9 * (1.0 + m.norm()))
    throw LinalgError("from_normal_form: generator is not real");
  return GeodesicPath(space, j0, m.real());
}

ComplexStructure GeodesicPath::sample(double t) const {
  const RMatrix g = matrix_exp_real((t * m_).eval());
  const RMatrix ginv = matrix_exp_real((-t * m_).eval());
  return ComplexStructure{g * j0_.j * ginv};
}

CMatrix GeodesicPath::moving_frame(double t) const {
  return matrix_exp_real((t * m_).eval()).cast<Complex>() * frame0_;
}

RMatrix GeodesicPath::group_element(double t) const {
  return matrix_exp_real((t * m_).eval());
}

RMatrix GeodesicPath::velocity(double t) const {
  const RMatrix jt = sample(t).j;
  return m_ * jt - jt * m_;
}

void GeodesicPath::ensure_normal_form() const {
  if (have_normal_) return;
  const int n = space_.half_dim();
  const CMatrix c = full_frame(frame0_);
  const CMatrix mf = c.inverse() * m_.cast<Complex>() * c;
  const CMatrix bp = mf.topRightCorner(n, n);
  CMatrix u;
  RVector s;
  if (space_.kind() == FormKind::kSymplectic) {
    takagi(bp, u, s);
    k_ = u;
    b_ = s;
  } else {
    youla(bp, u, s);
    k_ = u;
    // One parameter per 2x2 block; strip zero padding.
    int r = 0;
    while (r < s.size() && s(r) > 0) ++r;
    b_ = s.head(r);
  }
  have_normal_ = true;
}

const RVector& GeodesicPath::normal_b() const {
  ensure_normal_form();
  return b_;
}

const CMatrix& GeodesicPath::normal_k() const {
  ensure_normal_form();
  return k_;
}

double cut_locus_det(const ComplexStructure& j0, const ComplexStructure& j1) {
  return (0.5 * (j0.j + j1.j)).determinant();
}

GeodesicPath geodesic_between(const LinearPhaseSpace& space,
                              const ComplexStructure& j0,
                              const ComplexStructure& j1) {
  const RMatrix g2 = -j1.j * j0.j;
  CMatrix logg;
  try {
    logg = principal_log(g2.cast<Complex>());
  } catch (const BranchCutError&) {
    throw CutLocusError("geodesic_between: endpoint on the cut locus",
                        cut_locus_det(j0, j1));
  }
  if (logg.imag().norm() > 1e-8 * (1.0 + logg.norm()))
    throw LinalgError("geodesic_between: generator is not real");
  const RMatrix m = 0.5 * logg.real();
  GeodesicPath path(space, j0, m);
  const double residual = (path.sample(1.0).j - j1.j).norm();
  if (residual > 1e-8 * (1.0 + j1.j.norm()))
    throw LinalgError("geodesic_between: endpoint residual too large");
  return path;
}

TangentVector tangent_from_chart(const ComplexStructure& j, const CMatrix& frame,
                                 const CMatrix& dz) {
  const int n = static_cast<int>(frame.cols());
  const CMatrix c = full_frame(frame);
  CMatrix dpf = CMatrix::Zero(2 * n, 2 * n);
  dpf.bottomLeftCorner(n, n) = dz;
  dpf.topRightCorner(n, n) = -dz.conjugate();
  const CMatrix dp = c * dpf * c.inverse();
  const CMatrix dj = Complex(0, 2) * dp;
  if (dj.imag().norm() > 1e-9 * (1.0 + dj.norm()))
    throw LinalgError("tangent_from_chart: tangent is not real");
  return TangentVector{j, dj.real()};
}

CMatrix tangent_frame_components(const TangentVector& v, const CMatrix& frame) {
  const int n = static_cast<int>(frame.cols());
  const CMatrix c = full_frame(frame);
  const CMatrix dp = Complex(0, -0.5) * v.dj.cast<Complex>();
  const CMatrix dpf = c.inverse() * dp * c;
  return dpf.bottomLeftCorner(n, n);  // dZ block: e_i -> X(j,i) e-bar_j
}

namespace {

Complex det_v_curvature(const TangentVector& v1, const TangentVector& v2) {
  // tr(P dP1 dP2 P) - tr(P dP2 dP1 P), the curvature 2-form of det V.
  const CMatrix p = projection_p(v1.at);
  const CMatrix dp1 = Complex(0, -0.5) * v1.dj.cast<Complex>();
  const CMatrix dp2 = Complex(0, -0.5) * v2.dj.cast<Complex>();
  const Complex t12 = (p * dp1 * dp2 * p).trace();
  const Complex t21 = (p * dp2 * dp1 * p).trace();
  return t12 - t21;
}

}  // namespace

KahlerValue kahler_eval(const TangentVector& v1, const TangentVector& v2,
                        const LinearPhaseSpace& space) {
  if (v1.anticommute_residual() > 1e-8 * (1.0 + v1.dj.norm()) ||
      v2.anticommute_residual() > 1e-8 * (1.0 + v2.dj.norm()))
    throw std::invalid_argument("kahler_eval: inputs are not tangent vectors");
  const double fam = space.kind() == FormKind::kSymplectic ? 1.0 : -1.0;
  // sigma = s_family * i * F^{det V}; eta(v1, v2) = sigma(v1, J v2).
  const Complex sig = fam * Complex(0, 1) * det_v_curvature(v1, v2);
  TangentVector jv2{v2.at, v2.dj * v2.at.j};
  const Complex eta = fam * Complex(0, 1) * det_v_curvature(v1, jv2);
  return KahlerValue{eta.real(), sig.real()};
}

Complex curvature_2form(const TangentVector& v1, const TangentVector& v2,
                        const LinearPhaseSpace& space) {
  const KahlerValue kv = kahler_eval(v1, v2, space);
  return Complex(kv.sigma, 0) / Complex(0, 2);
}

CMatrix v_bundle_transport(const GeodesicPath& path, const CMatrix& frame_start,
                           const CMatrix& frame_end) {
  const int n = static_cast<int>(frame_start.cols());
  const CMatrix jh = path.sample(0.5).j.cast<Complex>();
  const CMatrix image = jh * frame_start / Complex(0, 1);
  const CMatrix c1 = full_frame(frame_end);
  const CMatrix coords = c1.fullPivLu().solve(image);
  if (coords.bottomRows(n).norm() > 1e-8 * (1.0 + coords.norm()))
    throw LinalgError("v_bundle_transport: image not holomorphic at endpoint");
  return coords.topRows(n);
}

CMatrix v_bundle_transport(const GeodesicPath& path) {
  const CMatrix frame_end = unitary_frame(path.sample(1.0), path.space());
  return v_bundle_transport(path, path.start_frame(), frame_end);
}

CMatrix aligned_frame(const ComplexStructure& j, const LinearPhaseSpace& space,
                      const CMatrix& reference) {
  const int n = static_cast<int>(reference.cols());
  const CMatrix p = projection_p(j);
  CMatrix frame(reference.rows(), n);
  for (int i = 0; i < n; ++i) {
    CVector v = p * reference.col(i);
    for (int k = 0; k < i; ++k)
      v -= hermitian_pairing(space, v, frame.col(k)) * frame.col(k);
    const double nrm2 = hermitian_pairing(space, v, v).real();
    if (nrm2 < 1e-20)
      throw DegeneratePairingError(
          "aligned_frame: reference frame degenerates under projection");
    frame.col(i) = v / std::sqrt(nrm2);
  }
  return frame;
}

Complex frame_pairing(const CMatrix& left, const CMatrix& right) {
  const int n = static_cast<int>(left.cols());
  CMatrix m(left.rows(), 2 * n);
  m.leftCols(n) = left.conjugate();
  m.rightCols(n) = right;
  Complex det = m.determinant();
  // Normalize by the frame-oriented volume, which differs from the
  // coordinate-oriented one by the pair-interleaving sign; a unitary frame
  // then pairs with itself to +1.
  for (int i = 0; i < n; ++i) det /= Complex(0, 1);
  if (((n * (n - 1) / 2) % 2) != 0) det = -det;
  return det;
}

HalfFormTransport half_form_transport(const GeodesicPath& path,
                                      HalfFormDirection direction,
                                      int samples) {
  const bool euclidean = path.space().kind() == FormKind::kEuclidean;
  if (euclidean && direction == HalfFormDirection::kCanonical)
    throw std::invalid_argument("half_form_transport: euclidean family uses K^{-1/2}");
  if (!euclidean && direction == HalfFormDirection::kInverseCanonical)
    throw std::invalid_argument("half_form_transport: symplectic family uses K^{1/2}");

  std::vector<Complex> tau_dets(static_cast<std::size_t>(samples) + 1);
  std::vector<Complex> pairings(static_cast<std::size_t>(samples) + 1);
  double earliest_degenerate = -1.0;
  for (int i = 0; i <= samples; ++i) {
    const double t = static_cast<double>(i) / samples;
    const ComplexStructure jt = path.sample(t);
    // Frame family aligned with the start frame: continuous exactly off
    // the cut locus, unlike the pivoted deterministic frame.
    const CMatrix ft = aligned_frame(jt, path.space(), path.start_frame());
    const CMatrix jh = path.sample(0.5 * t).j.cast<Complex>();
    const CMatrix image = jh * path.start_frame() / Complex(0, 1);
    const CMatrix coords = full_frame(ft).fullPivLu().solve(image);
    const int n = static_cast<int>(ft.cols());
    tau_dets[static_cast<std::size_t>(i)] = coords.topRows(n).determinant();
    const Complex pairing = frame_pairing(path.moving_frame(t), path.start_frame());
    pairings[static_cast<std::size_t>(i)] = pairing;
    if (earliest_degenerate < 0 && std::abs(pairing) < 1e-10)
      earliest_degenerate = t;
  }
  if (earliest_degenerate >= 0)
    throw DegeneratePairingError(
        "half_form_transport: pairing degenerates at t = " +
        std::to_string(earliest_degenerate));

  BranchTrackedScalar tau_root = tracked_root(tau_dets, 2);
  BranchTrackedScalar pair_root = tracked_root(pairings, 2);
  const double det_mid = cut_locus_det(path.start(), path.sample(1.0));
  if (det_mid <= 0)
    throw DegeneratePairingError("half_form_transport: endpoint pairing degenerate");
  const double power = euclidean ? 0.25 : -0.25;
  HalfFormTransport out;
  // sqrt(K^{-1}) transports by the tracked root of the V-transport
  // determinant; sqrt(K) by its inverse.
  out.coefficient = tau_root;
  out.pairing = pair_root.value;
  if (!euclidean) {
    out.coefficient.value = Complex(1, 0) / tau_root.value;
    for (auto& h : out.coefficient.history) h = Complex(1, 0) / h;
    out.pairing = Complex(1, 0) / pair_root.value;
  }
  out.det_power_factor = std::pow(det_mid, power);
  return out;
}

double triangle_sigma_integral(const LinearPhaseSpace& space,
                               const ComplexStructure& a,
                               const ComplexStructure& b,
                               const ComplexStructure& c, int order) {
  // Gauss-Legendre nodes/weights on [0, 1] via Golub-Welsch.
  Eigen::SelfAdjointEigenSolver<RMatrix> es;
  RMatrix jac = RMatrix::Zero(order, order);
  for (int i = 1; i < order; ++i) {
    const double beta = i / std::sqrt(4.0 * i * i - 1.0);
    jac(i, i - 1) = beta;
    jac(i - 1, i) = beta;
  }
  es.compute(jac);
  RVector nodes(order), weights(order);
  for (int i = 0; i < order; ++i) {
    nodes(i) = 0.5 * (es.eigenvalues()(i) + 1.0);
    weights(i) = es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
  }

  const GeodesicPath far_edge = geodesic_between(space, b, c);
  const double h = 1e-5;
  double total = 0.0;
  for (int i = 0; i < order; ++i) {
    const double s = nodes(i);
    // Geodesics from a to points of the far edge; ds tangent by central
    // difference of the spray map.
    const ComplexStructure target = far_edge.sample(s);
    const GeodesicPath ray = geodesic_between(space, a, target);
    const GeodesicPath ray_p =
        geodesic_between(space, a, far_edge.sample(std::min(1.0, s + h)));
    const GeodesicPath ray_m =
        geodesic_between(space, a, far_edge.sample(std::max(0.0, s - h)));
    const double ds_span = std::min(1.0, s + h) - std::max(0.0, s - h);
    for (int j = 0; j < order; ++j) {
      const double u = nodes(j);
      const ComplexStructure jt = ray.sample(u);
      const RMatrix du = ray.velocity(u);
      const RMatrix ds = (ray_p.sample(u).j - ray_m.sample(u).j) / ds_span;
      const KahlerValue kv = kahler_eval(TangentVector{jt, ds},
                                         TangentVector{jt, du}, space);
      total += weights(i) * weights(j) * kv.sigma;
    }
  }
  return total;
}

}  // namespace gqlab
