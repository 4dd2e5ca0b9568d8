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

#include "gqlab/phase_space.hpp"

#include <cmath>

namespace gqlab {

LinearPhaseSpace::LinearPhaseSpace(FormKind kind, RMatrix form)
    : kind_(kind), form_(std::move(form)) {
  const int d = static_cast<int>(form_.rows());
  if (form_.cols() != d || d % 2 != 0)
    throw std::invalid_argument("LinearPhaseSpace: form must be square, even dim");
  if (kind_ == FormKind::kSymplectic) {
    if ((form_ + form_.transpose()).norm() > 1e-12 * (1.0 + form_.norm()))
      throw std::invalid_argument("LinearPhaseSpace: symplectic form must be antisymmetric");
    if (std::abs(form_.determinant()) < 1e-12)
      throw std::invalid_argument("LinearPhaseSpace: symplectic form is degenerate");
  } else {
    if ((form_ - form_.transpose()).norm() > 1e-12 * (1.0 + form_.norm()))
      throw std::invalid_argument("LinearPhaseSpace: metric must be symmetric");
    if (min_symmetric_eigenvalue(form_) <= 0.0)
      throw std::invalid_argument("LinearPhaseSpace: metric must be positive definite");
  }
  const int n = d / 2;
  j0_ = RMatrix::Zero(d, d);
  if (kind_ == FormKind::kSymplectic) {
    for (int k = 0; k < n; ++k) {
      j0_(n + k, k) = 1.0;
      j0_(k, n + k) = -1.0;
    }
  } else {
    for (int k = 0; k < n; ++k) {
      j0_(2 * k + 1, 2 * k) = -1.0;
      j0_(2 * k, 2 * k + 1) = 1.0;
    }
  }
}

LinearPhaseSpace LinearPhaseSpace::standard_symplectic(int n) {
  RMatrix omega = RMatrix::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    omega(k, n + k) = 1.0;
    omega(n + k, k) = -1.0;
  }
  return LinearPhaseSpace(FormKind::kSymplectic, omega);
}

LinearPhaseSpace LinearPhaseSpace::standard_euclidean(int n) {
  return LinearPhaseSpace(FormKind::kEuclidean, RMatrix::Identity(2 * n, 2 * n));
}

RVector LinearPhaseSpace::sharp(const RVector& alpha) const {
  return form_.transpose().fullPivLu().solve(alpha);
}

CMatrix projection_p(const ComplexStructure& j) {
  const int d = j.dim();
  return 0.5 * (CMatrix::Identity(d, d) - Complex(0, 1) * j.j.cast<Complex>());
}

CompatibilityReport check_compatibility(const ComplexStructure& j,
                                        const LinearPhaseSpace& space,
                                        double tol) {
  CompatibilityReport rep;
  rep.j_square_residual = j.square_residual();
  const RMatrix& f = space.form();
  rep.form_invariance_residual = (j.j.transpose() * f * j.j - f).norm();
  if (space.kind() == FormKind::kSymplectic) {
    const RMatrix q = f * j.j;  // omega(., J.)
    rep.positivity_margin = min_symmetric_eigenvalue(q);
    rep.pass = rep.j_square_residual <= tol * 100 &&
               rep.form_invariance_residual <= tol * 100 &&
               rep.positivity_margin > tol;
    if (rep.positivity_margin <= tol) rep.note = "omega(., J.) is not positive definite";
  } else {
    // Orientation: the sign of pf(gJ) distinguishes the two components of
    // the space of metric-compatible structures; the reference has +1.
    double orient = 0.0;
    try {
      orient = pfaffian((f * j.j).cast<Complex>(), 1e-8).real();
    } catch (const LinalgError&) {
      orient = 0.0;
    }
    rep.positivity_margin = orient;
    rep.pass = rep.j_square_residual <= tol * 100 &&
               rep.form_invariance_residual <= tol * 100 && orient > 0.0;
    if (orient <= 0.0) rep.note = "orientation reversed relative to the reference";
  }
  return rep;
}

Complex hermitian_pairing(const LinearPhaseSpace& space, const CVector& x,
                          const CVector& y) {
  const CMatrix f = space.form().cast<Complex>();
  const Complex b = x.transpose() * f * y.conjugate();
  return space.kind() == FormKind::kSymplectic ? Complex(0, -1) * b : b;
}

CMatrix unitary_frame(const ComplexStructure& j, const LinearPhaseSpace& space) {
  const int d = j.dim();
  const int n = d / 2;
  const CMatrix p = projection_p(j);
  CMatrix frame(d, n);
  int got = 0;
  for (int col = 0; col < d && got < n; ++col) {
    CVector v = p.col(col);
    for (int k = 0; k < got; ++k)
      v -= hermitian_pairing(space, v, frame.col(k)) * frame.col(k);
    const Complex nrm2 = hermitian_pairing(space, v, v);
    if (nrm2.real() > 1e-10) {
      frame.col(got++) = v / std::sqrt(nrm2.real());
    }
  }
  if (got != n)
    throw LinalgError("unitary_frame: projection did not span the subspace");
  return frame;
}

ComplexStructure structure_from_holomorphic_basis(const CMatrix& basis) {
  const int d = static_cast<int>(basis.rows());
  const int n = static_cast<int>(basis.cols());
  if (2 * n != d)
    throw std::invalid_argument("structure_from_holomorphic_basis: need 2n x n");
  CMatrix full(d, d);
  full.leftCols(n) = basis;
  full.rightCols(n) = basis.conjugate();
  Eigen::FullPivLU<CMatrix> lu(full);
  if (!lu.isInvertible())
    throw ChartDomainError("holomorphic basis does not split V^C");
  CMatrix diag = CMatrix::Zero(d, d);
  for (int k = 0; k < n; ++k) diag(k, k) = Complex(1, 0);
  const CMatrix p = full * diag * lu.inverse();
  const CMatrix jc = Complex(0, 1) * (p - p.conjugate());
  if (jc.imag().norm() > 1e-9 * (1.0 + jc.norm()))
    throw LinalgError("structure_from_holomorphic_basis: result is not real");
  return ComplexStructure{jc.real()};
}

ComplexStructure chart_to_j(const GraphChart& chart, const LinearPhaseSpace& space) {
  const CMatrix e0 = unitary_frame(chart.base, space);
  const CMatrix basis = e0 + e0.conjugate() * chart.z;
  return structure_from_holomorphic_basis(basis);
}

GraphChart graph_chart(const ComplexStructure& base, const ComplexStructure& j,
                       const LinearPhaseSpace& space, double tol) {
  const int d = base.dim();
  const int n = d / 2;
  const CMatrix e0 = unitary_frame(base, space);
  const CMatrix ej = unitary_frame(j, space);
  CMatrix full(d, d);
  full.leftCols(n) = e0;
  full.rightCols(n) = e0.conjugate();
  const CMatrix coords = full.fullPivLu().solve(ej);
  const CMatrix a = coords.topRows(n);
  const CMatrix c = coords.bottomRows(n);
  Eigen::FullPivLU<CMatrix> lu(a);
  lu.setThreshold(tol);
  if (!lu.isInvertible())
    throw ChartDomainError("graph_chart: J0 + J is singular (complementary stratum)");
  return GraphChart{base, c * lu.inverse()};
}

ComplexStructure random_compatible(const LinearPhaseSpace& space, Rng& rng,
                                   double spread) {
  const int d = space.dim();
  RMatrix x;
  if (space.kind() == FormKind::kSymplectic) {
    // X in sp(2n): omega X symmetric.
    RMatrix s = random_real_matrix(rng, d, d);
    s = (0.5 * (s + s.transpose())).eval();
    x = space.form().transpose().fullPivLu().solve(s);
  } else {
    x = random_real_skew(rng, d);
  }
  x *= spread / std::sqrt(static_cast<double>(d));
  const RMatrix k = matrix_exp_real(x);
  const RMatrix kinv = matrix_exp_real((-x).eval());
  return ComplexStructure{k * space.reference_j() * kinv};
}

}  // namespace gqlab
