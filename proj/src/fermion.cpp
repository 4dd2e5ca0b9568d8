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

#include "gqlab/fermion.hpp"

#include <cmath>

namespace gqlab {

namespace {

// Pair-interleaved full frame [e_1, e-bar_1, ..., e_n, e-bar_n] from the
// n holomorphic columns.
CMatrix interleaved_frame(const CMatrix& e) {
  const int d = static_cast<int>(e.rows());
  const int n = static_cast<int>(e.cols());
  CMatrix c(d, 2 * n);
  for (int k = 0; k < n; ++k) {
    c.col(2 * k) = e.col(k);
    c.col(2 * k + 1) = e.col(k).conjugate();
  }
  return c;
}

}  // namespace

FermionContext::FermionContext(int n)
    : n_(n), space_(LinearPhaseSpace::standard_euclidean(n)) {
  if (n < 1 || n > 4)
    throw std::invalid_argument("FermionContext: n must be between 1 and 4");
  algebra_ = GrassmannAlgebra::complex_pairs(n, "th");
  real_algebra_ = GrassmannAlgebra::real_generators(2 * n, "t");

  const CMatrix e0 = unitary_frame(ComplexStructure{space_.reference_j()}, space_);
  frame_ = interleaved_frame(e0);
  frame_inv_ = frame_.inverse();

  // Substitution matrices between monomial bases of the two modes.
  const int dim = dim0();
  to_real_ = CMatrix::Zero(dim, dim);
  to_complex_ = CMatrix::Zero(dim, dim);
  {
    // theta^g = sum_a (Cfr^{-1})_{g a} gamma^a
    CMatrix map_cr = frame_inv_.transpose();
    CMatrix map_rc = frame_.transpose();
    for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(dim); ++m) {
      GrassmannElement mono(algebra_);
      mono.set_coeff(m, Complex(1, 0));
      const GrassmannElement img = substitute_linear(mono, map_cr, real_algebra_);
      for (std::uint32_t t = 0; t < static_cast<std::uint32_t>(dim); ++t)
        to_real_(t, m) = img.coeff(t);
      GrassmannElement rmono(real_algebra_);
      rmono.set_coeff(m, Complex(1, 0));
      const GrassmannElement rimg = substitute_linear(rmono, map_rc, algebra_);
      for (std::uint32_t t = 0; t < static_cast<std::uint32_t>(dim); ++t)
        to_complex_(t, m) = rimg.coeff(t);
    }
  }

  // Ambient Hermitian form: diagonal 2^{deg - n} in the real-mode basis.
  CVector weights(dim);
  for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(dim); ++m)
    weights(m) = std::pow(2.0, std::popcount(m) - n_);
  gram_ = to_real_.adjoint() * weights.asDiagonal() * to_real_;

  // Covariant derivatives along the real coordinate directions.
  nabla_basis_.reserve(static_cast<std::size_t>(2 * n_));
  for (int a = 0; a < 2 * n_; ++a) {
    CVector x = CVector::Zero(2 * n_);
    x(a) = Complex(1, 0);
    CMatrix mat = CMatrix::Zero(dim, dim);
    const CVector xi = frame_inv_ * x;
    const GrassmannElement nu = covector_element(x);  // g = identity
    for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(dim); ++m) {
      GrassmannElement mono(algebra_);
      mono.set_coeff(m, Complex(1, 0));
      GrassmannElement out(algebra_);
      for (int g = 0; g < 2 * n_; ++g)
        if (xi(g) != Complex(0, 0)) {
          GrassmannElement d = mono.derivative(g);
          d *= xi(g);
          out += d;
        }
      GrassmannElement wedge = nu * mono;
      wedge *= Complex(-0.5, 0);
      out += wedge;
      for (std::uint32_t t = 0; t < static_cast<std::uint32_t>(dim); ++t)
        mat(t, m) = out.coeff(t);
    }
    nabla_basis_.push_back(std::move(mat));
  }
}

GrassmannElement FermionContext::covector_element(const CVector& alpha) const {
  GrassmannElement out(algebra_);
  const CVector comps = frame_.transpose() * alpha;
  for (int g = 0; g < 2 * n_; ++g)
    out.set_coeff(1u << g, comps(g));
  return out;
}

GrassmannElement FermionContext::coordinate_element(int a) const {
  CVector alpha = CVector::Zero(2 * n_);
  alpha(a) = Complex(1, 0);
  return covector_element(alpha);
}

CMatrix FermionContext::nabla(const CVector& x) const {
  CMatrix out = CMatrix::Zero(dim0(), dim0());
  for (int a = 0; a < 2 * n_; ++a)
    if (x(a) != Complex(0, 0)) out += x(a) * nabla_basis_[static_cast<std::size_t>(a)];
  return out;
}

CMatrix FermionContext::clifford(const CVector& alpha) const {
  // alpha-hat = iota_{sharp(alpha)} + (1/2) alpha wedge; with g = I the
  // sharp is the identity on components.  nabla = iota - (1/2) wedge, so
  // alpha-hat = nabla(alpha) + alpha wedge.
  const int dim = dim0();
  CMatrix out = nabla(alpha);
  const GrassmannElement al = covector_element(alpha);
  for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(dim); ++m) {
    GrassmannElement mono(algebra_);
    mono.set_coeff(m, Complex(1, 0));
    const GrassmannElement w = al * mono;
    for (std::uint32_t t = 0; t < static_cast<std::uint32_t>(dim); ++t)
      out(t, m) += w.coeff(t);
  }
  return out;
}

RMatrix FermionContext::varpi(const ComplexStructure& j) const {
  return j.j.transpose() * space_.form();
}

GrassmannElement FermionContext::gaussian_factor(const ComplexStructure& j) const {
  const CMatrix w_alg =
      frame_.transpose() * varpi(j).cast<Complex>() * frame_;
  GrassmannElement quad = two_form_element(w_alg, algebra_);
  quad *= Complex(0, 0.5);
  return grassmann_exp(quad);
}

GrassmannElement FermionContext::element_from_coeffs(const CVector& v) const {
  GrassmannElement e(algebra_);
  for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(dim0()); ++m)
    e.set_coeff(m, v(m));
  return e;
}

CVector FermionContext::coeffs_from_element(const GrassmannElement& e) const {
  CVector v(dim0());
  for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(dim0()); ++m)
    v(m) = e.coeff(m);
  return v;
}

HilbertSubspace hilbert_subspace(const FermionContext& ctx,
                                 const ComplexStructure& j, const CMatrix& frame) {
  const int n = ctx.n();
  const int dim = ctx.dim0();
  const GrassmannElement vac = ctx.gaussian_factor(j);
  const CMatrix cj = interleaved_frame(frame);
  const CMatrix cj_inv = cj.inverse();

  // Covector elements dual to the frame columns.
  std::vector<GrassmannElement> theta_j;
  theta_j.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    // Row 2k of cj_inv, as a covector in real components.
    CVector alpha(2 * n);
    for (int a = 0; a < 2 * n; ++a) alpha(a) = cj_inv(2 * k, a);
    theta_j.push_back(ctx.covector_element(alpha));
  }

  HilbertSubspace h;
  h.j = j;
  h.frame = frame;
  h.basis = CMatrix::Zero(dim, 1 << n);
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    GrassmannElement mono = GrassmannElement::scalar(ctx.algebra(), Complex(1, 0));
    for (int k = 0; k < n; ++k)
      if (s & (1u << k)) mono = mono * theta_j[static_cast<std::size_t>(k)];
    const GrassmannElement psi = vac * mono;
    for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(dim); ++m)
      h.basis(m, s) = psi.coeff(m);
  }
  return h;
}

HilbertSubspace hilbert_subspace(const FermionContext& ctx,
                                 const ComplexStructure& j) {
  return hilbert_subspace(ctx, j, unitary_frame(j, ctx.space()));
}

CVector bergman_project(const FermionContext& ctx, const HilbertSubspace& h,
                        const CVector& psi) {
  const CMatrix bg = h.basis.adjoint() * ctx.gram();
  const CMatrix gram_sub = bg * h.basis;
  const CVector coords = gram_sub.fullPivLu().solve(bg * psi);
  return h.basis * coords;
}

CVector bergman_project_kernel(const FermionContext& ctx,
                               const HilbertSubspace& h, const CVector& psi) {
  const int n = ctx.n();
  const int nn = 2 * n;
  AlgebraPtr doubled = GrassmannAlgebra::tensor(
      GrassmannAlgebra::complex_pairs(n, "th"),
      GrassmannAlgebra::complex_pairs(n, "ch"));

  const CMatrix cj = interleaved_frame(h.frame);
  const CMatrix cj_inv = cj.inverse();
  // Frame covectors on the theta and chi copies of the doubled algebra.
  auto slot_element = [&](int row, int offset) {
    GrassmannElement out(doubled);
    const CVector comps =
        ctx.reference_frame().transpose() *
        cj_inv.row(row).transpose();
    for (int g = 0; g < nn; ++g) out.set_coeff(1u << (offset + g), comps(g));
    return out;
  };

  GrassmannElement expo(doubled);
  for (int k = 0; k < n; ++k) {
    const GrassmannElement th = slot_element(2 * k, 0);
    const GrassmannElement thb = slot_element(2 * k + 1, 0);
    const GrassmannElement chk = slot_element(2 * k, nn);
    const GrassmannElement chb = slot_element(2 * k + 1, nn);
    expo += th * chb;
    GrassmannElement tt = th * thb;
    tt *= Complex(-0.5, 0);
    GrassmannElement cc = chk * chb;
    cc *= Complex(-0.5, 0);
    expo += cc;
    // theta Gaussian applied after integration; only chi terms and the
    // cross term live under the integral together with psi(chi).
    (void)tt;
  }
  const GrassmannElement kernel = grassmann_exp(expo);

  // psi as an element of the chi copy.
  CMatrix inject = CMatrix::Zero(2 * nn, nn);
  for (int g = 0; g < nn; ++g) inject(nn + g, g) = Complex(1, 0);
  const GrassmannElement psi_chi =
      substitute_linear(ctx.element_from_coeffs(psi), inject, doubled);

  GrassmannElement integrand = kernel * psi_chi;
  const std::uint32_t chi_mask = ((1u << nn) - 1u) << nn;
  const GrassmannElement integrated = integrate_eps_tilde(integrand, chi_mask);

  // Back to the plain algebra and multiply by the Gaussian factor.
  CVector reduced(ctx.dim0());
  for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(ctx.dim0()); ++m)
    reduced(m) = integrated.coeff(m);
  const GrassmannElement result =
      ctx.gaussian_factor(h.j) * ctx.element_from_coeffs(reduced);
  return ctx.coeffs_from_element(result);
}

CMatrix connection_operator(const FermionContext& ctx, const HilbertSubspace& h,
                            const TangentVector& v) {
  const int n = ctx.n();
  const CMatrix x = tangent_frame_components(v, h.frame);
  const CMatrix xp = -x.adjoint();  // (dP)^{ij} in the frame
  std::vector<CMatrix> nab;
  nab.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) nab.push_back(ctx.nabla(h.frame.col(i)));
  CMatrix a = CMatrix::Zero(ctx.dim0(), ctx.dim0());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (xp(i, j) != Complex(0, 0)) a += 0.5 * xp(i, j) * nab[static_cast<std::size_t>(i)] * nab[static_cast<std::size_t>(j)];
  return a;
}

CVector transport_ode(const FermionContext& ctx, const GeodesicPath& path,
                      const CVector& psi0, int steps) {
  if (steps < 4) throw std::invalid_argument("transport_ode: too few steps");
  const double det_end = cut_locus_det(path.start(), path.sample(1.0));
  if (det_end < kCutLocusGuard)
    throw CutLocusError("transport_ode: path reaches the cut locus", det_end);

  const int n = ctx.n();
  const int nn = 2 * n;
  const int dim = ctx.dim0();
  const CMatrix x0 = tangent_frame_components(
      TangentVector{path.start(), path.velocity(0.0)}, path.start_frame());
  const CMatrix xp = -x0.adjoint();

  // Pairwise products of coordinate-direction derivatives.
  std::vector<CMatrix> nn_ab(static_cast<std::size_t>(nn * nn));
  {
    std::vector<CMatrix> nb;
    nb.reserve(static_cast<std::size_t>(nn));
    for (int a = 0; a < nn; ++a) {
      CVector x = CVector::Zero(nn);
      x(a) = Complex(1, 0);
      nb.push_back(ctx.nabla(x));
    }
    for (int a = 0; a < nn; ++a)
      for (int b = 0; b < nn; ++b)
        nn_ab[static_cast<std::size_t>(a * nn + b)] = nb[static_cast<std::size_t>(a)] * nb[static_cast<std::size_t>(b)];
  }

  const auto assemble = [&](double t) {
    const CMatrix et = path.moving_frame(t).leftCols(n);
    const CMatrix y = et * xp * et.transpose();
    CMatrix a = CMatrix::Zero(dim, dim);
    for (int p = 0; p < nn; ++p)
      for (int q = 0; q < nn; ++q)
        if (y(p, q) != Complex(0, 0))
          a += 0.5 * y(p, q) * nn_ab[static_cast<std::size_t>(p * nn + q)];
    return a;
  };

  CVector psi = psi0;
  const double dt = 1.0 / steps;
  for (int i = 0; i < steps; ++i) {
    const double t = i * dt;
    const CMatrix a1 = assemble(t);
    const CMatrix a2 = assemble(t + 0.5 * dt);
    const CMatrix a3 = assemble(t + dt);
    const CVector k1 = -(a1 * psi);
    const CVector k2 = -(a2 * (psi + 0.5 * dt * k1));
    const CVector k3 = -(a2 * (psi + 0.5 * dt * k2));
    const CVector k4 = -(a3 * (psi + dt * k3));
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return psi;
}

TransportOperator transport_bogoliubov(const FermionContext& ctx,
                                       const HilbertSubspace& a,
                                       const HilbertSubspace& b) {
  const double det = cut_locus_det(a.j, b.j);
  if (det < kCutLocusGuard)
    throw CutLocusError("transport_bogoliubov: midpoint determinant degenerate", det);
  const double factor = std::pow(det, -0.25);
  const CMatrix bg = b.basis.adjoint() * ctx.gram();
  const CMatrix gram_sub = bg * b.basis;
  const CMatrix cross = bg * a.basis;
  TransportOperator op;
  op.source = a.j;
  op.target = b.j;
  op.scale_factor = factor;
  op.matrix = factor * gram_sub.fullPivLu().solve(cross);
  op.kind = TransportKind::kBogoliubov;
  return op;
}

CVector transport_bogoliubov_apply(const FermionContext& ctx,
                                   const HilbertSubspace& a,
                                   const HilbertSubspace& b,
                                   const CVector& psi0) {
  const TransportOperator op = transport_bogoliubov(ctx, a, b);
  const CMatrix bg = a.basis.adjoint() * ctx.gram();
  const CVector coords = (bg * a.basis).fullPivLu().solve(bg * psi0);
  return b.basis * (op.matrix * coords);
}

AlgebraPtr coherent_algebra(const FermionContext& ctx) {
  return GrassmannAlgebra::tensor(
      GrassmannAlgebra::complex_pairs(ctx.n(), "th"),
      GrassmannAlgebra::complex_pairs(ctx.n(), "al"));
}

namespace {

// Coordinate functions of the theta copy inside an extended algebra.
std::vector<GrassmannElement> theta_coordinates(const FermionContext& ctx,
                                                const AlgebraPtr& ext) {
  const int nn = 2 * ctx.n();
  std::vector<GrassmannElement> out;
  out.reserve(static_cast<std::size_t>(nn));
  for (int a = 0; a < nn; ++a) {
    GrassmannElement e(ext);
    for (int g = 0; g < nn; ++g) {
      const Complex c = ctx.reference_frame()(a, g);
      if (c != Complex(0, 0)) e.set_coeff(1u << g, c);
    }
    out.push_back(std::move(e));
  }
  return out;
}

GrassmannElement extended_gaussian_factor(const FermionContext& ctx,
                                          const ComplexStructure& j,
                                          const AlgebraPtr& ext) {
  const CMatrix w_alg = ctx.reference_frame().transpose() *
                        ctx.varpi(j).cast<Complex>() * ctx.reference_frame();
  const int nn = 2 * ctx.n();
  GrassmannElement quad(ext);
  for (int k = 0; k < nn; ++k)
    for (int l = k + 1; l < nn; ++l)
      quad.set_coeff((1u << k) | (1u << l), Complex(0, 0.5) * w_alg(k, l));
  return grassmann_exp(quad);
}

}  // namespace

GrassmannElement coherent_state(const FermionContext& ctx,
                                const HilbertSubspace& h) {
  const int n = ctx.n();
  const int nn = 2 * n;
  AlgebraPtr ext = coherent_algebra(ctx);
  const CMatrix cj = interleaved_frame(h.frame);
  const CMatrix cj_inv = cj.inverse();

  GrassmannElement expo(ext);
  for (int k = 0; k < n; ++k) {
    // theta_J^k in the theta copy
    GrassmannElement th(ext);
    const CVector comps =
        ctx.reference_frame().transpose() * cj_inv.row(2 * k).transpose();
    for (int g = 0; g < nn; ++g) th.set_coeff(1u << g, comps(g));
    GrassmannElement thb(ext);
    const CVector compsb =
        ctx.reference_frame().transpose() * cj_inv.row(2 * k + 1).transpose();
    for (int g = 0; g < nn; ++g) thb.set_coeff(1u << g, compsb(g));
    const GrassmannElement abar = GrassmannElement::generator(ext, nn + 2 * k + 1);
    expo += th * abar;
    GrassmannElement tt = th * thb;
    tt *= Complex(-0.5, 0);
    expo += tt;
  }
  return grassmann_exp(expo);
}

GrassmannElement transport_coherent(const FermionContext& ctx,
                                    const GeodesicPath& path,
                                    const HilbertSubspace& start,
                                    const HilbertSubspace& end) {
  const int n = ctx.n();
  const int nn = 2 * n;
  const double det = cut_locus_det(start.j, end.j);
  if (det < kCutLocusGuard)
    throw CutLocusError("transport_coherent: midpoint determinant degenerate", det);
  (void)path;

  AlgebraPtr ext = coherent_algebra(ctx);
  const std::vector<GrassmannElement> theta = theta_coordinates(ctx, ext);

  // alpha-bar vector components in the real basis.
  std::vector<GrassmannElement> abar(static_cast<std::size_t>(nn),
                                     GrassmannElement(ext));
  for (int a = 0; a < nn; ++a) {
    GrassmannElement e(ext);
    for (int k = 0; k < n; ++k) {
      const Complex c = std::conj(start.frame(a, k));
      if (c != Complex(0, 0)) {
        GrassmannElement g = GrassmannElement::generator(ext, nn + 2 * k + 1);
        g *= c;
        e += g;
      }
    }
    abar[static_cast<std::size_t>(a)] = std::move(e);
  }

  const CMatrix p1 = projection_p(end.j);
  const CMatrix w =
      (0.5 * (start.j.j + end.j.j)).cast<Complex>().inverse();

  // u = theta^{1,0}_{J1} - alpha-bar, componentwise elements.
  std::vector<GrassmannElement> u(static_cast<std::size_t>(nn),
                                  GrassmannElement(ext));
  for (int a = 0; a < nn; ++a) {
    GrassmannElement e(ext);
    for (int b = 0; b < nn; ++b)
      if (p1(a, b) != Complex(0, 0)) {
        GrassmannElement t = theta[static_cast<std::size_t>(b)];
        t *= p1(a, b);
        e += t;
      }
    e -= abar[static_cast<std::size_t>(a)];
    u[static_cast<std::size_t>(a)] = std::move(e);
  }
  std::vector<GrassmannElement> wu(static_cast<std::size_t>(nn),
                                   GrassmannElement(ext));
  for (int a = 0; a < nn; ++a) {
    GrassmannElement e(ext);
    for (int b = 0; b < nn; ++b)
      if (w(a, b) != Complex(0, 0)) {
        GrassmannElement t = u[static_cast<std::size_t>(b)];
        t *= w(a, b);
        e += t;
      }
    wu[static_cast<std::size_t>(a)] = std::move(e);
  }
  GrassmannElement quad(ext);
  for (int a = 0; a < nn; ++a)
    quad += u[static_cast<std::size_t>(a)] * wu[static_cast<std::size_t>(a)];
  quad *= Complex(0, 0.5);

  GrassmannElement out = extended_gaussian_factor(ctx, end.j, ext) * grassmann_exp(quad);
  out *= Complex(std::pow(det, 0.25), 0);
  return out;
}

CVector kernel_transport(const FermionContext& ctx, const GeodesicPath& path,
                         const HilbertSubspace& start, const HilbertSubspace& end,
                         const CVector& psi0) {
  const int n = ctx.n();
  const int nn = 2 * n;
  const double det = cut_locus_det(start.j, end.j);
  if (det < kCutLocusGuard)
    throw CutLocusError("kernel_transport: midpoint determinant degenerate", det);
  (void)path;

  AlgebraPtr doubled = GrassmannAlgebra::tensor(
      GrassmannAlgebra::real_generators(nn, "t"),
      GrassmannAlgebra::real_generators(nn, "c"));

  const RMatrix varpi1 = ctx.varpi(end.j);
  const RMatrix varpi0 = ctx.varpi(start.j);
  const CMatrix p1 = projection_p(end.j);

  // Exponent: g(theta^{1,0}_{J1}, chi) + (i/4) varpi1(chi) + (i/4) varpi0(chi),
  // with the fermionic evaluation of a 2-form being twice its element.
  GrassmannElement expo(doubled);
  for (int a = 0; a < nn; ++a)
    for (int b = 0; b < nn; ++b) {
      // sum_a (P1 Theta)^a chi^a ; theta slot a, chi slot nn + b.
      if (p1(a, b) != Complex(0, 0)) {
        GrassmannElement t = GrassmannElement::generator(doubled, b);
        t *= p1(a, b);
        expo += t * GrassmannElement::generator(doubled, nn + a);
      }
    }
  for (int a = 0; a < nn; ++a)
    for (int b = a + 1; b < nn; ++b) {
      const Complex c =
          Complex(0, 0.5) * Complex(varpi1(a, b) + varpi0(a, b), 0);
      if (c != Complex(0, 0))
        expo.set_coeff(((1u << (nn + a)) | (1u << (nn + b))), expo.coeff((1u << (nn + a)) | (1u << (nn + b))) + c);
    }

  // phi(chi): strip the Gaussian factor of the start structure, move to
  // real coordinates, inject into the chi slots.
  GrassmannElement vac_inv(ctx.algebra());
  {
    const CMatrix w_alg = ctx.reference_frame().transpose() *
                          varpi0.cast<Complex>() * ctx.reference_frame();
    GrassmannElement quad = two_form_element(w_alg, ctx.algebra());
    quad *= Complex(0, -0.5);
    vac_inv = grassmann_exp(quad);
  }
  const GrassmannElement phi_cplx = vac_inv * ctx.element_from_coeffs(psi0);
  CVector phi_real = ctx.to_real_mode() * ctx.coeffs_from_element(phi_cplx);
  GrassmannElement phi_elem(GrassmannAlgebra::real_generators(nn, "t"));
  for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(ctx.dim0()); ++m)
    phi_elem.set_coeff(m, phi_real(m));
  CMatrix inject = CMatrix::Zero(2 * nn, nn);
  for (int g = 0; g < nn; ++g) inject(nn + g, g) = Complex(1, 0);
  const GrassmannElement phi_chi = substitute_linear(phi_elem, inject, doubled);

  GrassmannElement integrand = grassmann_exp(expo) * phi_chi;
  const std::uint32_t chi_mask = ((1u << nn) - 1u) << nn;
  GrassmannElement integrated = integrate_eps_tilde(integrand, chi_mask);

  // Prefactor det^{-1/4} e^{(i/4) varpi1(theta)} on the theta slots.
  GrassmannElement vac1(doubled);
  {
    GrassmannElement quad(doubled);
    for (int a = 0; a < nn; ++a)
      for (int b = a + 1; b < nn; ++b)
        quad.set_coeff((1u << a) | (1u << b),
                       Complex(0, 0.5) * Complex(varpi1(a, b), 0));
    vac1 = grassmann_exp(quad);
  }
  GrassmannElement result = vac1 * integrated;
  result *= Complex(std::pow(det, -0.25), 0);

  // Back to the complex-paired ambient coefficients.
  CVector real_coeffs(ctx.dim0());
  for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(ctx.dim0()); ++m)
    real_coeffs(m) = result.coeff(m);
  return ctx.to_complex_mode() * real_coeffs;
}

CorrectedTransport corrected_transport(const FermionContext& ctx,
                                       const GeodesicPath& path,
                                       const HilbertSubspace& start,
                                       const HilbertSubspace& end) {
  CorrectedTransport out;
  out.hilbert_part = transport_bogoliubov(ctx, start, end);
  const HalfFormTransport hf =
      half_form_transport(path, HalfFormDirection::kInverseCanonical);
  out.half_form_coefficient = hf.coefficient.value;
  const double det = cut_locus_det(start.j, end.j);
  out.det_quarter = std::pow(det, 0.25);
  out.det_inverse_quarter = std::pow(det, -0.25);
  out.scale_cancellation = out.det_quarter * out.det_inverse_quarter;
  out.corrected_matrix = out.half_form_coefficient * out.hilbert_part.matrix;
  return out;
}

HolonomyResult holonomy(const FermionContext& ctx,
                        const std::vector<ComplexStructure>& vertices) {
  if (vertices.size() < 2)
    throw std::invalid_argument("holonomy: need at least two vertices");
  const std::size_t m = vertices.size();
  std::vector<HilbertSubspace> subspaces;
  subspaces.reserve(m);
  for (const auto& v : vertices) subspaces.push_back(hilbert_subspace(ctx, v));

  const int fibre = 1 << ctx.n();
  CMatrix u = CMatrix::Identity(fibre, fibre);
  CMatrix u_corr = CMatrix::Identity(fibre, fibre);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t a = i;
    const std::size_t b = (i + 1) % m;
    const GeodesicPath leg =
        geodesic_between(ctx.space(), vertices[a], vertices[b]);
    const TransportOperator op =
        transport_bogoliubov(ctx, subspaces[a], subspaces[b]);
    u = op.matrix * u;
    // Half-form leg coefficient between the vertex frames.  The loop factors
    // chain only when every leg uses the shared per-vertex frames, so the
    // branch is the principal root; legs must stay short.
    const CMatrix tau =
        v_bundle_transport(leg, subspaces[a].frame, subspaces[b].frame);
    const Complex det_tau = tau.determinant();
    if (std::abs(std::arg(det_tau)) > M_PI / 2)
      throw std::invalid_argument(
          "holonomy: leg too long for the principal half-form branch");
    const Complex hf = std::sqrt(det_tau);
    u_corr = (hf * op.matrix) * u_corr;
  }

  HolonomyResult res;
  res.uncorrected = u;
  const Complex tr = u.trace() / static_cast<double>(fibre);
  res.phase = std::arg(tr);
  const Complex eiphi(std::cos(res.phase), std::sin(res.phase));
  res.off_identity = (u - eiphi * CMatrix::Identity(fibre, fibre)).norm();
  res.curvature_integral = 0.0;
  if (m == 3)
    res.curvature_integral =
        0.5 * triangle_sigma_integral(ctx.space(), vertices[0], vertices[1],
                                      vertices[2]);
  res.corrected = u_corr;
  res.corrected_residual = (u_corr - CMatrix::Identity(fibre, fibre)).norm();
  return res;
}

}  // namespace gqlab
