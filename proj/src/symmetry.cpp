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

#include "gqlab/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace gqlab {

namespace {

// Plane index pairs of the standard models: symplectic (u_k, v_k) sit at
// (k, n + k); euclidean (x_k, y_k) at (2k, 2k + 1).
std::pair<int, int> plane_indices(const LinearPhaseSpace& space, int k) {
  const int n = space.half_dim();
  if (space.kind() == FormKind::kSymplectic) return {k, n + k};
  return {2 * k, 2 * k + 1};
}

}  // namespace

RMatrix GroupAction::torus_element(double phi) const {
  const int d = space.dim();
  const int n = space.half_dim();
  RMatrix m = RMatrix::Zero(d, d);
  for (int k = 0; k < n; ++k) {
    const auto [a, b] = plane_indices(space, k);
    const double t = weights[static_cast<std::size_t>(k)] * phi;
    // exp(t w J0) restricted to the plane of the k-th complex coordinate.
    const double j01 = space.reference_j()(a, b);  // J0 plane block sign
    m(a, a) = std::cos(t);
    m(b, b) = std::cos(t);
    m(a, b) = j01 > 0 ? std::sin(t) : -std::sin(t);
    m(b, a) = j01 > 0 ? -std::sin(t) : std::sin(t);
  }
  return m;
}

RMatrix GroupAction::torus_generator() const {
  const int d = space.dim();
  const int n = space.half_dim();
  RMatrix m = RMatrix::Zero(d, d);
  for (int k = 0; k < n; ++k) {
    const auto [a, b] = plane_indices(space, k);
    const double w = weights[static_cast<std::size_t>(k)];
    m(a, b) = w * space.reference_j()(a, b);
    m(b, a) = w * space.reference_j()(b, a);
  }
  return m;
}

std::vector<CMatrix> GroupAction::holomorphic_rep(
    const std::vector<double>& phis) const {
  const ComplexStructure j0{space.reference_j()};
  const CMatrix e0 = unitary_frame(j0, space);
  const int n = space.half_dim();
  CMatrix full(space.dim(), space.dim());
  full.leftCols(n) = e0;
  full.rightCols(n) = e0.conjugate();
  const CMatrix full_inv = full.inverse();

  std::vector<RMatrix> reals;
  if (kind == Kind::kFinite) {
    reals = elements;
  } else {
    std::vector<double> angles = phis;
    if (angles.empty()) angles = {0.7853981633974483, 2.399988111420468};
    for (double phi : angles) reals.push_back(torus_element(phi));
  }
  std::vector<CMatrix> out;
  out.reserve(reals.size());
  for (const auto& g : reals) {
    const CMatrix coords = full_inv * g.cast<Complex>() * full;
    if (coords.bottomLeftCorner(n, n).norm() > 1e-9 * (1.0 + coords.norm()))
      throw std::invalid_argument(
          "holomorphic_rep: element does not commute with the reference structure");
    out.push_back(coords.topLeftCorner(n, n));
  }
  return out;
}

GroupAction finite_action(const LinearPhaseSpace& space,
                          std::vector<RMatrix> elements) {
  GroupAction a{GroupAction::Kind::kFinite, space, std::move(elements), {}};
  const RMatrix& f = space.form();
  for (const auto& g : a.elements)
    if ((g.transpose() * f * g - f).norm() > 1e-12 * (1.0 + f.norm()) * 100)
      throw std::invalid_argument("finite_action: element does not preserve the form");
  return a;
}

GroupAction torus_action(const LinearPhaseSpace& space, std::vector<int> weights) {
  if (static_cast<int>(weights.size()) != space.half_dim())
    throw std::invalid_argument("torus_action: one weight per complex coordinate");
  return GroupAction{GroupAction::Kind::kTorus, space, {}, std::move(weights)};
}

InvariantBilinearBasis invariant_bilinear(const GroupAction& action,
                                          BilinearParity parity) {
  const int n = action.space.half_dim();
  InvariantBilinearBasis out;
  out.dimension = 0;

  if (action.kind == GroupAction::Kind::kTorus) {
    for (int i = 0; i < n; ++i)
      for (int j = (parity == BilinearParity::kSymmetric ? i : i + 1); j < n; ++j) {
        if (action.weights[static_cast<std::size_t>(i)] +
                action.weights[static_cast<std::size_t>(j)] !=
            0)
          continue;
        CMatrix b = CMatrix::Zero(n, n);
        b(i, j) = Complex(1, 0);
        if (i != j)
          b(j, i) = parity == BilinearParity::kSymmetric ? Complex(1, 0)
                                                         : Complex(-1, 0);
        out.basis.push_back(b);
      }
    out.dimension = static_cast<int>(out.basis.size());
    return out;
  }

  // Finite group: averaging projector over the matrix space.
  const std::vector<CMatrix> rep = action.holomorphic_rep();
  std::vector<CMatrix> span;
  for (int i = 0; i < n; ++i)
    for (int j = (parity == BilinearParity::kSymmetric ? i : i + 1); j < n; ++j) {
      CMatrix b = CMatrix::Zero(n, n);
      b(i, j) = Complex(1, 0);
      if (i != j)
        b(j, i) = parity == BilinearParity::kSymmetric ? Complex(1, 0)
                                                       : Complex(-1, 0);
      CMatrix avg = CMatrix::Zero(n, n);
      for (const auto& r : rep) avg += r.transpose() * b * r;
      avg /= static_cast<double>(rep.size());
      span.push_back(avg);
    }
  // Rank of the averaged family by Gram-Schmidt on vectorized matrices.
  std::vector<CVector> basis_vecs;
  for (const auto& mtx : span) {
    CVector v = Eigen::Map<const CVector>(mtx.data(), mtx.size());
    for (const auto& u : basis_vecs) v -= u.dot(v) * u;
    if (v.norm() > 1e-9) {
      v.normalize();
      basis_vecs.push_back(v);
      out.basis.push_back(mtx);
    }
  }
  out.dimension = static_cast<int>(out.basis.size());
  return out;
}

ConjugationOperator normalize_conjugation(const std::vector<CMatrix>& rep,
                                          const CMatrix& h, const CMatrix& c0,
                                          int epsilon) {
  const int n = static_cast<int>(h.rows());
  if ((h - h.adjoint()).norm() > 1e-10 * (1.0 + h.norm()))
    throw std::invalid_argument("normalize_conjugation: h must be Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> hs(h);
  if (hs.eigenvalues().minCoeff() <= 0)
    throw std::invalid_argument("normalize_conjugation: h must be positive definite");
  const CMatrix c0c = c0 * c0.conjugate();  // linear matrix of C0^2
  if ((c0c - static_cast<double>(epsilon) * CMatrix::Identity(n, n)).norm() >
      1e-8 * (1.0 + c0c.norm()))
    throw std::invalid_argument("normalize_conjugation: C0^2 != eps id");
  for (const auto& r : rep)
    if ((r * c0 - c0 * r.conjugate()).norm() > 1e-8 * (1.0 + c0.norm()))
      throw std::invalid_argument("normalize_conjugation: C0 is not invariant");

  // beta(x, y) = h(x, C0 y) + eps h(y, C0 x); with h(x, y) = y^H H x the
  // matrix of beta in beta(x, y) = x^T M y.
  const CMatrix m_beta = h.transpose() * c0.conjugate() +
                         static_cast<double>(epsilon) * c0.adjoint() * h;
  // beta(x, y) = h(x, C y) => M = H^T conj(Cmat).
  const CMatrix cmat = (h.transpose().fullPivLu().solve(m_beta)).conjugate();
  // eps C^2 is positive self-adjoint; rescale each eigenspace.
  const CMatrix t = static_cast<double>(epsilon) * cmat * cmat.conjugate();
  Eigen::ComplexEigenSolver<CMatrix> es(t);
  CMatrix scale = CMatrix::Zero(n, n);
  const CMatrix vecs = es.eigenvectors();
  CVector inv_sqrt(n);
  for (int i = 0; i < n; ++i) {
    const double lam = es.eigenvalues()(i).real();
    if (lam <= 0)
      throw LinalgError("normalize_conjugation: eps C^2 not positive");
    inv_sqrt(i) = Complex(1.0 / std::sqrt(lam), 0);
  }
  scale = vecs * inv_sqrt.asDiagonal() * vecs.inverse();
  ConjugationOperator out;
  out.c = scale * cmat;
  out.epsilon = epsilon;
  return out;
}

ConjugationResiduals conjugation_residuals(const std::vector<CMatrix>& rep,
                                           const CMatrix& h,
                                           const ConjugationOperator& c,
                                           Rng& rng, int samples) {
  const int n = static_cast<int>(h.rows());
  ConjugationResiduals res{0, 0, 0};
  const CMatrix sq = c.c * c.c.conjugate();
  res.square =
      (sq - static_cast<double>(c.epsilon) * CMatrix::Identity(n, n)).norm();
  for (const auto& r : rep)
    res.invariance =
        std::max(res.invariance, (r * c.c - c.c * r.conjugate()).norm());
  for (int s = 0; s < samples; ++s) {
    const CVector x = random_complex_matrix(rng, n, 1);
    const CVector y = random_complex_matrix(rng, n, 1);
    const CVector cx = c.apply(x);
    const CVector cy = c.apply(y);
    const Complex lhs = (cy.adjoint() * h * cx)(0, 0);
    const Complex rhs = std::conj((y.adjoint() * h * x)(0, 0));
    res.hermitian = std::max(res.hermitian, std::abs(lhs - rhs));
  }
  return res;
}

int fixed_tangent_dim(const GroupAction& action) {
  const BilinearParity parity = action.space.kind() == FormKind::kSymplectic
                                    ? BilinearParity::kSymmetric
                                    : BilinearParity::kAntisymmetric;
  return invariant_bilinear(action, parity).dimension;
}

PropernessCertificate properness_probe(const GroupAction& action, Rng& rng,
                                       int samples) {
  if (action.space.kind() != FormKind::kSymplectic)
    throw std::invalid_argument("properness_probe: symplectic actions only");
  PropernessCertificate cert;
  const InvariantBilinearBasis inv =
      invariant_bilinear(action, BilinearParity::kSymmetric);
  if (inv.dimension == 0) {
    cert.obstructed = false;
    cert.moment_residual = 0;
    cert.note = "no invariant symmetric form; no obstruction found";
    return cert;
  }

  const int n = action.space.half_dim();
  const int d = action.space.dim();
  const CMatrix beta = inv.basis.front();

  // h0 on V^{1,0} is the identity in the unitary frame; the recipe gives
  // an invariant conjugation from beta on the orthogonal complement of its
  // kernel.
  Eigen::JacobiSVD<CMatrix> svd(beta, Eigen::ComputeFullU | Eigen::ComputeFullV);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-10) ++rank;
  // beta restricted to W' in the basis of the leading right singular
  // vectors; h restricted is the identity.
  const CMatrix wbasis = svd.matrixV().leftCols(rank);
  const CMatrix beta_r = wbasis.transpose() * beta * wbasis;
  // C defined by beta(x, y) = h(x, C y): M = H^T conj(C) with H = I.
  const CMatrix cmat_raw = beta_r.conjugate();
  const CMatrix t = cmat_raw * cmat_raw.conjugate();
  Eigen::ComplexEigenSolver<CMatrix> es(t);
  CVector inv_sqrt(rank);
  for (int i = 0; i < rank; ++i)
    inv_sqrt(i) = Complex(1.0 / std::sqrt(std::max(es.eigenvalues()(i).real(), 1e-30)), 0);
  const CMatrix cmat =
      es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().inverse() *
      cmat_raw;

  // Real structure on the real phase space: R x = real part embedding of
  // C acting on holomorphic coordinates.
  const ComplexStructure j0{action.space.reference_j()};
  const CMatrix e0 = unitary_frame(j0, action.space);
  const CMatrix wcols = e0 * wbasis;  // d x rank holomorphic vectors
  // Sampled points of V'_0 = fixed set of R: x = v + conj(v) with
  // v = C-fixed combination.
  const RMatrix gen = action.kind == GroupAction::Kind::kTorus
                          ? action.torus_generator()
                          : RMatrix::Zero(d, d);
  cert.moment_residual = 0;
  RMatrix pts(d, samples);
  for (int s = 0; s < samples; ++s) {
    CVector z = random_complex_matrix(rng, rank, 1);
    // v projects to the R-fixed real form: v + C v.
    const CVector v = z + cmat * z.conjugate();
    const CVector xc = wcols * v;
    const RVector x = (xc + xc.conjugate()).real() * 0.5;
    pts.col(s) = x;
    if (action.kind == GroupAction::Kind::kTorus) {
      const double mu = 0.5 * (x.transpose() * action.space.form() * (gen * x))(0);
      cert.moment_residual = std::max(cert.moment_residual, std::abs(mu));
    } else {
      for (const auto& g : action.elements) {
        // log of g is not needed; for finite groups check the quadratic
        // invariance combination omega(x, (g - g^{-1}) x) which vanishes
        // identically; report the torus-style residual as zero.
        (void)g;
      }
    }
  }
  cert.obstructed = true;
  cert.real_subspace = pts;
  cert.note = "invariant symmetric form yields a real-type subrepresentation";
  return cert;
}

TorusFixedSet torus_fixed_points(const std::vector<int>& weights, int n) {
  if (static_cast<int>(weights.size()) != n)
    throw std::invalid_argument("torus_fixed_points: need n weights");
  TorusFixedSet out;
  const LinearPhaseSpace space = LinearPhaseSpace::standard_euclidean(n);
  const GroupAction action = torus_action(space, weights);
  out.continuum = fixed_tangent_dim(action) > 0;
  if (out.continuum) return out;

  // Per-plane orientation choices with the total orientation preserved.
  const RMatrix j0 = space.reference_j();
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    if (std::popcount(s) % 2 != 0) continue;  // orientation flip count even
    RMatrix j = RMatrix::Zero(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) {
      const double sign = (s & (1u << k)) ? -1.0 : 1.0;
      j(2 * k, 2 * k + 1) = sign * j0(2 * k, 2 * k + 1);
      j(2 * k + 1, 2 * k) = sign * j0(2 * k + 1, 2 * k);
    }
    out.points.push_back(j);
  }
  return out;
}

IsotypicSplit isotypic_split(const FermionContext& ctx, const GroupAction& action,
                             const ComplexStructure& j) {
  if (action.kind != GroupAction::Kind::kTorus)
    throw std::invalid_argument("isotypic_split: torus actions only here");
  const int n = ctx.n();
  const double phi = 0.37;
  const RMatrix g = action.torus_element(phi);
  if ((g * j.j - j.j * g).norm() > 1e-9)
    throw std::invalid_argument("isotypic_split: J is not fixed by the action");

  // Lift to H0 through the dual action on generators.
  const CMatrix cfr = ctx.reference_frame();
  const CMatrix map = (cfr.inverse() * g.cast<Complex>() * cfr).transpose();
  const HilbertSubspace h = hilbert_subspace(ctx, j);

  IsotypicSplit out;
  out.connection_commute_residual = 0;
  std::map<int, int> dims;
  for (int col = 0; col < h.basis.cols(); ++col) {
    GrassmannElement e = ctx.element_from_coeffs(h.basis.col(col));
    const GrassmannElement ge = substitute_linear(e, map);
    // Each basis state is a weight vector; extract the phase.
    const CVector v = ctx.coeffs_from_element(ge);
    const CVector v0 = h.basis.col(col);
    Complex lam(0, 0);
    double best = -1;
    for (int i = 0; i < v0.size(); ++i)
      if (std::abs(v0(i)) > best) {
        best = std::abs(v0(i));
        lam = v(i) / v0(i);
      }
    const int w = static_cast<int>(std::llround(std::arg(lam) / phi));
    out.weight_of_state.push_back(w);
    dims[w] += 1;
    if ((v - std::pow(Complex(std::cos(phi), std::sin(phi)), w) * v0).norm() >
        1e-8 * v0.norm())
      throw LinalgError("isotypic_split: basis state is not a weight vector");
  }
  for (const auto& [w, dcount] : dims) {
    out.block_weights.push_back(w);
    out.block_dims.push_back(dcount);
  }

  // Connection commutes with the lifted action along invariant tangents.
  const GroupAction eucl_action = action;
  const InvariantBilinearBasis inv =
      invariant_bilinear(eucl_action, BilinearParity::kAntisymmetric);
  if (!inv.basis.empty()) {
    // Lift matrix on the full exterior algebra.
    const int dim = ctx.dim0();
    CMatrix lift = CMatrix::Zero(dim, dim);
    for (std::uint32_t mask = 0; mask < static_cast<std::uint32_t>(dim); ++mask) {
      GrassmannElement mono(ctx.algebra());
      mono.set_coeff(mask, Complex(1, 0));
      const GrassmannElement img = substitute_linear(mono, map);
      for (std::uint32_t t = 0; t < static_cast<std::uint32_t>(dim); ++t)
        lift(t, mask) = img.coeff(t);
    }
    for (const auto& dz : inv.basis) {
      const TangentVector v = tangent_from_chart(j, h.frame, dz);
      const CMatrix a = connection_operator(ctx, h, v);
      out.connection_commute_residual = std::max(
          out.connection_commute_residual, (lift * a - a * lift).norm());
    }
  }
  return out;
}

QuotientRingDescription s1_quotient_ring(int n,
                                         const std::vector<double>& weights) {
  if (2 * n > 12)
    throw std::invalid_argument("s1_quotient_ring: ambient bound exceeded");
  const int nn = 2 * n;
  AlgebraPtr alg = GrassmannAlgebra::real_generators(nn, "t");
  const std::uint32_t dim = 1u << nn;

  // Weight-diagonal complex generators: eta_k = (t_{2k} - i t_{2k+1}),
  // weight +w_k; the conjugate has weight -w_k.
  CMatrix to_eta = CMatrix::Zero(nn, nn);
  for (int k = 0; k < n; ++k) {
    to_eta(2 * k, 2 * k) = Complex(1, 0);
    to_eta(2 * k, 2 * k + 1) = Complex(0, -1);
    to_eta(2 * k + 1, 2 * k) = Complex(1, 0);
    to_eta(2 * k + 1, 2 * k + 1) = Complex(0, 1);
  }
  // Moment element sum_k w_k t_{2k} t_{2k+1}.
  GrassmannElement moment(alg);
  for (int k = 0; k < static_cast<int>(weights.size()); ++k)
    if (weights[static_cast<std::size_t>(k)] != 0)
      moment.set_coeff((1u << (2 * k)) | (1u << (2 * k + 1)),
                       Complex(weights[static_cast<std::size_t>(k)], 0));

  const auto weight_of_mask = [&](std::uint32_t mask) {
    int w = 0;
    for (int k = 0; k < n; ++k) {
      const double wk = k < static_cast<int>(weights.size())
                            ? weights[static_cast<std::size_t>(k)]
                            : 0.0;
      if (mask & (1u << (2 * k))) w += static_cast<int>(wk);
      if (mask & (1u << (2 * k + 1))) w -= static_cast<int>(wk);
    }
    return w;
  };

  // Work in the eta basis where the torus action is diagonal.
  const GrassmannElement moment_eta =
      substitute_linear(moment, to_eta.inverse().transpose());

  std::vector<std::uint32_t> zero_masks;
  for (std::uint32_t mask = 0; mask < dim; ++mask)
    if (weight_of_mask(mask) == 0) zero_masks.push_back(mask);

  // Ideal intersect weight zero: moment wedge (weight-zero monomials).
  std::vector<CVector> rows;
  for (std::uint32_t mask : zero_masks) {
    GrassmannElement mono(alg);
    mono.set_coeff(mask, Complex(1, 0));
    const GrassmannElement prod = moment_eta * mono;
    CVector v(static_cast<Eigen::Index>(zero_masks.size()));
    v.setZero();
    for (std::size_t i = 0; i < zero_masks.size(); ++i)
      v(static_cast<Eigen::Index>(i)) = prod.coeff(zero_masks[i]);
    if (v.norm() > 0) rows.push_back(v);
  }
  int rank = 0;
  {
    std::vector<CVector> basis;
    for (auto v : rows) {
      for (const auto& u : basis) v -= u.dot(v) * u;
      if (v.norm() > 1e-10) {
        v.normalize();
        basis.push_back(v);
        ++rank;
      }
    }
  }

  QuotientRingDescription out;
  out.ambient_dimension = static_cast<int>(dim);
  out.invariant_dimension = static_cast<int>(zero_masks.size()) - rank;
  // The moment element itself has weight zero and lies in the ideal.
  out.relation_residual = 0.0;
  {
    // Residual of reducing the moment element against the ideal rows.
    CVector v(static_cast<Eigen::Index>(zero_masks.size()));
    v.setZero();
    for (std::size_t i = 0; i < zero_masks.size(); ++i)
      v(static_cast<Eigen::Index>(i)) = moment_eta.coeff(zero_masks[i]);
    std::vector<CVector> basis;
    for (auto r : rows) {
      for (const auto& u : basis) r -= u.dot(r) * u;
      if (r.norm() > 1e-10) {
        r.normalize();
        basis.push_back(r);
      }
    }
    for (const auto& u : basis) v -= u.dot(v) * u;
    out.relation_residual = v.norm();
  }

  // r = 1 check: the quotient ring should be the exterior algebra on the
  // remaining 2n - 2 generators.
  int r = 0;
  for (double w : weights)
    if (w != 0) ++r;
  out.matches_reduced_exterior = false;
  if (r == 1)
    out.matches_reduced_exterior =
        out.invariant_dimension == (n >= 1 ? (1 << (2 * n - 2)) : 0);
  return out;
}

RMatrix fermionic_moment_form(const GroupAction& action) {
  if (action.kind != GroupAction::Kind::kTorus)
    throw std::invalid_argument("fermionic_moment_form: torus actions only");
  return 0.5 * (action.space.form() * action.torus_generator());
}

}  // namespace gqlab
