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

#include "gqlab/grassmann.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace gqlab {

namespace {

int popcount(std::uint32_t m) { return std::popcount(m); }

// Bits of m strictly below position k.
int bits_below(std::uint32_t m, int k) {
  return popcount(m & ((1u << k) - 1u));
}

}  // namespace

GrassmannAlgebra::GrassmannAlgebra(std::vector<std::string> labels,
                                   std::vector<int> conjugate)
    : labels_(std::move(labels)), conjugate_(std::move(conjugate)) {
  if (labels_.size() != conjugate_.size())
    throw std::invalid_argument("GrassmannAlgebra: label/conjugate size mismatch");
  if (static_cast<int>(labels_.size()) > kMaxGenerators)
    throw std::invalid_argument("GrassmannAlgebra: too many generators");
  for (std::size_t i = 0; i < conjugate_.size(); ++i) {
    const int c = conjugate_[i];
    if (c < 0 || c >= static_cast<int>(conjugate_.size()) ||
        conjugate_[static_cast<std::size_t>(c)] != static_cast<int>(i))
      throw std::invalid_argument("GrassmannAlgebra: pairing is not an involution");
  }
}

std::shared_ptr<const GrassmannAlgebra> GrassmannAlgebra::real_generators(
    int count, const std::string& prefix) {
  std::vector<std::string> labels;
  std::vector<int> conj;
  for (int i = 0; i < count; ++i) {
    labels.push_back(prefix + std::to_string(i + 1));
    conj.push_back(i);
  }
  return std::make_shared<GrassmannAlgebra>(std::move(labels), std::move(conj));
}

std::shared_ptr<const GrassmannAlgebra> GrassmannAlgebra::complex_pairs(
    int pairs, const std::string& prefix) {
  std::vector<std::string> labels;
  std::vector<int> conj;
  for (int i = 0; i < pairs; ++i) {
    labels.push_back(prefix + std::to_string(i + 1));
    labels.push_back(prefix + std::to_string(i + 1) + "_bar");
    conj.push_back(2 * i + 1);
    conj.push_back(2 * i);
  }
  return std::make_shared<GrassmannAlgebra>(std::move(labels), std::move(conj));
}

std::shared_ptr<const GrassmannAlgebra> GrassmannAlgebra::tensor(
    const AlgebraPtr& a, const AlgebraPtr& b) {
  std::vector<std::string> labels;
  std::vector<int> conj;
  for (int i = 0; i < a->size(); ++i) {
    labels.push_back(a->label(i));
    conj.push_back(a->conjugate_index(i));
  }
  for (int i = 0; i < b->size(); ++i) {
    labels.push_back(b->label(i));
    conj.push_back(b->conjugate_index(i) + a->size());
  }
  return std::make_shared<GrassmannAlgebra>(std::move(labels), std::move(conj));
}

bool GrassmannAlgebra::compatible_with(const GrassmannAlgebra& other) const {
  return labels_ == other.labels_ && conjugate_ == other.conjugate_;
}

int merge_sign(std::uint32_t a, std::uint32_t b) {
  // Parity of pairs (x in a, y in b) with x > y.
  int inv = 0;
  std::uint32_t bb = b;
  while (bb) {
    const int y = std::countr_zero(bb);
    bb &= bb - 1;
    inv += popcount(a >> (y + 1));
  }
  return (inv & 1) ? -1 : 1;
}

GrassmannElement::GrassmannElement(AlgebraPtr algebra)
    : algebra_(std::move(algebra)), coeff_(algebra_->dim(), Complex(0, 0)) {}

GrassmannElement GrassmannElement::scalar(AlgebraPtr algebra, Complex c) {
  GrassmannElement e(std::move(algebra));
  e.coeff_[0] = c;
  return e;
}

GrassmannElement GrassmannElement::generator(AlgebraPtr algebra, int index) {
  GrassmannElement e(std::move(algebra));
  e.coeff_[1u << index] = Complex(1, 0);
  return e;
}

GrassmannElement& GrassmannElement::operator+=(const GrassmannElement& rhs) {
  if (!algebra_->compatible_with(*rhs.algebra_))
    throw std::invalid_argument("grassmann: algebra mismatch");
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += rhs.coeff_[i];
  return *this;
}

GrassmannElement& GrassmannElement::operator-=(const GrassmannElement& rhs) {
  if (!algebra_->compatible_with(*rhs.algebra_))
    throw std::invalid_argument("grassmann: algebra mismatch");
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] -= rhs.coeff_[i];
  return *this;
}

GrassmannElement& GrassmannElement::operator*=(Complex c) {
  for (auto& x : coeff_) x *= c;
  return *this;
}

GrassmannElement GrassmannElement::operator*(const GrassmannElement& rhs) const {
  if (!algebra_->compatible_with(*rhs.algebra_))
    throw std::invalid_argument("grassmann: algebra mismatch");
  GrassmannElement out(algebra_);
  std::vector<std::pair<std::uint32_t, Complex>> lhs_nz, rhs_nz;
  for (std::uint32_t m = 0; m < coeff_.size(); ++m)
    if (coeff_[m] != Complex(0, 0)) lhs_nz.emplace_back(m, coeff_[m]);
  for (std::uint32_t m = 0; m < rhs.coeff_.size(); ++m)
    if (rhs.coeff_[m] != Complex(0, 0)) rhs_nz.emplace_back(m, rhs.coeff_[m]);
  for (const auto& [ma, ca] : lhs_nz)
    for (const auto& [mb, cb] : rhs_nz) {
      if (ma & mb) continue;
      out.coeff_[ma | mb] +=
          static_cast<double>(merge_sign(ma, mb)) * ca * cb;
    }
  return out;
}

GrassmannElement GrassmannElement::degree_part(int k) const {
  GrassmannElement out(algebra_);
  for (std::uint32_t m = 0; m < coeff_.size(); ++m)
    if (popcount(m) == k) out.coeff_[m] = coeff_[m];
  return out;
}

int GrassmannElement::max_degree(double tol) const {
  int deg = 0;
  for (std::uint32_t m = 0; m < coeff_.size(); ++m)
    if (std::abs(coeff_[m]) > tol) deg = std::max(deg, popcount(m));
  return deg;
}

double GrassmannElement::norm() const {
  double s = 0;
  for (const auto& c : coeff_) s += std::norm(c);
  return std::sqrt(s);
}

bool GrassmannElement::approx_equal(const GrassmannElement& other,
                                    double tol) const {
  if (!algebra_->compatible_with(*other.algebra_)) return false;
  for (std::uint32_t m = 0; m < coeff_.size(); ++m)
    if (std::abs(coeff_[m] - other.coeff_[m]) > tol) return false;
  return true;
}

GrassmannElement GrassmannElement::wedge_generator(int index) const {
  GrassmannElement out(algebra_);
  const std::uint32_t bit = 1u << index;
  for (std::uint32_t m = 0; m < coeff_.size(); ++m) {
    if (coeff_[m] == Complex(0, 0) || (m & bit)) continue;
    const int sign = merge_sign(bit, m);  // generator multiplied from the left
    out.coeff_[m | bit] += static_cast<double>(sign) * coeff_[m];
  }
  return out;
}

GrassmannElement GrassmannElement::derivative(int index) const {
  GrassmannElement out(algebra_);
  const std::uint32_t bit = 1u << index;
  for (std::uint32_t m = 0; m < coeff_.size(); ++m) {
    if (coeff_[m] == Complex(0, 0) || !(m & bit)) continue;
    const int sign = (bits_below(m, index) & 1) ? -1 : 1;
    out.coeff_[m & ~bit] += static_cast<double>(sign) * coeff_[m];
  }
  return out;
}

GrassmannElement grassmann_exp(const GrassmannElement& e) {
  const Complex c0 = e.coeff(0);
  GrassmannElement nil = e;
  nil.set_coeff(0, Complex(0, 0));
  GrassmannElement out = GrassmannElement::scalar(e.algebra(), Complex(1, 0));
  GrassmannElement term = GrassmannElement::scalar(e.algebra(), Complex(1, 0));
  const int max_terms = e.algebra()->size() + 1;
  for (int k = 1; k <= max_terms; ++k) {
    term = term * nil;
    term *= Complex(1.0 / k, 0);
    if (term.norm() == 0.0) break;
    out += term;
  }
  out *= std::exp(c0);
  return out;
}

GrassmannElement conjugate_element(const GrassmannElement& e) {
  const auto& alg = e.algebra();
  GrassmannElement out(alg);
  const int n = alg->size();
  for (std::uint32_t m = 0; m < e.raw().size(); ++m) {
    const Complex c = e.coeff(m);
    if (c == Complex(0, 0)) continue;
    // Map each generator to its conjugate, keeping the original order, then
    // count the inversions created by reordering ascending.
    std::vector<int> seq;
    for (int i = 0; i < n; ++i)
      if (m & (1u << i)) seq.push_back(alg->conjugate_index(i));
    int inv = 0;
    for (std::size_t a = 0; a < seq.size(); ++a)
      for (std::size_t b = a + 1; b < seq.size(); ++b)
        if (seq[a] > seq[b]) ++inv;
    std::uint32_t target = 0;
    for (int g : seq) target |= 1u << g;
    out.set_coeff(target, out.coeff(target) +
                              ((inv & 1) ? -1.0 : 1.0) * std::conj(c));
  }
  return out;
}

GrassmannElement star_involution(const GrassmannElement& e) {
  GrassmannElement out = conjugate_element(e);
  for (std::uint32_t m = 0; m < out.raw().size(); ++m) {
    const int k = popcount(m);
    if ((k * (k - 1) / 2) & 1) out.set_coeff(m, -out.coeff(m));
  }
  return out;
}

GrassmannElement berezin_integral(const GrassmannElement& e,
                                  const std::vector<int>& generators,
                                  IntegralConvention convention) {
  std::uint32_t seen = 0;
  for (int g : generators) {
    if (seen & (1u << g))
      throw std::invalid_argument("berezin_integral: duplicate generator");
    seen |= 1u << g;
  }
  GrassmannElement out = e;
  // Fermionic measure symbols integrate right-to-left, each acting as a
  // left derivative.
  for (auto it = generators.rbegin(); it != generators.rend(); ++it)
    out = out.derivative(*it);
  if (convention == IntegralConvention::kBerezin) {
    const int k = static_cast<int>(generators.size());
    if ((k * (k - 1) / 2) & 1) out *= Complex(-1, 0);
  }
  return out;
}

namespace {

// Number of conjugate pairs covered by a conjugation-closed mask, and
// whether the mask consists of real generators only.
void analyze_subset(const GrassmannAlgebra& alg, std::uint32_t subset,
                    int& pairs, bool& all_real) {
  pairs = 0;
  all_real = true;
  for (int i = 0; i < alg.size(); ++i) {
    if (!(subset & (1u << i))) continue;
    const int c = alg.conjugate_index(i);
    if (c == i) continue;
    all_real = false;
    if (!(subset & (1u << c)))
      throw std::invalid_argument(
          "integrate_eps_tilde: subset is not conjugation-closed");
    if (c > i) ++pairs;
  }
  if (all_real) {
    if (popcount(subset) % 2 != 0)
      throw std::invalid_argument(
          "integrate_eps_tilde: real subset must have even size");
    pairs = popcount(subset) / 2;
  }
}

}  // namespace

GrassmannElement integrate_eps_tilde(const GrassmannElement& e,
                                     std::uint32_t subset) {
  const auto& alg = e.algebra();
  int pairs = 0;
  bool all_real = true;
  analyze_subset(*alg, subset, pairs, all_real);
  // i^n for real coordinates; the complex-pair storage order absorbs a
  // further i^n, giving (-1)^n.
  Complex scale(1, 0);
  for (int i = 0; i < pairs; ++i) scale *= all_real ? Complex(0, 1) : Complex(-1, 0);

  GrassmannElement out(alg);
  for (std::uint32_t m = 0; m < e.raw().size(); ++m) {
    const Complex c = e.coeff(m);
    if (c == Complex(0, 0)) continue;
    if ((m & subset) != subset) continue;
    const std::uint32_t rest = m & ~subset;
    out.set_coeff(rest, out.coeff(rest) +
                            scale * static_cast<double>(merge_sign(rest, subset)) * c);
  }
  return out;
}

Complex integrate_eps_tilde_full(const GrassmannElement& e) {
  const std::uint32_t full = e.algebra()->dim() - 1u;
  return integrate_eps_tilde(e, full).coeff(0);
}

GrassmannElement hodge_star(const GrassmannElement& e, bool scale_half) {
  const auto& alg = e.algebra();
  const int nn = alg->size();
  if (scale_half && nn % 2 != 0)
    throw std::invalid_argument("hodge_star: scale-half needs even dimension");
  const std::uint32_t full = alg->dim() - 1u;
  GrassmannElement out(alg);
  for (std::uint32_t m = 0; m < e.raw().size(); ++m) {
    const Complex c = e.coeff(m);
    if (c == Complex(0, 0)) continue;
    const std::uint32_t comp = full & ~m;
    double factor = merge_sign(m, comp);
    if (scale_half) factor *= std::pow(2.0, popcount(m) - nn / 2);
    out.set_coeff(comp, out.coeff(comp) + factor * c);
  }
  return out;
}

GrassmannElement hodge_star(const GrassmannElement& e, const RMatrix& metric,
                            bool scale_half) {
  const int nn = e.algebra()->size();
  if (metric.rows() != nn || metric.cols() != nn)
    throw std::invalid_argument("hodge_star: metric dimension mismatch");
  if (metric.isIdentity(1e-14)) return hodge_star(e, scale_half);
  // Rotate into an orthonormal frame, star there, rotate back.  With
  // metric G = L L^T, covector components transform by L^T into the
  // orthonormal frame.
  Eigen::LLT<RMatrix> llt(metric);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("hodge_star: metric is not positive definite");
  const RMatrix l = llt.matrixL();
  const CMatrix to_ortho = l.transpose().cast<Complex>();
  const CMatrix from_ortho = to_ortho.inverse();
  GrassmannElement rotated = substitute_linear(e, to_ortho);
  GrassmannElement starred = hodge_star(rotated, scale_half);
  // Scale by sqrt(det G) so that star(1) is the metric volume element.
  starred *= Complex(std::sqrt(metric.determinant()), 0);
  return substitute_linear(starred, from_ortho);
}

GrassmannElement substitute_linear(const GrassmannElement& e, const CMatrix& map,
                                   AlgebraPtr target) {
  const auto& src = e.algebra();
  AlgebraPtr dst = target ? target : src;
  if (map.cols() != src->size() || map.rows() != dst->size())
    throw std::invalid_argument("substitute_linear: map dimension mismatch");
  std::vector<GrassmannElement> images;
  images.reserve(static_cast<std::size_t>(src->size()));
  for (int j = 0; j < src->size(); ++j) {
    GrassmannElement img(dst);
    for (int i = 0; i < dst->size(); ++i)
      if (map(i, j) != Complex(0, 0)) {
        GrassmannElement g = GrassmannElement::generator(dst, i);
        g *= map(i, j);
        img += g;
      }
    images.push_back(std::move(img));
  }
  GrassmannElement out(dst);
  for (std::uint32_t m = 0; m < e.raw().size(); ++m) {
    const Complex c = e.coeff(m);
    if (c == Complex(0, 0)) continue;
    GrassmannElement term = GrassmannElement::scalar(dst, c);
    for (int i = 0; i < src->size(); ++i)
      if (m & (1u << i)) term = term * images[static_cast<std::size_t>(i)];
    out += term;
  }
  return out;
}

GrassmannElement fermionic_gaussian(const RMatrix& a, AlgebraPtr algebra,
                                    const RMatrix* metric, double skew_tol) {
  const int nn = algebra->size();
  if (a.rows() != nn || a.cols() != nn)
    throw std::invalid_argument("fermionic_gaussian: dimension mismatch");
  RMatrix ga = metric ? (*metric * a).eval() : a;
  if ((ga + ga.transpose()).norm() > skew_tol * (1.0 + ga.norm()))
    throw LinalgError("fermionic_gaussian: matrix is not skew with respect to g");
  // exp((i/2) g(A theta, theta)) with the quadratic form evaluated so that
  // the block [[0,b],[-b,0]] integrates to b.
  GrassmannElement quad(algebra);
  for (int k = 0; k < nn; ++k)
    for (int l = k + 1; l < nn; ++l)
      quad.set_coeff((1u << k) | (1u << l), Complex(0, -1) * ga(k, l));
  return grassmann_exp(quad);
}

GrassmannElement two_form_element(const CMatrix& b, AlgebraPtr algebra) {
  const int nn = algebra->size();
  if (b.rows() != nn || b.cols() != nn)
    throw std::invalid_argument("two_form_element: dimension mismatch");
  GrassmannElement out(algebra);
  for (int k = 0; k < nn; ++k)
    for (int l = k + 1; l < nn; ++l)
      out.set_coeff((1u << k) | (1u << l), b(k, l));
  return out;
}

GrassmannElement standard_bergman_kernel(int n, AlgebraPtr doubled) {
  if (doubled->size() != 4 * n)
    throw std::invalid_argument("standard_bergman_kernel: need 4n generators");
  // Layout: theta_k at 2(k-1), theta-bar_k at 2(k-1)+1, chi pairs offset 2n.
  GrassmannElement expo(doubled);
  const auto th = [&](int k) { return 2 * k; };
  const auto thb = [&](int k) { return 2 * k + 1; };
  const auto ch = [&](int k) { return 2 * n + 2 * k; };
  const auto chb = [&](int k) { return 2 * n + 2 * k + 1; };
  for (int k = 0; k < n; ++k) {
    // theta^k chi-bar^k  - (1/2) theta^k theta-bar^k - (1/2) chi^k chi-bar^k
    expo.set_coeff((1u << th(k)) | (1u << chb(k)),
                   expo.coeff((1u << th(k)) | (1u << chb(k))) +
                       Complex(merge_sign(1u << th(k), 1u << chb(k)) > 0 ? 1 : -1, 0));
    expo.set_coeff((1u << th(k)) | (1u << thb(k)), Complex(-0.5, 0));
    expo.set_coeff((1u << ch(k)) | (1u << chb(k)), Complex(-0.5, 0));
  }
  return grassmann_exp(expo);
}

}  // namespace gqlab
