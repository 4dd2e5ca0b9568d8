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

#include "gqlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

namespace gqlab {

Complex pfaffian(const CMatrix& a, double skew_tol) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw LinalgError("pfaffian: matrix must be square");
  if (n % 2 != 0) throw LinalgError("pfaffian: dimension must be even");
  const double scale = 1.0 + a.norm();
  if ((a + a.transpose()).norm() > skew_tol * scale)
    throw LinalgError("pfaffian: matrix is not skew-symmetric within tolerance");
  if (n == 0) return Complex(1.0, 0.0);

  // Parlett-Reid: congruence transforms to skew tridiagonal form with
  // partial pivoting; each row/column swap flips the sign.
  CMatrix m = a;
  Complex result(1.0, 0.0);
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index kp = k + 1;
    for (Eigen::Index i = k + 2; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(kp, k))) kp = i;
    if (kp != k + 1) {
      m.row(k + 1).swap(m.row(kp));
      m.col(k + 1).swap(m.col(kp));
      result = -result;
    }
    const Complex pivot = m(k + 1, k);
    if (pivot == Complex(0.0, 0.0)) return Complex(0.0, 0.0);
    result *= m(k, k + 1);
    if (k + 2 < n) {
      for (Eigen::Index i = k + 2; i < n; ++i) {
        const Complex tau = m(k, i) / m(k, k + 1);
        if (tau != Complex(0.0, 0.0)) {
          m.row(i) -= tau * m.row(k + 1);
          m.col(i) -= tau * m.col(k + 1);
        }
      }
    }
  }
  return result;
}

CMatrix principal_log(const CMatrix& a, double cut_tol) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw LinalgError("principal_log: matrix must be square");
  const double scale = 1.0 + a.norm();
  if ((a * a.adjoint() - a.adjoint() * a).norm() > 1e-9 * scale * scale)
    throw LinalgError("principal_log: matrix is not normal");

  Eigen::ComplexSchur<CMatrix> schur(a);
  if (schur.info() != Eigen::Success)
    throw LinalgError("principal_log: Schur decomposition failed");
  const CMatrix& t = schur.matrixT();
  const CMatrix& q = schur.matrixU();

  CVector logd(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex lam = t(i, i);
    const double mag = std::abs(lam);
    if (mag < cut_tol * scale)
      throw LinalgError("principal_log: matrix is singular");
    if (lam.real() < 0.0 && std::abs(lam.imag()) <= cut_tol * mag)
      throw BranchCutError(
          "principal_log: eigenvalue on the negative real axis");
    logd(i) = std::log(lam);
  }
  return q * logd.asDiagonal() * q.adjoint();
}

CMatrix matrix_exp(const CMatrix& a) { return a.exp(); }
RMatrix matrix_exp_real(const RMatrix& a) { return a.exp(); }

std::uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * M_PI * u2;
  spare_ = r * std::sin(phi);
  have_spare_ = true;
  return r * std::cos(phi);
}

Complex Rng::complex_gaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return Complex(re, im) / std::sqrt(2.0);
}

RMatrix random_real_matrix(Rng& rng, int rows, int cols) {
  RMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.gaussian();
  return m;
}

CMatrix random_complex_matrix(Rng& rng, int rows, int cols) {
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.complex_gaussian();
  return m;
}

RMatrix random_real_skew(Rng& rng, int dim) {
  RMatrix m = random_real_matrix(rng, dim, dim);
  return 0.5 * (m - m.transpose()).eval();
}

CMatrix random_complex_skew(Rng& rng, int dim) {
  CMatrix m = random_complex_matrix(rng, dim, dim);
  return 0.5 * (m - m.transpose()).eval();
}

double min_symmetric_eigenvalue(const RMatrix& s) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (s + s.transpose()));
  return es.eigenvalues().minCoeff();
}

namespace {

// Orthonormal basis of {w : B conj(w) = 0}, i.e. the conjugate of ker B.
CMatrix conjugate_kernel(const CMatrix& b, double tol) {
  Eigen::JacobiSVD<CMatrix> svd(b, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = tol * (1.0 + (sv.size() ? sv(0) : 0.0));
  std::vector<Eigen::Index> zero;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= cutoff) zero.push_back(i);
  CMatrix k(b.rows(), static_cast<Eigen::Index>(zero.size()));
  for (std::size_t j = 0; j < zero.size(); ++j)
    k.col(static_cast<Eigen::Index>(j)) = svd.matrixV().col(zero[j]).conjugate();
  return k;
}

void sort_clusters(Eigen::SelfAdjointEigenSolver<CMatrix>& es,
                   std::vector<double>& vals, CMatrix& vecs) {
  const Eigen::Index n = es.eigenvalues().size();
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return es.eigenvalues()(a) > es.eigenvalues()(b);
  });
  vals.resize(static_cast<std::size_t>(n));
  vecs.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    vals[static_cast<std::size_t>(i)] = es.eigenvalues()(idx[static_cast<std::size_t>(i)]);
    vecs.col(i) = es.eigenvectors().col(idx[static_cast<std::size_t>(i)]);
  }
}

void project_out(CVector& v, const std::vector<CVector>& basis) {
  for (const auto& w : basis) v -= w.dot(v) * w;
}

}  // namespace

void takagi(const CMatrix& b, CMatrix& u, RVector& s, double tol) {
  const Eigen::Index n = b.rows();
  if (b.cols() != n) throw LinalgError("takagi: matrix must be square");
  if ((b - b.transpose()).norm() > tol * (1.0 + b.norm()) * 100)
    throw LinalgError("takagi: matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<CMatrix> es(b * b.adjoint());
  std::vector<double> vals;
  CMatrix vecs;
  sort_clusters(es, vals, vecs);

  const double cutoff = tol * (1.0 + b.norm());
  std::vector<CVector> cols;
  std::vector<double> sigmas;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lam = std::max(vals[static_cast<std::size_t>(i)], 0.0);
    const double sigma = std::sqrt(lam);
    if (sigma <= cutoff) break;
    CVector v = vecs.col(i);
    project_out(v, cols);
    if (v.norm() < 1e-8) continue;
    v.normalize();
    // tau(w) = B conj(w) / sigma is an antilinear involution on the cluster;
    // its fixed vectors satisfy the Takagi relation.
    CVector cand = v + b * v.conjugate() / sigma;
    if (cand.norm() < 1e-8)
      cand = Complex(0, 1) * (v - b * v.conjugate() / sigma);
    project_out(cand, cols);
    if (cand.norm() < 1e-8) continue;
    cand.normalize();
    cols.push_back(cand);
    sigmas.push_back(sigma);
  }
  // Null sector.
  CMatrix k = conjugate_kernel(b, tol);
  for (Eigen::Index j = 0; j < k.cols(); ++j) {
    CVector v = k.col(j);
    project_out(v, cols);
    if (v.norm() < 1e-8) continue;
    v.normalize();
    cols.push_back(v);
    sigmas.push_back(0.0);
  }
  if (static_cast<Eigen::Index>(cols.size()) != n)
    throw LinalgError("takagi: failed to assemble a complete basis");

  u.resize(n, n);
  s.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    u.col(j) = cols[static_cast<std::size_t>(j)];
    s(j) = sigmas[static_cast<std::size_t>(j)];
  }
  if ((b * u.conjugate() - u * s.asDiagonal().toDenseMatrix().cast<Complex>())
          .norm() > 1e-8 * (1.0 + b.norm()))
    throw LinalgError("takagi: verification failed");
}

void youla(const CMatrix& b, CMatrix& u, RVector& s, double tol) {
  const Eigen::Index n = b.rows();
  if (b.cols() != n) throw LinalgError("youla: matrix must be square");
  if ((b + b.transpose()).norm() > tol * (1.0 + b.norm()) * 100)
    throw LinalgError("youla: matrix is not antisymmetric");

  Eigen::SelfAdjointEigenSolver<CMatrix> es(b * b.adjoint());
  std::vector<double> vals;
  CMatrix vecs;
  sort_clusters(es, vals, vecs);

  const double cutoff = tol * (1.0 + b.norm());
  std::vector<CVector> cols;
  std::vector<double> sigmas;  // one entry per column; pairs share the value
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lam = std::max(vals[static_cast<std::size_t>(i)], 0.0);
    const double sigma = std::sqrt(lam);
    if (sigma <= cutoff) break;
    CVector v = vecs.col(i);
    project_out(v, cols);
    if (v.norm() < 1e-8) continue;
    v.normalize();
    CVector w2 = -b * v.conjugate() / sigma;
    project_out(w2, cols);
    CVector w2p = w2 - v.dot(w2) * v;
    if (w2p.norm() < 1e-8) continue;
    w2p.normalize();
    cols.push_back(v);
    sigmas.push_back(sigma);
    cols.push_back(w2p);
    sigmas.push_back(sigma);
  }
  CMatrix k = conjugate_kernel(b, tol);
  for (Eigen::Index j = 0; j < k.cols(); ++j) {
    CVector v = k.col(j);
    project_out(v, cols);
    if (v.norm() < 1e-8) continue;
    v.normalize();
    cols.push_back(v);
    sigmas.push_back(0.0);
  }
  if (static_cast<Eigen::Index>(cols.size()) != n)
    throw LinalgError("youla: failed to assemble a complete basis");

  u.resize(n, n);
  s.resize((n + 1) / 2);
  s.setZero();
  CMatrix blocks = CMatrix::Zero(n, n);
  Eigen::Index pair = 0;
  for (Eigen::Index j = 0; j < n; ++j) u.col(j) = cols[static_cast<std::size_t>(j)];
  for (Eigen::Index j = 0; j + 1 < n; j += 2) {
    const double sigma = sigmas[static_cast<std::size_t>(j)];
    if (sigma > 0.0 && sigmas[static_cast<std::size_t>(j + 1)] == sigma) {
      blocks(j, j + 1) = sigma;
      blocks(j + 1, j) = -sigma;
      s(pair++) = sigma;
    }
  }
  if ((b - u * blocks * u.transpose()).norm() > 1e-8 * (1.0 + b.norm()))
    throw LinalgError("youla: verification failed");
}

}  // namespace gqlab
