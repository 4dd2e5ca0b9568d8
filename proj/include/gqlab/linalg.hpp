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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gqlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Error thrown when an input matrix violates a precondition (shape,
/// symmetry, spectrum on a branch cut, ...).
class LinalgError : public std::runtime_error {
 public:
  explicit LinalgError(const std::string& what) : std::runtime_error(what) {}
};

/// Signals that a principal branch does not exist because an eigenvalue
/// lies on the closed negative real axis.  On the compact symmetric space
/// this is exactly the cut-locus condition, so callers translate it.
class BranchCutError : public LinalgError {
 public:
  explicit BranchCutError(const std::string& what) : LinalgError(what) {}
};

inline double frobenius(const CMatrix& a) { return a.norm(); }

/// Pfaffian of a skew-symmetric matrix, Parlett-Reid elimination with
/// partial pivoting.  Convention: pf([[0,b],[-b,0]]) = b.
///
/// Throws LinalgError for odd dimension or if ||A + A^T|| exceeds
/// `skew_tol * (1 + ||A||)`.
Complex pfaffian(const CMatrix& a, double skew_tol = 1e-10);

/// Principal matrix logarithm of a normal matrix.  Eigenvalue imaginary
/// parts of the result lie in (-pi, pi).  Throws BranchCutError when an
/// eigenvalue sits on the closed negative real axis (within `cut_tol`),
/// and LinalgError if the input is not normal or not invertible.
CMatrix principal_log(const CMatrix& a, double cut_tol = 1e-12);

/// Matrix exponential (scaling-and-squaring Pade, via Eigen).
CMatrix matrix_exp(const CMatrix& a);
RMatrix matrix_exp_real(const RMatrix& a);

/// Deterministic pseudo-random stream.  Wraps a fixed 64-bit generator and
/// a pinned Box-Muller transform so streams are identical across platforms
/// and library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next_u64();
  /// Uniform double in [0, 1).
  double uniform();
  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi);
  /// Standard normal deviate.
  double gaussian();
  Complex complex_gaussian();

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Random matrix with i.i.d. standard normal entries.
RMatrix random_real_matrix(Rng& rng, int rows, int cols);
CMatrix random_complex_matrix(Rng& rng, int rows, int cols);

/// Random skew-symmetric matrices (A^T = -A).
RMatrix random_real_skew(Rng& rng, int dim);
CMatrix random_complex_skew(Rng& rng, int dim);

/// Hermitian-part minimum eigenvalue of a real symmetric matrix.
double min_symmetric_eigenvalue(const RMatrix& s);

/// Takagi factorization of a complex symmetric matrix: B = U diag(s) U^T
/// with U unitary and s >= 0 sorted descending.
void takagi(const CMatrix& b, CMatrix& u, RVector& s, double tol = 1e-12);

/// Canonical form of a complex antisymmetric matrix: B = U S U^T with U
/// unitary and S block-diagonal with blocks [[0, s_i], [-s_i, 0]], s_i > 0
/// sorted descending, padded by zeros.  `s` returns the s_i (one per block).
void youla(const CMatrix& b, CMatrix& u, RVector& s, double tol = 1e-12);

}  // namespace gqlab
