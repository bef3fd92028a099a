// Copyright 2026 The qldyn Authors
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

#include "qldyn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#ifdef QLDYN_HAVE_LAPACKE
#include <lapacke.h>
#endif

#include "qldyn/errors.hpp"

namespace qldyn {

namespace detail {
bool ensure_blas_kernel_arch();
}

namespace {

[[maybe_unused]] const bool blas_arch_ready = detail::ensure_blas_kernel_arch();

void require_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw InvalidArgument(std::string(who) + ": matrix must be square");
  }
}

#ifdef QLDYN_HAVE_LAPACKE

RealVector lapack_eigenvalues(Matrix a, Matrix* vectors) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  RealVector w(n);
  if (n == 0) return w;
  const lapack_int info = LAPACKE_zheevd(
      LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n,
      reinterpret_cast<lapack_complex_double*>(a.data()), n, w.data());
  if (info != 0) {
    throw Error("zheevd failed with info " + std::to_string(info));
  }
  if (vectors) *vectors = std::move(a);
  return w;
}

// Single extreme eigenvalue without the full spectrum.
double lapack_extreme_eigenvalue(Matrix a, bool largest) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  if (n == 0) throw InvalidArgument("extreme eigenvalue of empty matrix");
  const lapack_int target = largest ? n : 1;
  RealVector w(n);
  lapack_int found = 0;
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
  const double abstol = LAPACKE_dlamch('S');
  const lapack_int info = LAPACKE_zheevr(
      LAPACK_COL_MAJOR, 'N', 'I', 'L', n,
      reinterpret_cast<lapack_complex_double*>(a.data()), n, 0.0, 0.0, target,
      target, abstol, &found, w.data(), nullptr, 1, isuppz.data());
  if (info != 0 || found < 1) {
    throw Error("zheevr failed with info " + std::to_string(info));
  }
  return w(0);
}

#else

RealVector lapack_eigenvalues(const Matrix& a, Matrix* vectors) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(
      a, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error("self-adjoint eigensolver failed");
  }
  if (vectors) *vectors = solver.eigenvectors();
  return solver.eigenvalues();
}

double lapack_extreme_eigenvalue(const Matrix& a, bool largest) {
  if (a.rows() == 0) throw InvalidArgument("extreme eigenvalue of empty matrix");
  const RealVector w = lapack_eigenvalues(a, nullptr);
  return largest ? w(w.size() - 1) : w(0);
}

#endif

}  // namespace

Matrix unvec(const Vector& v, Index rows) {
  if (rows <= 0 || v.size() % rows != 0) {
    throw InvalidArgument("unvec: vector length is not a multiple of rows");
  }
  return Eigen::Map<const Matrix>(v.data(), rows, v.size() / rows);
}

SparseMatrix sparse_kron(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  out = Eigen::kroneckerProduct(a, b);
  return out;
}

SparseMatrix sparse_identity(Index n) {
  SparseMatrix id(n, n);
  id.setIdentity();
  return id;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const Matrix gram = m.adjoint() * m;
  const double top = lapack_extreme_eigenvalue(gram, true);
  return std::sqrt(std::max(top, 0.0));
}

RealVector hermitian_eigenvalues(const Matrix& m) {
  require_square(m, "hermitian_eigenvalues");
  return lapack_eigenvalues(m, nullptr);
}

std::pair<RealVector, Matrix> hermitian_eigensystem(const Matrix& m) {
  require_square(m, "hermitian_eigensystem");
  Matrix vectors;
  RealVector values = lapack_eigenvalues(m, &vectors);
  return {std::move(values), std::move(vectors)};
}

double hermitian_min_eigenvalue(const Matrix& m) {
  require_square(m, "hermitian_min_eigenvalue");
  return lapack_extreme_eigenvalue(m, false);
}

Matrix hermitian_inverse_sqrt(const Matrix& m) {
  require_square(m, "hermitian_inverse_sqrt");
  auto [values, vectors] = hermitian_eigensystem(m);
  if (values.size() == 0 || values(0) <= 0.0) {
    throw InvalidArgument("hermitian_inverse_sqrt: matrix is not positive definite");
  }
  const RealVector scale = values.array().sqrt().inverse();
  return vectors * scale.asDiagonal() * vectors.adjoint();
}

Matrix expm(const Matrix& m) {
  require_square(m, "expm");
  return m.exp();
}

Vector expm_multiply(const SparseMatrix& s, const Vector& v, double t) {
  if (s.rows() != s.cols() || s.cols() != v.size()) {
    throw InvalidArgument("expm_multiply: dimension mismatch");
  }
  if (t == 0.0 || v.size() == 0) return v;

  // Exact 1-norm of t*s picks the scaling; each scaled factor then has
  // 1-norm <= 1 and the Taylor series converges in a few dozen terms.
  double norm1 = 0.0;
  for (Index col = 0; col < s.outerSize(); ++col) {
    double sum = 0.0;
    for (SparseMatrix::InnerIterator it(s, col); it; ++it) {
      sum += std::abs(it.value());
    }
    norm1 = std::max(norm1, sum * std::abs(t));
  }
  const long steps = std::max<long>(1, static_cast<long>(std::ceil(norm1)));
  const double dt = t / static_cast<double>(steps);

  Vector w = v;
  for (long step = 0; step < steps; ++step) {
    Vector term = w;
    Vector acc = w;
    for (int k = 1; k <= 64; ++k) {
      term = (s * term) * (dt / k);
      acc += term;
      if (term.norm() <= 1e-16 * acc.norm()) break;
    }
    w = std::move(acc);
  }
  return w;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Complex complex_gaussian(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

Matrix ginibre(Index rows, Index cols, Rng& rng) {
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      g(i, j) = complex_gaussian(rng);
    }
  }
  return g;
}

Matrix random_hermitian(Index n, Rng& rng) {
  const Matrix g = ginibre(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

Matrix random_density(Index n, Rng& rng) {
  const Matrix g = ginibre(n, n, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

}  // namespace qldyn
