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

#ifndef QLDYN_LINALG_HPP
#define QLDYN_LINALG_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <unsupported/Eigen/KroneckerProduct>

namespace qldyn {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Index = Eigen::Index;
using Rng = std::mt19937_64;

// Column-stacking vectorization. Throughout the library
// vec(X A Y) = (Y^T (x) X) vec(A), and kron(A, B) puts the first factor on
// the slow index: (A (x) B)[a*rows(B)+b, c*cols(B)+d] = A(a,c) B(b,d).
template <typename Derived>
Vector vec(const Eigen::MatrixBase<Derived>& a) {
  Matrix m = a;
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Index rows);

template <typename DerivedA, typename DerivedB>
Matrix kron(const Eigen::MatrixBase<DerivedA>& a,
            const Eigen::MatrixBase<DerivedB>& b) {
  return Eigen::kroneckerProduct(a.derived(), b.derived());
}

SparseMatrix sparse_kron(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix sparse_identity(Index n);

// Largest singular value, computed from the Hermitian eigenvalues of m* m.
double spectral_norm(const Matrix& m);

// Eigensolves below assume a Hermitian input (only the lower triangle is
// read); they are routed to LAPACK zheevd/zheevr when available.
RealVector hermitian_eigenvalues(const Matrix& m);
std::pair<RealVector, Matrix> hermitian_eigensystem(const Matrix& m);
double hermitian_min_eigenvalue(const Matrix& m);

// Inverse principal square root of a Hermitian positive definite matrix.
Matrix hermitian_inverse_sqrt(const Matrix& m);

// Dense matrix exponential (scaling and squaring with Pade approximants).
Matrix expm(const Matrix& m);

// exp(t s) v without forming the exponential: scaled truncated Taylor
// series, scaling chosen from the exact 1-norm of t s.
Vector expm_multiply(const SparseMatrix& s, const Vector& v, double t);

// Deterministic stream split: child seed for stream `stream` of `seed`.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// N(0,1) + i N(0,1) entries.
Complex complex_gaussian(Rng& rng);
Matrix ginibre(Index rows, Index cols, Rng& rng);
Matrix random_hermitian(Index n, Rng& rng);
// G G* / tr(G G*) for a Ginibre G: full-rank density matrix.
Matrix random_density(Index n, Rng& rng);

}  // namespace qldyn

#endif
