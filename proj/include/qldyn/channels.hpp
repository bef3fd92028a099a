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

#ifndef QLDYN_CHANNELS_HPP
#define QLDYN_CHANNELS_HPP

#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "qldyn/linalg.hpp"

namespace qldyn {

// Heisenberg channels act on observables, A -> sum_n W_n* A W_n, and are
// expected to be unital. Schroedinger channels act on states,
// rho -> sum_n W_n rho W_n*, and are expected to be trace preserving. The
// same Kraus list serves both readings; the picture tag fixes which one a
// channel uses.
enum class Picture { Heisenberg, Schroedinger };

Picture dual_picture(Picture p);
const char* to_string(Picture p);

// d^2 x d^2 matrix acting on column-stacked operators: Phi(A) = unvec(S vec A).
struct Superoperator {
  Index dim = 0;
  Matrix mat;
};

struct KrausSet {
  Index dim = 0;
  std::vector<Matrix> ops;
};

// J(Phi) = sum_ij E_ij (x) Phi(E_ij); Hermitian for hermiticity-preserving
// maps, PSD exactly when Phi is completely positive.
struct ChoiMatrix {
  Index dim = 0;
  Matrix mat;
};

Superoperator kraus_to_super(const KrausSet& k, Picture picture);
ChoiMatrix super_to_choi(const Superoperator& s);
Superoperator choi_to_super(const ChoiMatrix& j);

// Eigendecomposition route; eigenpairs with eigenvalue <= rank_tol are
// dropped, a materially negative one (< -rank_tol) raises
// NotCompletelyPositiveError with the witness pair. rank_tol < 0 selects
// the default 1e-12 * max eigenvalue: far enough above eigensolver noise
// to absorb it, small enough that the truncated mass cannot push
// ||sum W*W - I|| past the 1e-9 contract.
KrausSet choi_to_kraus(const ChoiMatrix& j, Picture picture,
                       double rank_tol = -1.0);

// Immutable channel with lazily derived, cached representations. All
// representations describe the same map; whichever is asked for first is
// derived from the one the channel was built with.
class QuantumChannel {
 public:
  QuantumChannel(Picture picture, Superoperator s);
  QuantumChannel(Picture picture, KrausSet k);
  QuantumChannel(Picture picture, ChoiMatrix j);

  Picture picture() const;
  Index dim() const;

  const Superoperator& superoperator() const;
  const ChoiMatrix& choi() const;
  // May throw NotCompletelyPositiveError when the map has no Kraus form.
  const KrausSet& kraus(double rank_tol = -1.0) const;
  bool has_kraus() const;

  Matrix apply(const Matrix& a) const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

struct NormalizationReport {
  double unital_defect = 0.0;  // ||Phi(1) - 1||
  double trace_defect = 0.0;   // ||Phi'(1) - 1|| for the dual Phi'
  bool pass = false;           // defect matching the picture is within tol
};

NormalizationReport check_normalization(const QuantumChannel& c, double tol);

struct CpVerdict {
  bool cp = false;
  double min_choi_eigenvalue = 0.0;
};

// Never throws on a negative verdict; the minimal Choi eigenvalue is the
// witness. cp iff min eigenvalue >= -tol.
CpVerdict is_completely_positive(const QuantumChannel& c, double tol);

// Adjoint with respect to the trace pairing <rho, A> = tr(rho A); swaps the
// picture, superoperators map to their adjoints, the Kraus list is shared.
QuantumChannel dual_channel(const QuantumChannel& c);

// Phi (x) id_k on a d*k-dimensional system. Channels with a Kraus form
// extend as {W_n (x) 1_k}; otherwise the extension is assembled from the
// superoperator. Dimensions beyond dim_cap raise CapacityError.
QuantumChannel tensor_with_identity(const QuantumChannel& c, Index k,
                                    Index dim_cap = 64);

// (Phi (x) id_k)(x) applied blockwise through the d^2 x d^2 superoperator;
// memory stays O(d^2 k^2), so this scales past tensor_with_identity's cap.
Matrix apply_tensor_extension(const QuantumChannel& c, Index k,
                              const Matrix& x);

// One term C_r (x) M_r of a finite sum in the system (x) auxiliary algebra.
struct SosPart {
  Matrix system;
  Matrix aux;
};

struct SosReport {
  double defect = 0.0;           // ||(Phi (x) id)(T* T) - sum_n D_n* D_n||
  double min_eigenvalue = 0.0;   // smallest eigenvalue of (Phi (x) id)(T* T)
};

// Sum-of-squares certificate for the tensor extension of the Heisenberg
// channel of {W_n}: with T = sum_r C_r (x) M_r,
// (Phi (x) id)(T* T) = sum_n D_n* D_n where D_n = sum_r (C_r W_n) (x) M_r.
SosReport sos_witness(const KrausSet& kraus, std::span<const SosPart> parts);

QuantumChannel identity_channel(Index d, Picture picture);
// A -> A^T: positive but not completely positive; the canonical negative
// control for CP verification.
QuantumChannel transpose_channel(Index d, Picture picture);

// `count` Kraus operators from the Ginibre ensemble, renormalized so that
// sum_n W_n* W_n = 1 (unital in the Heisenberg reading).
KrausSet random_normalized_kraus(Index d, int count, Rng& rng);

double superoperator_distance(const Superoperator& a, const Superoperator& b);

}  // namespace qldyn

#endif
