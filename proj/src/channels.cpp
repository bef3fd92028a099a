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

#include "qldyn/channels.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "qldyn/errors.hpp"

namespace qldyn {

namespace {

void check_super(const Superoperator& s, const char* who) {
  if (s.dim <= 0 || s.mat.rows() != s.dim * s.dim ||
      s.mat.cols() != s.dim * s.dim) {
    throw InvalidArgument(std::string(who) +
                          ": superoperator must be d^2 x d^2 with d > 0");
  }
}

void check_choi(const ChoiMatrix& j, const char* who) {
  if (j.dim <= 0 || j.mat.rows() != j.dim * j.dim ||
      j.mat.cols() != j.dim * j.dim) {
    throw InvalidArgument(std::string(who) +
                          ": Choi matrix must be d^2 x d^2 with d > 0");
  }
}

void check_kraus(const KrausSet& k, const char* who) {
  if (k.dim <= 0) {
    throw InvalidArgument(std::string(who) + ": Kraus dimension must be positive");
  }
  for (const Matrix& w : k.ops) {
    if (w.rows() != k.dim || w.cols() != k.dim) {
      throw InvalidArgument(std::string(who) + ": Kraus operator shape mismatch");
    }
  }
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

Picture dual_picture(Picture p) {
  return p == Picture::Heisenberg ? Picture::Schroedinger : Picture::Heisenberg;
}

const char* to_string(Picture p) {
  return p == Picture::Heisenberg ? "heisenberg" : "schroedinger";
}

Superoperator kraus_to_super(const KrausSet& k, Picture picture) {
  check_kraus(k, "kraus_to_super");
  const Index d = k.dim;
  Matrix s = Matrix::Zero(d * d, d * d);
  for (const Matrix& w : k.ops) {
    if (picture == Picture::Heisenberg) {
      // vec(W* A W) = (W^T (x) W*) vec(A)
      s += kron(w.transpose(), w.adjoint());
    } else {
      // vec(W rho W*) = (conj(W) (x) W) vec(rho)
      s += kron(w.conjugate(), w);
    }
  }
  return {d, std::move(s)};
}

// Reshuffle between the superoperator and Choi orderings:
// J[(i,k),(j,l)] = Phi(E_ij)[k,l] = S[l d + k, j d + i].
ChoiMatrix super_to_choi(const Superoperator& s) {
  check_super(s, "super_to_choi");
  const Index d = s.dim;
  Matrix jm(d * d, d * d);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) {
      const auto src = s.mat.col(j * d + i);  // vec(Phi(E_ij))
      for (Index l = 0; l < d; ++l) {
        jm.col(j * d + l).segment(i * d, d) = src.segment(l * d, d);
      }
    }
  }
  return {d, std::move(jm)};
}

Superoperator choi_to_super(const ChoiMatrix& j) {
  check_choi(j, "choi_to_super");
  const Index d = j.dim;
  Matrix s(d * d, d * d);
  for (Index jj = 0; jj < d; ++jj) {
    for (Index i = 0; i < d; ++i) {
      auto dst = s.col(jj * d + i);
      for (Index l = 0; l < d; ++l) {
        dst.segment(l * d, d) = j.mat.col(jj * d + l).segment(i * d, d);
      }
    }
  }
  return {d, std::move(s)};
}

KrausSet choi_to_kraus(const ChoiMatrix& j, Picture picture, double rank_tol) {
  check_choi(j, "choi_to_kraus");
  const Index d = j.dim;

  const double herm_defect = max_abs(j.mat - j.mat.adjoint());
  if (herm_defect > 1e-10 * std::max(1.0, max_abs(j.mat))) {
    throw InvalidArgument(
        "choi_to_kraus: Choi matrix is not Hermitian (defect " +
        std::to_string(herm_defect) + "); the map has no Kraus form");
  }

  const Matrix herm = 0.5 * (j.mat + j.mat.adjoint());
  auto [values, vectors] = hermitian_eigensystem(herm);
  const double top = std::max(values.size() ? values(values.size() - 1) : 0.0, 0.0);
  const double tol = rank_tol < 0.0 ? 1e-12 * top : rank_tol;

  if (values.size() && values(0) < -tol) {
    const Vector witness = vectors.col(0);
    throw NotCompletelyPositiveError(
        "choi_to_kraus: Choi matrix has negative eigenvalue " +
            std::to_string(values(0)),
        values(0), {witness.data(), witness.data() + witness.size()});
  }

  KrausSet out{d, {}};
  for (Index n = values.size(); n-- > 0;) {
    if (values(n) <= tol) break;  // ascending order: the rest are smaller
    const Matrix k = unvec(std::sqrt(values(n)) * vectors.col(n), d);
    // Eigenvectors give the sandwich form A -> sum K A K*; a Heisenberg
    // channel stores W with action A -> sum W* A W, so W = K*.
    out.ops.push_back(picture == Picture::Heisenberg ? k.adjoint() : k);
  }
  return out;
}

struct QuantumChannel::State {
  Picture picture;
  Index dim = 0;
  mutable std::mutex mu;
  mutable std::optional<Superoperator> super;
  mutable std::optional<ChoiMatrix> choi;
  mutable std::optional<KrausSet> kraus;

  // All ensure_* helpers assume mu is held.
  void ensure_super() const {
    if (super) return;
    if (kraus) {
      super = kraus_to_super(*kraus, picture);
    } else {
      super = choi_to_super(*choi);
    }
  }
  void ensure_choi() const {
    if (choi) return;
    ensure_super();
    choi = super_to_choi(*super);
  }
  void ensure_kraus(double rank_tol) const {
    if (kraus) return;
    ensure_choi();
    kraus = choi_to_kraus(*choi, picture, rank_tol);
  }
};

QuantumChannel::QuantumChannel(Picture picture, Superoperator s)
    : state_(std::make_shared<State>()) {
  check_super(s, "QuantumChannel");
  state_->picture = picture;
  state_->dim = s.dim;
  state_->super = std::move(s);
}

QuantumChannel::QuantumChannel(Picture picture, KrausSet k)
    : state_(std::make_shared<State>()) {
  check_kraus(k, "QuantumChannel");
  state_->picture = picture;
  state_->dim = k.dim;
  state_->kraus = std::move(k);
}

QuantumChannel::QuantumChannel(Picture picture, ChoiMatrix j)
    : state_(std::make_shared<State>()) {
  check_choi(j, "QuantumChannel");
  state_->picture = picture;
  state_->dim = j.dim;
  state_->choi = std::move(j);
}

Picture QuantumChannel::picture() const { return state_->picture; }

Index QuantumChannel::dim() const { return state_->dim; }

const Superoperator& QuantumChannel::superoperator() const {
  std::lock_guard lock(state_->mu);
  state_->ensure_super();
  return *state_->super;
}

const ChoiMatrix& QuantumChannel::choi() const {
  std::lock_guard lock(state_->mu);
  state_->ensure_choi();
  return *state_->choi;
}

const KrausSet& QuantumChannel::kraus(double rank_tol) const {
  std::lock_guard lock(state_->mu);
  state_->ensure_kraus(rank_tol);
  return *state_->kraus;
}

bool QuantumChannel::has_kraus() const {
  std::lock_guard lock(state_->mu);
  return state_->kraus.has_value();
}

Matrix QuantumChannel::apply(const Matrix& a) const {
  if (a.rows() != dim() || a.cols() != dim()) {
    throw InvalidArgument("QuantumChannel::apply: operator dimension mismatch");
  }
  const Superoperator& s = superoperator();
  return unvec(s.mat * vec(a), dim());
}

NormalizationReport check_normalization(const QuantumChannel& c, double tol) {
  const Index d = c.dim();
  const Matrix id = Matrix::Identity(d, d);
  const Vector vec_id = vec(id);
  const Matrix& s = c.superoperator().mat;

  NormalizationReport report;
  report.unital_defect = spectral_norm(Matrix(unvec(s * vec_id, d) - id));
  report.trace_defect = spectral_norm(Matrix(unvec(s.adjoint() * vec_id, d) - id));
  const double relevant = c.picture() == Picture::Heisenberg
                              ? report.unital_defect
                              : report.trace_defect;
  report.pass = relevant <= tol;
  return report;
}

CpVerdict is_completely_positive(const QuantumChannel& c, double tol) {
  const Matrix& j = c.choi().mat;
  const double herm_defect = max_abs(j - j.adjoint());
  const Matrix herm = 0.5 * (j + j.adjoint());
  CpVerdict verdict;
  verdict.min_choi_eigenvalue = hermitian_min_eigenvalue(herm);
  verdict.cp = herm_defect <= tol && verdict.min_choi_eigenvalue >= -tol;
  return verdict;
}

QuantumChannel dual_channel(const QuantumChannel& c) {
  const Picture flipped = dual_picture(c.picture());
  if (c.has_kraus()) {
    // The same list serves both pictures: the adjoint swaps the roles of
    // W and W* inside the sandwich, which is exactly the picture change.
    return QuantumChannel(flipped, c.kraus());
  }
  return QuantumChannel(flipped,
                        Superoperator{c.dim(), c.superoperator().mat.adjoint()});
}

QuantumChannel tensor_with_identity(const QuantumChannel& c, Index k,
                                    Index dim_cap) {
  if (k <= 0) throw InvalidArgument("tensor_with_identity: k must be positive");
  const Index d = c.dim();
  const Index dk = d * k;
  if (dk > dim_cap) {
    throw CapacityError("tensor_with_identity: dimension " + std::to_string(dk) +
                        " exceeds cap " + std::to_string(dim_cap));
  }
  if (c.has_kraus()) {
    const KrausSet& ks = c.kraus();
    KrausSet ext{dk, {}};
    const Matrix id = Matrix::Identity(k, k);
    for (const Matrix& w : ks.ops) ext.ops.push_back(kron(w, id));
    return QuantumChannel(c.picture(), std::move(ext));
  }
  // (Phi (x) id) acts on system indices with the auxiliary ones frozen:
  // S_ext[vec(t k + b, s k + a), vec(t' k + b', s' k + a')]
  //   = S[t d + s, t' d + s'] delta_{a a'} delta_{b b'}.
  const Matrix& s = c.superoperator().mat;
  Matrix ext = Matrix::Zero(dk * dk, dk * dk);
  for (Index tp = 0; tp < d; ++tp) {
    for (Index sp = 0; sp < d; ++sp) {
      for (Index t = 0; t < d; ++t) {
        for (Index ss = 0; ss < d; ++ss) {
          const Complex value = s(t * d + ss, tp * d + sp);
          if (value == Complex(0, 0)) continue;
          for (Index b = 0; b < k; ++b) {
            for (Index a = 0; a < k; ++a) {
              ext((t * k + b) * dk + ss * k + a,
                  (tp * k + b) * dk + sp * k + a) = value;
            }
          }
        }
      }
    }
  }
  return QuantumChannel(c.picture(), Superoperator{dk, std::move(ext)});
}

Matrix apply_tensor_extension(const QuantumChannel& c, Index k,
                              const Matrix& x) {
  if (k <= 0) throw InvalidArgument("apply_tensor_extension: k must be positive");
  const Index d = c.dim();
  const Index dk = d * k;
  if (x.rows() != dk || x.cols() != dk) {
    throw InvalidArgument("apply_tensor_extension: operand must be (d k) x (d k)");
  }
  const Matrix& s = c.superoperator().mat;

  // Gather the k^2 system blocks as columns, apply the superoperator in one
  // product, and scatter back.
  Matrix batch(d * d, k * k);
  for (Index a = 0; a < k; ++a) {
    for (Index b = 0; b < k; ++b) {
      const Matrix block = x(Eigen::seqN(a, d, k), Eigen::seqN(b, d, k));
      batch.col(a * k + b) = vec(block);
    }
  }
  const Matrix mapped = s * batch;
  Matrix out(dk, dk);
  for (Index a = 0; a < k; ++a) {
    for (Index b = 0; b < k; ++b) {
      out(Eigen::seqN(a, d, k), Eigen::seqN(b, d, k)) =
          unvec(mapped.col(a * k + b), d);
    }
  }
  return out;
}

SosReport sos_witness(const KrausSet& kraus, std::span<const SosPart> parts) {
  check_kraus(kraus, "sos_witness");
  if (parts.empty()) {
    throw InvalidArgument("sos_witness: at least one term is required");
  }
  const Index d = kraus.dim;
  const Index k = parts.front().aux.rows();
  for (const SosPart& part : parts) {
    if (part.system.rows() != d || part.system.cols() != d) {
      throw InvalidArgument("sos_witness: system factor shape mismatch");
    }
    if (part.aux.rows() != k || part.aux.cols() != k) {
      throw InvalidArgument("sos_witness: auxiliary factor shape mismatch");
    }
  }
  const Index dk = d * k;

  Matrix t = Matrix::Zero(dk, dk);
  for (const SosPart& part : parts) t += kron(part.system, part.aux);

  const QuantumChannel phi(Picture::Heisenberg, kraus);
  const Matrix lhs = apply_tensor_extension(phi, k, Matrix(t.adjoint() * t));

  Matrix rhs = Matrix::Zero(dk, dk);
  for (const Matrix& w : kraus.ops) {
    Matrix dn = Matrix::Zero(dk, dk);
    for (const SosPart& part : parts) dn += kron(Matrix(part.system * w), part.aux);
    rhs += dn.adjoint() * dn;
  }

  SosReport report;
  report.defect = spectral_norm(lhs - rhs);
  report.min_eigenvalue = hermitian_min_eigenvalue(0.5 * (lhs + lhs.adjoint()));
  return report;
}

QuantumChannel identity_channel(Index d, Picture picture) {
  if (d <= 0) throw InvalidArgument("identity_channel: dimension must be positive");
  return QuantumChannel(picture, Superoperator{d, Matrix::Identity(d * d, d * d)});
}

QuantumChannel transpose_channel(Index d, Picture picture) {
  if (d <= 0) throw InvalidArgument("transpose_channel: dimension must be positive");
  Matrix s = Matrix::Zero(d * d, d * d);
  // vec(A^T)[l d + k] = vec(A)[k d + l]
  for (Index k = 0; k < d; ++k) {
    for (Index l = 0; l < d; ++l) {
      s(l * d + k, k * d + l) = 1;
    }
  }
  return QuantumChannel(picture, Superoperator{d, std::move(s)});
}

KrausSet random_normalized_kraus(Index d, int count, Rng& rng) {
  if (d <= 0 || count < 1) {
    throw InvalidArgument("random_normalized_kraus: need d > 0 and count >= 1");
  }
  std::vector<Matrix> raw;
  Matrix total = Matrix::Zero(d, d);
  for (int n = 0; n < count; ++n) {
    raw.push_back(ginibre(d, d, rng));
    total += raw.back().adjoint() * raw.back();
  }
  const Matrix fix = hermitian_inverse_sqrt(total);
  KrausSet out{d, {}};
  for (Matrix& g : raw) out.ops.push_back(g * fix);
  return out;
}

double superoperator_distance(const Superoperator& a, const Superoperator& b) {
  if (a.dim != b.dim) {
    throw InvalidArgument("superoperator_distance: dimension mismatch");
  }
  return spectral_norm(a.mat - b.mat);
}

}  // namespace qldyn
