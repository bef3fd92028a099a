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

#ifndef QLDYN_SEMIGROUP_HPP
#define QLDYN_SEMIGROUP_HPP

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qldyn/channels.hpp"
#include "qldyn/lattice.hpp"

namespace qldyn {

// One translation-invariant Hamiltonian term: coefficient times a product
// of single-site factors at fixed offsets from an anchor site.
struct HamiltonianPattern {
  struct Factor {
    std::string label;
    std::vector<int> offset;
  };
  double coefficient = 0.0;
  std::vector<Factor> factors;
};

// One jump-operator pattern: V = sqrt(rate) * (label at offset).
struct JumpPattern {
  double rate = 0.0;
  std::string label;
  std::vector<int> offset;
};

struct LindbladModel {
  std::string name;
  int dimension = 1;
  std::map<std::string, double> params;  // resolved, defaults filled
  std::vector<HamiltonianPattern> hamiltonian;
  std::vector<JumpPattern> jumps;
};

// Known names: dephasing, damping, ising_dephasing, ising_damping.
// Parameters: kappa (jump rate, all models), J and h (ising_* couplings).
// Defaults: J = 1.0, h = 0.8, kappa = 0.5. Unknown names or parameters not
// used by the chosen model are rejected.
LindbladModel make_model(const std::string& name,
                         const std::map<std::string, double>& params,
                         int dimension = 1);
std::vector<std::string> model_catalog();

// Finite-volume Lindblad generator, Heisenberg picture:
// L(A) = i[H, A] + sum_j (V_j* A V_j - (1/2){V_j* V_j, A}).
class Generator {
 public:
  Generator(Region region, SparseMatrix hamiltonian,
            std::vector<SparseMatrix> jumps);

  const Region& region() const { return region_; }
  Index dim() const { return region_.dim(); }
  const SparseMatrix& hamiltonian() const { return hamiltonian_; }
  const std::vector<SparseMatrix>& jumps() const { return jumps_; }

  Matrix apply(const Matrix& a) const;
  // apply() without allocations; `out` and `scratch` are resized on first
  // use and reused across calls (the integrator's inner loop).
  void apply_into(const Matrix& a, Matrix& out, Matrix& scratch) const;
  // Predual (Schroedinger) generator, the adjoint of apply under the
  // Frobenius pairing.
  Matrix apply_adjoint(const Matrix& x) const;
  // S(L) in the column-stacking convention:
  // i(1 (x) H - H^T (x) 1) + sum_j V_j^T (x) V_j*
  //   - (1/2)(1 (x) K + K^T (x) 1) with K = sum_j V_j* V_j.
  SparseMatrix superoperator() const;
  // ||L||_2 estimated by power iteration on L* L from a fixed deterministic
  // start; cached. Slight overestimate by design (5% headroom).
  double norm_estimate() const;

 private:
  Region region_;
  SparseMatrix hamiltonian_;
  std::vector<SparseMatrix> jumps_;
  std::vector<SparseMatrix> jumps_adjoint_;
  SparseMatrix jump_sum_;  // sum_j V_j* V_j
  mutable std::mutex mu_;
  mutable std::optional<double> norm_;
};

// Instantiates every placement of the model's patterns that fits inside
// `region`; placements crossing the boundary are dropped (open boundary
// conditions). A pattern with no placement at all is an error.
Generator build_generator(const LindbladModel& model, const Region& region);

struct ExactParams {
  Index dim_cap = 64;  // superoperator at most 4096 x 4096
};

struct OdeParams {
  double tol = 1e-8;             // global accuracy target
  double max_step_factor = 0.1;  // cap on h * ||L||
  long max_steps = 2'000'000;
};

// gamma_t = exp(t L) as an explicit Heisenberg channel via the dense
// superoperator exponential. Throws CapacityError beyond params.dim_cap.
QuantumChannel evolve_exact(const Generator& g, double t,
                            const ExactParams& params = {});

// exp(t L) applied to a single observable through the sparse superoperator
// action; same semantics as evolve_exact without materializing the channel.
Matrix evolve_action_exact(const Generator& g, const Matrix& a, double t);

// Fixed-step classical Runge-Kutta on A' = L(A). The step size obeys both
// h ||L|| <= max_step_factor and the global accuracy target tol.
LocalOperator evolve_ode(const Generator& g, const LocalOperator& a, double t,
                         const OdeParams& params = {});

struct DualityReport {
  // max over trials of |tr(rho gamma_t(A)) - tr(tau_t(rho) A)|
  double max_pairing_defect = 0.0;
  double dual_trace_defect = 0.0;
  double dual_min_choi_eigenvalue = 0.0;
};

// Builds gamma_t and its predual tau_t and exercises the trace pairing on
// random (density, observable) draws.
DualityReport duality_check(const Generator& g, double t, int trials, Rng& rng,
                            const ExactParams& params = {});

}  // namespace qldyn

#endif
