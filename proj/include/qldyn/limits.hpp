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

#ifndef QLDYN_LIMITS_HPP
#define QLDYN_LIMITS_HPP

#include <span>
#include <string>
#include <vector>

#include "qldyn/semigroup.hpp"

namespace qldyn {

// Centered-box growth: region k is the support's bounding box padded by
// radius first_radius + k - 1 on every axis.
struct GrowthRule {
  std::string kind = "shell";
  int first_radius = 0;
  int site_cap = 10;
};

struct RegionSchedule {
  std::vector<Region> regions;  // strictly isotone
};

RegionSchedule region_schedule(const Region& support, int steps,
                               const GrowthRule& rule = {});

struct BackendSpec {
  enum class Kind { Exact, Ode };
  Kind kind = Kind::Exact;
  OdeParams ode{};
  // The exact route applies exp(t S) through the sparse action, so it
  // scales past the dense-channel cap; this bounds the region dimension.
  Index action_dim_cap = 1024;
};

struct VolumeRecord {
  Index sites = 0;
  Index dim = 0;
  double norm = 0.0;  // ||gamma_t(Lambda_k) a||
  double wall_ms = 0.0;
  Region region;
  Matrix evolved;
};

struct CauchyVerdict {
  bool cauchy_pass = false;
  // 1-based index from which increments are nonincreasing under the ratio
  // bound; monotone_from_index - 1 is the last violating pair (0 if none).
  int monotone_from_index = 0;
  int violation_index = 0;
  double final_increment = 0.0;
};

struct ConvergenceReport {
  std::string observable_label;
  double time = 0.0;
  std::vector<VolumeRecord> volumes;  // ordered by region inclusion
  // increments[k] = ||embed(gamma_t(L_k) a, L_{k+1}) - gamma_t(L_{k+1}) a||,
  // taken in the operator norm of the larger region.
  std::vector<double> increments;
  CauchyVerdict verdict;
};

// Pure assessment of the increments; scan_limit leaves report.verdict
// untouched so callers pin epsilon and ratio_bound explicitly.
CauchyVerdict cauchy_assessment(const ConvergenceReport& report, double epsilon,
                                double ratio_bound);

// Evolves `a` on every region of the schedule (in parallel) and measures
// the Cauchy increments of the net. The report is complete even when the
// increments do not certify convergence; backend failures are annotated
// with the offending volume and rethrown.
ConvergenceReport scan_limit(const LindbladModel& model, const LocalOperator& a,
                             double t, const RegionSchedule& schedule,
                             const BackendSpec& backend);

struct TensorStabilityReport {
  Index volume_sites = 0;
  Index dim = 0;
  double time = 0.0;
  double unital_defect = 0.0;
  double min_choi_eigenvalue = 0.0;
  struct PerK {
    Index k = 0;
    int samples = 0;
    double min_eigenvalue = 0.0;
  };
  std::vector<PerK> per_k;
};

// Min eigenvalue of (Phi (x) id_k)(T* T) over `samples` random T per k,
// where T is a 3-term sum of C_r (x) M_r with i.i.d. complex Gaussian
// factor entries.
std::vector<TensorStabilityReport::PerK> tensor_stability_scan(
    const QuantumChannel& channel, std::span<const Index> k_values, int samples,
    Rng& rng);

// Builds gamma_t on the largest centered box around `support` that stays
// within params.dim_cap, checks unitality and Choi positivity, then runs
// tensor_stability_scan on it.
TensorStabilityReport limit_cp_check(const LindbladModel& model,
                                     const Region& support, double t,
                                     std::span<const Index> k_values,
                                     int samples, Rng& rng,
                                     const ExactParams& params = {});

}  // namespace qldyn

#endif
