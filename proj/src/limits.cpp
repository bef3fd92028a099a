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

#include "qldyn/limits.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <thread>
#include <utility>

#include "qldyn/errors.hpp"

namespace qldyn {

namespace {

// Increments at rounding scale carry no ratio information; anything at or
// below this floor counts as converged when checking monotonicity.
constexpr double kNoiseFloor = 1e-12;

Region box_region(const Region& support, int radius) {
  const auto& sites = support.sites();
  if (sites.empty()) {
    throw InvalidArgument("region_schedule: support is empty");
  }
  const std::size_t d = sites.front().coords.size();
  const int local_dim = sites.front().local_dim;
  for (const Site& s : sites) {
    if (s.local_dim != local_dim) {
      throw InvalidArgument("region_schedule: mixed local dimensions");
    }
  }
  std::vector<int> lo = sites.front().coords;
  std::vector<int> hi = sites.front().coords;
  for (const Site& s : sites) {
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], s.coords[i]);
      hi[i] = std::max(hi[i], s.coords[i]);
    }
  }
  std::vector<Site> box;
  if (d == 1) {
    for (int x = lo[0] - radius; x <= hi[0] + radius; ++x) {
      box.push_back(qudit(x, local_dim));
    }
  } else {
    for (int x = lo[0] - radius; x <= hi[0] + radius; ++x) {
      for (int y = lo[1] - radius; y <= hi[1] + radius; ++y) {
        box.push_back(qudit(x, y, local_dim));
      }
    }
  }
  return make_region(std::move(box));
}

template <typename Task>
void run_indexed(std::size_t count, Task&& task) {
  const unsigned workers = std::thread::hardware_concurrency();
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::vector<std::future<void>> pending;
  pending.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    pending.push_back(std::async(std::launch::async, task, i));
  }
  for (auto& f : pending) f.get();
}

[[noreturn]] void rethrow_with_volume(std::size_t k, const Region& region) {
  const std::string where = " [volume " + std::to_string(k + 1) + ", " +
                            std::to_string(region.size()) + " sites]";
  try {
    throw;
  } catch (const CapacityError& e) {
    throw CapacityError(e.what() + where);
  } catch (const ConfigError& e) {
    throw ConfigError(e.what() + where);
  } catch (const NotCompletelyPositiveError&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(e.what() + where);
  }
}

}  // namespace

RegionSchedule region_schedule(const Region& support, int steps,
                               const GrowthRule& rule) {
  if (steps < 2) {
    throw InvalidArgument("region_schedule: steps must be >= 2");
  }
  if (rule.kind != "shell") {
    throw InvalidArgument("region_schedule: unknown growth rule '" + rule.kind +
                          "'");
  }
  if (rule.first_radius < 0) {
    throw InvalidArgument("region_schedule: first_radius must be >= 0");
  }
  RegionSchedule schedule;
  for (int k = 0; k < steps; ++k) {
    Region r = box_region(support, rule.first_radius + k);
    if (static_cast<int>(r.size()) > rule.site_cap) {
      throw CapacityError("region_schedule: step " + std::to_string(k + 1) +
                          " reaches " + std::to_string(r.size()) +
                          " sites, cap is " + std::to_string(rule.site_cap));
    }
    schedule.regions.push_back(std::move(r));
  }
  return schedule;
}

CauchyVerdict cauchy_assessment(const ConvergenceReport& report, double epsilon,
                                double ratio_bound) {
  const auto& d = report.increments;
  if (d.size() < 2) {
    throw InvalidArgument("cauchy_assessment: need at least 2 increments");
  }
  if (epsilon <= 0 || ratio_bound <= 0) {
    throw InvalidArgument("cauchy_assessment: epsilon and ratio_bound must be > 0");
  }
  CauchyVerdict verdict;
  verdict.final_increment = d.back();
  const std::size_t m = d.size();
  std::size_t violation = 0;  // 1-based index of the last violating pair
  for (std::size_t k = 0; k + 1 < m; ++k) {
    if (d[k + 1] > std::max(ratio_bound * d[k], kNoiseFloor)) {
      violation = k + 1;
    }
  }
  verdict.violation_index = static_cast<int>(violation);
  verdict.monotone_from_index = static_cast<int>(violation + 1);
  const bool monotone_tail = violation + 1 <= m - 1;
  verdict.cauchy_pass = monotone_tail && d.back() <= epsilon;
  return verdict;
}

ConvergenceReport scan_limit(const LindbladModel& model, const LocalOperator& a,
                             double t, const RegionSchedule& schedule,
                             const BackendSpec& backend) {
  if (t < 0) throw InvalidArgument("scan_limit: t must be >= 0");
  if (schedule.regions.empty()) {
    throw InvalidArgument("scan_limit: empty schedule");
  }
  for (std::size_t k = 0; k < schedule.regions.size(); ++k) {
    if (!schedule.regions[k].contains(a.support)) {
      throw InvalidArgument("scan_limit: volume " + std::to_string(k + 1) +
                            " does not contain the observable support");
    }
    if (k + 1 < schedule.regions.size() &&
        !schedule.regions[k + 1].contains(schedule.regions[k])) {
      throw InvalidArgument("scan_limit: schedule is not isotone");
    }
  }

  ConvergenceReport report;
  report.time = t;
  report.volumes.resize(schedule.regions.size());

  run_indexed(schedule.regions.size(), [&](std::size_t k) {
    const Region& region = schedule.regions[k];
    try {
      const auto started = std::chrono::steady_clock::now();
      const Generator g = build_generator(model, region);
      Matrix evolved;
      if (backend.kind == BackendSpec::Kind::Exact) {
        if (region.dim() > backend.action_dim_cap) {
          throw CapacityError("scan_limit: dimension " +
                              std::to_string(region.dim()) +
                              " exceeds the exact action cap " +
                              std::to_string(backend.action_dim_cap));
        }
        evolved = evolve_action_exact(g, embed(a, region).matrix, t);
      } else {
        evolved = evolve_ode(g, a, t, backend.ode).matrix;
      }
      const auto finished = std::chrono::steady_clock::now();
      VolumeRecord& record = report.volumes[k];
      record.sites = static_cast<Index>(region.size());
      record.dim = region.dim();
      record.region = region;
      record.norm = operator_norm(evolved);
      record.wall_ms =
          std::chrono::duration<double, std::milli>(finished - started).count();
      record.evolved = std::move(evolved);
    } catch (...) {
      rethrow_with_volume(k, region);
    }
  });

  for (std::size_t k = 0; k + 1 < report.volumes.size(); ++k) {
    const VolumeRecord& small = report.volumes[k];
    const VolumeRecord& large = report.volumes[k + 1];
    const Matrix lifted =
        embed(LocalOperator(small.region, small.evolved), large.region).matrix;
    report.increments.push_back(operator_norm(Matrix(lifted - large.evolved)));
  }
  return report;
}

std::vector<TensorStabilityReport::PerK> tensor_stability_scan(
    const QuantumChannel& channel, std::span<const Index> k_values, int samples,
    Rng& rng) {
  if (samples < 1) {
    throw InvalidArgument("tensor_stability_scan: samples must be >= 1");
  }
  const Index d = channel.dim();
  std::vector<TensorStabilityReport::PerK> out;
  for (const Index k : k_values) {
    if (k < 1) {
      throw InvalidArgument("tensor_stability_scan: k must be >= 1");
    }
    TensorStabilityReport::PerK row{k, samples, 0.0};
    double min_eig = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
      // Three product terms C_r (x) M_r span non-product elements of the
      // finite sum form cheaply.
      Matrix t = Matrix::Zero(d * k, d * k);
      for (int r = 0; r < 3; ++r) {
        t += kron(ginibre(d, d, rng), ginibre(k, k, rng));
      }
      const Matrix image =
          apply_tensor_extension(channel, k, Matrix(t.adjoint() * t));
      min_eig = std::min(
          min_eig,
          hermitian_min_eigenvalue(0.5 * (image + image.adjoint())));
    }
    row.min_eigenvalue = min_eig;
    out.push_back(row);
  }
  return out;
}

TensorStabilityReport limit_cp_check(const LindbladModel& model,
                                     const Region& support, double t,
                                     std::span<const Index> k_values,
                                     int samples, Rng& rng,
                                     const ExactParams& params) {
  // Largest centered box whose dimension stays within the exact cap.
  int radius = 0;
  if (box_region(support, 0).dim() > params.dim_cap) {
    throw CapacityError("limit_cp_check: the support alone exceeds the cap");
  }
  while (box_region(support, radius + 1).dim() <= params.dim_cap) ++radius;
  const Region volume = box_region(support, radius);

  const Generator g = build_generator(model, volume);
  const QuantumChannel gamma = evolve_exact(g, t, params);

  TensorStabilityReport report;
  report.volume_sites = static_cast<Index>(volume.size());
  report.dim = volume.dim();
  report.time = t;
  report.unital_defect = check_normalization(gamma, 0.0).unital_defect;
  report.min_choi_eigenvalue =
      is_completely_positive(gamma, 0.0).min_choi_eigenvalue;
  report.per_k = tensor_stability_scan(gamma, k_values, samples, rng);
  return report;
}

}  // namespace qldyn
