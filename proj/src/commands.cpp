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

#include "qldyn/commands.hpp"

#include <chrono>
#include <cmath>
#include <utility>

#include "qldyn/errors.hpp"
#include "qldyn/limits.hpp"

namespace qldyn {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

ReportEnvelope::ErrorKind kind_of(const std::exception& e) {
  // Everything a command computes is derived from the config, so a
  // precondition violation here means the config asked for something
  // infeasible (e.g. a schedule whose first volume cannot host a pattern).
  if (dynamic_cast<const ConfigError*>(&e) ||
      dynamic_cast<const InvalidArgument*>(&e)) {
    return ReportEnvelope::ErrorKind::Config;
  }
  if (dynamic_cast<const CapacityError*>(&e)) {
    return ReportEnvelope::ErrorKind::Capacity;
  }
  return ReportEnvelope::ErrorKind::Other;
}

void capture_error(ReportEnvelope& env, const std::exception& e) {
  env.status = "error";
  env.partial = true;
  env.error_message = e.what();
  env.error_kind = kind_of(e);
}

QuantumChannel channel_for(const ExperimentConfig& c, const Region& region,
                           double t) {
  if (c.channel_source == "transpose") {
    return transpose_channel(region.dim(), Picture::Heisenberg);
  }
  const Generator g = build_generator(model_from_config(c), region);
  return evolve_exact(g, t, ExactParams{c.exact_dim_cap});
}

Region checked_region(const ExperimentConfig& c) {
  const Region region = region_from_extent(c);
  if (region.dim() > c.exact_dim_cap) {
    throw CapacityError("region dimension " + std::to_string(region.dim()) +
                        " exceeds backend.exact_dim_cap " +
                        std::to_string(c.exact_dim_cap));
  }
  return region;
}

nlohmann::ordered_json verdict_to_json(const CauchyVerdict& v) {
  nlohmann::ordered_json out;
  out["cauchy_pass"] = v.cauchy_pass;
  out["monotone_from_index"] = v.monotone_from_index;
  out["violation_index"] = v.violation_index;
  out["final_increment"] = v.final_increment;
  return out;
}

}  // namespace

ReportEnvelope cmd_scan(const ExperimentConfig& c) {
  ReportEnvelope env;
  env.command = "scan";
  env.config = config_echo(c);
  env.csv.push_back({"volume_size", "time", "increment", "norm", "wall_ms"});
  const auto started = Clock::now();

  nlohmann::ordered_json scans = nlohmann::ordered_json::array();
  nlohmann::ordered_json scan_timings = nlohmann::ordered_json::array();
  bool all_pass = true;
  try {
    if (c.channel_source != "model") {
      throw ConfigError("cmd_scan: requires channel.source = model");
    }
    if (c.schedule_steps < 3) {
      throw ConfigError(
          "cmd_scan: schedule.steps must be >= 3 so the Cauchy assessment has "
          "at least two increments");
    }
    const LindbladModel model = model_from_config(c);
    const LocalOperator a = observable_from_config(c);
    const GrowthRule rule{c.schedule_rule, c.schedule_first_radius,
                          c.schedule_site_cap};
    const RegionSchedule schedule =
        region_schedule(a.support, c.schedule_steps, rule);
    BackendSpec backend;
    backend.kind = c.backend_kind == "exact" ? BackendSpec::Kind::Exact
                                             : BackendSpec::Kind::Ode;
    backend.ode = OdeParams{c.ode_tol, c.ode_max_step_factor, c.ode_max_steps};
    backend.action_dim_cap = c.action_dim_cap;

    for (const double t : c.times) {
      ConvergenceReport report = scan_limit(model, a, t, schedule, backend);
      report.observable_label = c.observable_label;
      report.verdict =
          cauchy_assessment(report, c.tol.cauchy_epsilon, c.tol.cauchy_ratio);
      all_pass = all_pass && report.verdict.cauchy_pass;

      nlohmann::ordered_json volumes = nlohmann::ordered_json::array();
      nlohmann::ordered_json wall = nlohmann::ordered_json::array();
      for (std::size_t k = 0; k < report.volumes.size(); ++k) {
        const VolumeRecord& record = report.volumes[k];
        volumes.push_back({{"sites", record.sites},
                           {"dim", record.dim},
                           {"norm", record.norm}});
        wall.push_back(record.wall_ms);
        const double increment = k == 0 ? 0.0 : report.increments[k - 1];
        env.csv.push_back({std::to_string(record.sites), format_number(t),
                           format_number(increment), format_number(record.norm),
                           format_number(record.wall_ms)});
      }
      nlohmann::ordered_json scan;
      scan["time"] = t;
      scan["volumes"] = std::move(volumes);
      scan["increments"] = report.increments;
      scan["verdict"] = verdict_to_json(report.verdict);
      scans.push_back(std::move(scan));
      scan_timings.push_back({{"time", t}, {"volume_ms", std::move(wall)}});
    }
    env.status = all_pass ? "pass" : "fail";
  } catch (const std::exception& e) {
    capture_error(env, e);
  }

  env.payload["observable"] = c.observable_label;
  env.payload["site"] = c.observable_site;
  env.payload["epsilon"] = c.tol.cauchy_epsilon;
  env.payload["ratio_bound"] = c.tol.cauchy_ratio;
  env.payload["scans"] = std::move(scans);
  env.timings["scans"] = std::move(scan_timings);
  env.total_ms = ms_since(started);
  return env;
}

ReportEnvelope cmd_verify(const ExperimentConfig& c) {
  ReportEnvelope env;
  env.command = "verify";
  env.config = config_echo(c);
  env.csv.push_back({"check", "time", "value", "threshold", "pass"});
  const auto started = Clock::now();

  const auto csv_row = [&env](const char* check, double t, double value,
                              double threshold, bool pass) {
    env.csv.push_back({check, format_number(t), format_number(value),
                       format_number(threshold), pass ? "1" : "0"});
  };

  bool all_pass = true;
  try {
    const Region region = checked_region(c);
    const Index d = region.dim();
    LocalOperator observable = observable_from_config(c);
    const Matrix a_embedded = embed(observable, region).matrix;

    env.payload["region"] = {{"sites", region.size()}, {"dim", d}};
    nlohmann::ordered_json channels = nlohmann::ordered_json::array();
    nlohmann::ordered_json channel_ms = nlohmann::ordered_json::array();

    for (std::size_t ti = 0; ti < c.times.size(); ++ti) {
      const double t = c.times[ti];
      const auto t_start = Clock::now();
      const QuantumChannel gamma = channel_for(c, region, t);
      nlohmann::ordered_json entry;
      entry["time"] = t;

      const NormalizationReport norm = check_normalization(gamma, c.tol.unital);
      entry["normalization"] = {{"unital_defect", norm.unital_defect},
                                {"trace_defect", norm.trace_defect},
                                {"pass", norm.pass}};
      csv_row("normalization", t, norm.unital_defect, c.tol.unital, norm.pass);
      all_pass = all_pass && norm.pass;

      const CpVerdict cp = is_completely_positive(gamma, c.tol.cp);
      entry["complete_positivity"] = {
          {"min_choi_eigenvalue", cp.min_choi_eigenvalue}, {"pass", cp.cp}};
      csv_row("complete_positivity", t, cp.min_choi_eigenvalue, -c.tol.cp,
              cp.cp);
      all_pass = all_pass && cp.cp;

      {
        Rng rng(mix_seed(c.seed, 1000 + ti));
        const QuantumChannel tau = dual_channel(gamma);
        double max_defect = 0.0;
        for (int trial = 0; trial < c.verify_trials; ++trial) {
          const Matrix rho = random_density(d, rng);
          const Matrix a = random_hermitian(d, rng);
          const Complex forward = (rho * gamma.apply(a)).trace();
          const Complex backward = (tau.apply(rho) * a).trace();
          max_defect = std::max(max_defect, std::abs(forward - backward));
        }
        const double dual_trace =
            check_normalization(tau, c.tol.trace).trace_defect;
        const bool pass =
            max_defect <= c.tol.duality && dual_trace <= c.tol.trace;
        entry["duality"] = {{"max_pairing_defect", max_defect},
                            {"dual_trace_defect", dual_trace},
                            {"trials", c.verify_trials},
                            {"pass", pass}};
        csv_row("duality", t, max_defect, c.tol.duality, pass);
        all_pass = all_pass && pass;
      }

      if (cp.cp) {
        const KrausSet& ks = gamma.kraus(c.kraus_rank_tol);
        Matrix total = Matrix::Zero(d, d);
        for (const Matrix& w : ks.ops) total += w.adjoint() * w;
        const double norm_defect =
            spectral_norm(Matrix(total - Matrix::Identity(d, d)));
        const double recon = superoperator_distance(
            kraus_to_super(ks, gamma.picture()), gamma.superoperator());
        const bool pass =
            norm_defect <= c.tol.roundtrip && recon <= c.tol.roundtrip;
        entry["kraus_roundtrip"] = {{"count", ks.ops.size()},
                                    {"normalization_defect", norm_defect},
                                    {"reconstruction_defect", recon},
                                    {"pass", pass}};
        csv_row("kraus_roundtrip", t, recon, c.tol.roundtrip, pass);
        all_pass = all_pass && pass;
      } else {
        entry["kraus_roundtrip"] = {{"skipped", "channel is not completely positive"},
                                    {"pass", false}};
        csv_row("kraus_roundtrip", t, 0.0, c.tol.roundtrip, false);
        all_pass = false;
      }

      {
        const Matrix evolved = gamma.apply(a_embedded);
        const double base = operator_norm(observable);
        entry["observable"] = {
            {"label", c.observable_label},
            {"norm_ratio", base == 0 ? 0.0 : operator_norm(evolved) / base}};
      }

      {
        Rng rng(mix_seed(c.seed, 2000 + ti));
        const auto rows =
            tensor_stability_scan(gamma, c.tensor_k, c.tensor_samples, rng);
        nlohmann::ordered_json per_k = nlohmann::ordered_json::array();
        bool pass = true;
        double worst = 0.0;
        for (const auto& row : rows) {
          per_k.push_back({{"k", row.k},
                           {"samples", row.samples},
                           {"min_eigenvalue", row.min_eigenvalue}});
          pass = pass && row.min_eigenvalue >= -c.tol.cp;
          worst = std::min(worst, row.min_eigenvalue);
        }
        entry["tensor_stability"] = {{"per_k", std::move(per_k)}, {"pass", pass}};
        csv_row("tensor_stability", t, worst, -c.tol.cp, pass);
        all_pass = all_pass && pass;
      }

      channels.push_back(std::move(entry));
      channel_ms.push_back(ms_since(t_start));
    }
    env.payload["channels"] = std::move(channels);

    if (c.channel_source == "model") {
      nlohmann::ordered_json law = nlohmann::ordered_json::array();
      for (const auto& [t, s] : c.verify_pairs) {
        const QuantumChannel first = channel_for(c, region, s);
        const QuantumChannel second = channel_for(c, region, t);
        const QuantumChannel joint = channel_for(c, region, t + s);
        const Superoperator composed{
            d, second.superoperator().mat * first.superoperator().mat};
        const double defect =
            superoperator_distance(joint.superoperator(), composed);
        const bool pass = defect <= c.tol.semigroup;
        law.push_back({{"t", t}, {"s", s}, {"defect", defect}, {"pass", pass}});
        csv_row("semigroup_law", t + s, defect, c.tol.semigroup, pass);
        all_pass = all_pass && pass;
      }
      env.payload["semigroup_law"] = std::move(law);
    }

    env.payload["pass"] = all_pass;
    env.timings["channel_ms"] = std::move(channel_ms);
    env.status = all_pass ? "pass" : "fail";
  } catch (const std::exception& e) {
    capture_error(env, e);
  }
  env.total_ms = ms_since(started);
  return env;
}

ReportEnvelope cmd_kraus(const ExperimentConfig& c) {
  ReportEnvelope env;
  env.command = "kraus";
  env.config = config_echo(c);
  env.csv.push_back({"index", "choi_eigenvalue", "retained"});
  const auto started = Clock::now();

  try {
    if (c.times.size() != 1) {
      throw ConfigError("cmd_kraus: exactly one time value is required");
    }
    const double t = c.times.front();
    const Region region = checked_region(c);
    const Index d = region.dim();
    const QuantumChannel gamma = channel_for(c, region, t);

    RealVector spectrum = hermitian_eigenvalues(
        Matrix(0.5 * (gamma.choi().mat + gamma.choi().mat.adjoint())));
    spectrum.reverseInPlace();  // descending
    nlohmann::ordered_json eigenvalues = nlohmann::ordered_json::array();
    for (Index i = 0; i < spectrum.size(); ++i) eigenvalues.push_back(spectrum(i));

    env.payload["time"] = t;
    env.payload["dim"] = d;
    env.payload["choi_eigenvalues"] = std::move(eigenvalues);

    try {
      const KrausSet& ks = gamma.kraus(c.kraus_rank_tol);
      Matrix total = Matrix::Zero(d, d);
      nlohmann::ordered_json operators = nlohmann::ordered_json::array();
      nlohmann::ordered_json weights = nlohmann::ordered_json::array();
      for (const Matrix& w : ks.ops) {
        total += w.adjoint() * w;
        operators.push_back(matrix_to_json(w));
        weights.push_back(w.squaredNorm());
      }
      const double norm_defect =
          spectral_norm(Matrix(total - Matrix::Identity(d, d)));
      const double recon = superoperator_distance(
          kraus_to_super(ks, gamma.picture()), gamma.superoperator());

      env.payload["count"] = ks.ops.size();
      env.payload["weights"] = std::move(weights);
      env.payload["normalization_defect"] = norm_defect;
      env.payload["reconstruction_defect"] = recon;
      env.payload["operators"] = std::move(operators);

      for (Index i = 0; i < spectrum.size(); ++i) {
        env.csv.push_back(
            {std::to_string(i), format_number(spectrum(i)),
             i < static_cast<Index>(ks.ops.size()) ? "1" : "0"});
      }
      const bool pass =
          norm_defect <= c.tol.roundtrip && recon <= c.tol.roundtrip;
      env.payload["pass"] = pass;
      env.status = pass ? "pass" : "fail";
    } catch (const NotCompletelyPositiveError& e) {
      env.payload["witness_eigenvalue"] = e.witness_eigenvalue;
      env.payload["pass"] = false;
      env.error_message = e.what();
      for (Index i = 0; i < spectrum.size(); ++i) {
        env.csv.push_back({std::to_string(i), format_number(spectrum(i)), "0"});
      }
      env.status = "fail";
    }
  } catch (const std::exception& e) {
    capture_error(env, e);
  }
  env.total_ms = ms_since(started);
  return env;
}

}  // namespace qldyn
