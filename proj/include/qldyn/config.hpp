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

#ifndef QLDYN_CONFIG_HPP
#define QLDYN_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qldyn/lattice.hpp"
#include "qldyn/semigroup.hpp"

namespace qldyn {

// Fully resolved experiment description. The text format is UTF-8
// `section.key = value` lines with `#` comments; the key list is closed
// (unknown keys are rejected with their line number). See parse_config.
struct ExperimentConfig {
  int lattice_dimension = 1;

  std::string model_name;
  std::map<std::string, double> model_params;  // only explicitly set keys
  std::string channel_source = "model";        // model | transpose

  std::string observable_label = "Z";
  std::vector<int> observable_site = {0};

  std::vector<double> times;

  int schedule_steps = 4;
  std::string schedule_rule = "shell";
  int schedule_first_radius = 0;
  int schedule_site_cap = 10;

  std::vector<int> region_extent = {2};  // verify/kraus volume

  std::string backend_kind = "exact";  // exact | ode
  double ode_tol = 1e-8;
  double ode_max_step_factor = 0.1;
  long ode_max_steps = 2'000'000;
  Index exact_dim_cap = 64;
  Index action_dim_cap = 1024;

  struct Tolerances {
    double unital = 1e-10;
    double trace = 1e-10;
    double cp = 1e-9;
    double duality = 1e-10;
    double roundtrip = 1e-9;
    double semigroup = 1e-8;
    double cauchy_epsilon = 0.01;
    double cauchy_ratio = 0.9;
  } tol;

  std::vector<std::pair<double, double>> verify_pairs = {{0.3, 0.7},
                                                         {0.5, 0.5}};
  int verify_trials = 20;

  std::vector<Index> tensor_k = {2};
  int tensor_samples = 25;

  double kraus_rank_tol = -1.0;  // negative selects the automatic rule

  std::uint64_t seed = 0;
  std::string output_dir;
};

ExperimentConfig parse_config(const std::string& text);

// Canonical, fully resolved key=value echo; embedding it in a report makes
// the run reproducible from the report alone.
std::vector<std::pair<std::string, std::string>> config_echo(
    const ExperimentConfig& config);

// Bridges from the resolved config to domain objects.
LindbladModel model_from_config(const ExperimentConfig& config);
Region region_from_extent(const ExperimentConfig& config);
LocalOperator observable_from_config(const ExperimentConfig& config);

}  // namespace qldyn

#endif
