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

#include "qldyn/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "qldyn/errors.hpp"

namespace qldyn {

namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

struct RawEntry {
  std::string value;
  int line = 0;
};

[[noreturn]] void fail(const std::string& key, const RawEntry& entry,
                       const std::string& why) {
  throw ConfigError("config line " + std::to_string(entry.line) + ": key '" +
                    key + "': " + why);
}

double to_double(const std::string& key, const RawEntry& entry,
                 const std::string& token) {
  double out = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || !std::isfinite(out)) {
    fail(key, entry, "invalid number '" + token + "'");
  }
  return out;
}

long to_long(const std::string& key, const RawEntry& entry,
             const std::string& token) {
  long out = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), out);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    fail(key, entry, "invalid integer '" + token + "'");
  }
  return out;
}

std::uint64_t to_uint64(const std::string& key, const RawEntry& entry,
                        const std::string& token) {
  std::uint64_t out = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), out);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    fail(key, entry, "invalid unsigned integer '" + token + "'");
  }
  return out;
}

std::vector<std::string> split(const std::string& value, char sep) {
  std::vector<std::string> out;
  std::string token;
  std::istringstream stream(value);
  while (std::getline(stream, token, sep)) out.push_back(trim(token));
  return out;
}

std::string format_double(double x) { return nlohmann::json(x).dump(); }

template <typename T>
std::string join(const std::vector<T>& values,
                 const std::function<std::string(const T&)>& f) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += f(values[i]);
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  std::map<std::string, RawEntry> raw;
  {
    std::istringstream stream(text);
    std::string line;
    int lineno = 0;
    while (std::getline(stream, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string stripped = trim(line);
      if (stripped.empty()) continue;
      const auto eq = stripped.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": expected 'section.key = value'");
      }
      const std::string key = trim(stripped.substr(0, eq));
      const std::string value = trim(stripped.substr(eq + 1));
      if (key.empty() || key.find('.') == std::string::npos) {
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": malformed key '" + key + "'");
      }
      const auto [it, inserted] = raw.insert({key, {value, lineno}});
      if (!inserted) {
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": duplicate key '" + key + "' (first set on line " +
                          std::to_string(it->second.line) + ")");
      }
    }
  }

  ExperimentConfig c;
  bool seed_present = false;

  const auto take = [&raw](const char* key) -> std::optional<RawEntry> {
    const auto it = raw.find(key);
    if (it == raw.end()) return std::nullopt;
    RawEntry entry = it->second;
    raw.erase(it);
    return entry;
  };

  if (const auto e = take("lattice.dimension")) {
    const long v = to_long("lattice.dimension", *e, e->value);
    if (v != 1 && v != 2) fail("lattice.dimension", *e, "must be 1 or 2");
    c.lattice_dimension = static_cast<int>(v);
  }
  if (const auto e = take("model.name")) c.model_name = e->value;
  for (const char* p : {"J", "h", "kappa"}) {
    const std::string key = std::string("model.") + p;
    if (const auto e = take(key.c_str())) {
      c.model_params[p] = to_double(key, *e, e->value);
    }
  }
  if (const auto e = take("channel.source")) {
    if (e->value != "model" && e->value != "transpose") {
      fail("channel.source", *e, "must be 'model' or 'transpose'");
    }
    c.channel_source = e->value;
  }
  if (const auto e = take("observable.label")) c.observable_label = e->value;
  if (const auto e = take("observable.site")) {
    c.observable_site.clear();
    for (const auto& token : split(e->value, ',')) {
      c.observable_site.push_back(
          static_cast<int>(to_long("observable.site", *e, token)));
    }
  }
  if (const auto e = take("time.values")) {
    for (const auto& token : split(e->value, ',')) {
      const double t = to_double("time.values", *e, token);
      if (t < 0) fail("time.values", *e, "times must be >= 0");
      c.times.push_back(t);
    }
    if (c.times.empty()) fail("time.values", *e, "the list is empty");
  }
  if (const auto e = take("schedule.steps")) {
    const long v = to_long("schedule.steps", *e, e->value);
    if (v < 2) fail("schedule.steps", *e, "must be >= 2");
    c.schedule_steps = static_cast<int>(v);
  }
  if (const auto e = take("schedule.rule")) {
    if (e->value != "shell") fail("schedule.rule", *e, "unknown rule");
    c.schedule_rule = e->value;
  }
  if (const auto e = take("schedule.first_radius")) {
    const long v = to_long("schedule.first_radius", *e, e->value);
    if (v < 0) fail("schedule.first_radius", *e, "must be >= 0");
    c.schedule_first_radius = static_cast<int>(v);
  }
  if (const auto e = take("schedule.site_cap")) {
    const long v = to_long("schedule.site_cap", *e, e->value);
    if (v < 1) fail("schedule.site_cap", *e, "must be >= 1");
    c.schedule_site_cap = static_cast<int>(v);
  }
  if (const auto e = take("region.extent")) {
    c.region_extent.clear();
    for (const auto& token : split(e->value, ',')) {
      const long v = to_long("region.extent", *e, token);
      if (v < 1) fail("region.extent", *e, "extents must be >= 1");
      c.region_extent.push_back(static_cast<int>(v));
    }
  }
  if (const auto e = take("backend.kind")) {
    if (e->value != "exact" && e->value != "ode") {
      fail("backend.kind", *e, "must be 'exact' or 'ode'");
    }
    c.backend_kind = e->value;
  }
  if (const auto e = take("backend.ode_tol")) {
    c.ode_tol = to_double("backend.ode_tol", *e, e->value);
    if (c.ode_tol <= 0) fail("backend.ode_tol", *e, "must be > 0");
  }
  if (const auto e = take("backend.ode_max_step_factor")) {
    c.ode_max_step_factor = to_double("backend.ode_max_step_factor", *e, e->value);
    if (c.ode_max_step_factor <= 0 || c.ode_max_step_factor > 1) {
      fail("backend.ode_max_step_factor", *e, "must be in (0, 1]");
    }
  }
  if (const auto e = take("backend.ode_max_steps")) {
    c.ode_max_steps = to_long("backend.ode_max_steps", *e, e->value);
    if (c.ode_max_steps < 1) fail("backend.ode_max_steps", *e, "must be >= 1");
  }
  if (const auto e = take("backend.exact_dim_cap")) {
    c.exact_dim_cap = to_long("backend.exact_dim_cap", *e, e->value);
    if (c.exact_dim_cap < 2) fail("backend.exact_dim_cap", *e, "must be >= 2");
  }
  if (const auto e = take("backend.action_dim_cap")) {
    c.action_dim_cap = to_long("backend.action_dim_cap", *e, e->value);
    if (c.action_dim_cap < 2) fail("backend.action_dim_cap", *e, "must be >= 2");
  }

  const auto tolerance = [&](const char* key, double* slot) {
    if (const auto e = take(key)) {
      *slot = to_double(key, *e, e->value);
      if (*slot <= 0) fail(key, *e, "tolerances must be > 0");
    }
  };
  tolerance("tolerances.unital", &c.tol.unital);
  tolerance("tolerances.trace", &c.tol.trace);
  tolerance("tolerances.cp", &c.tol.cp);
  tolerance("tolerances.duality", &c.tol.duality);
  tolerance("tolerances.roundtrip", &c.tol.roundtrip);
  tolerance("tolerances.semigroup", &c.tol.semigroup);
  tolerance("tolerances.cauchy_epsilon", &c.tol.cauchy_epsilon);
  if (const auto e = take("tolerances.cauchy_ratio")) {
    c.tol.cauchy_ratio = to_double("tolerances.cauchy_ratio", *e, e->value);
    if (c.tol.cauchy_ratio <= 0 || c.tol.cauchy_ratio > 1) {
      fail("tolerances.cauchy_ratio", *e, "must be in (0, 1]");
    }
  }

  if (const auto e = take("verify.pairs")) {
    c.verify_pairs.clear();
    for (const auto& token : split(e->value, ',')) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) {
        fail("verify.pairs", *e, "expected 't:s' entries");
      }
      const double t = to_double("verify.pairs", *e, trim(token.substr(0, colon)));
      const double s = to_double("verify.pairs", *e, trim(token.substr(colon + 1)));
      if (t < 0 || s < 0) fail("verify.pairs", *e, "times must be >= 0");
      c.verify_pairs.push_back({t, s});
    }
    if (c.verify_pairs.empty()) fail("verify.pairs", *e, "the list is empty");
  }
  if (const auto e = take("verify.trials")) {
    const long v = to_long("verify.trials", *e, e->value);
    if (v < 1) fail("verify.trials", *e, "must be >= 1");
    c.verify_trials = static_cast<int>(v);
  }
  if (const auto e = take("tensor.k_values")) {
    c.tensor_k.clear();
    for (const auto& token : split(e->value, ',')) {
      const long v = to_long("tensor.k_values", *e, token);
      if (v < 1) fail("tensor.k_values", *e, "k must be >= 1");
      c.tensor_k.push_back(v);
    }
    if (c.tensor_k.empty()) fail("tensor.k_values", *e, "the list is empty");
  }
  if (const auto e = take("tensor.samples")) {
    const long v = to_long("tensor.samples", *e, e->value);
    if (v < 1) fail("tensor.samples", *e, "must be >= 1");
    c.tensor_samples = static_cast<int>(v);
  }
  if (const auto e = take("kraus.rank_tol")) {
    c.kraus_rank_tol = to_double("kraus.rank_tol", *e, e->value);
  }
  if (const auto e = take("run.seed")) {
    c.seed = to_uint64("run.seed", *e, e->value);
    seed_present = true;
  }
  if (const auto e = take("output.dir")) c.output_dir = e->value;

  if (!raw.empty()) {
    // Report the earliest unknown key for a stable diagnostic.
    const auto worst = std::min_element(
        raw.begin(), raw.end(), [](const auto& a, const auto& b) {
          return a.second.line < b.second.line;
        });
    throw ConfigError("config line " + std::to_string(worst->second.line) +
                      ": unknown key '" + worst->first + "'");
  }

  // Cross-field validation.
  if (!seed_present) {
    throw ConfigError("config: run.seed is required (reproducibility)");
  }
  if (c.times.empty()) {
    throw ConfigError("config: time.values is required");
  }
  if (c.channel_source == "model" && c.model_name.empty()) {
    throw ConfigError("config: model.name is required when channel.source = model");
  }
  if (c.model_name.empty() && !c.model_params.empty()) {
    throw ConfigError("config: model.* parameters set without model.name");
  }
  if (static_cast<int>(c.observable_site.size()) != c.lattice_dimension) {
    throw ConfigError("config: observable.site needs " +
                      std::to_string(c.lattice_dimension) + " coordinates");
  }
  if (static_cast<int>(c.region_extent.size()) != c.lattice_dimension) {
    throw ConfigError("config: region.extent needs " +
                      std::to_string(c.lattice_dimension) + " entries");
  }

  // Names must resolve against the catalogs at parse time.
  try {
    if (!c.model_name.empty()) model_from_config(c);
    observable_from_config(c);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

LindbladModel model_from_config(const ExperimentConfig& config) {
  return make_model(config.model_name, config.model_params,
                    config.lattice_dimension);
}

Region region_from_extent(const ExperimentConfig& config) {
  std::vector<Site> sites;
  if (config.lattice_dimension == 1) {
    for (int x = 0; x < config.region_extent[0]; ++x) sites.push_back(site(x));
  } else {
    for (int x = 0; x < config.region_extent[0]; ++x) {
      for (int y = 0; y < config.region_extent[1]; ++y) {
        sites.push_back(site(x, y));
      }
    }
  }
  return make_region(std::move(sites));
}

LocalOperator observable_from_config(const ExperimentConfig& config) {
  const Site where = config.lattice_dimension == 1
                         ? site(config.observable_site[0])
                         : site(config.observable_site[0],
                                config.observable_site[1]);
  return site_operator(config.observable_label, where);
}

std::vector<std::pair<std::string, std::string>> config_echo(
    const ExperimentConfig& c) {
  std::vector<std::pair<std::string, std::string>> echo;
  const auto add = [&echo](const std::string& key, const std::string& value) {
    echo.push_back({key, value});
  };

  add("lattice.dimension", std::to_string(c.lattice_dimension));
  if (!c.model_name.empty()) {
    add("model.name", c.model_name);
    const LindbladModel model = model_from_config(c);
    for (const char* p : {"J", "h", "kappa"}) {
      const auto it = model.params.find(p);
      if (it != model.params.end()) {
        add(std::string("model.") + p, format_double(it->second));
      }
    }
  }
  add("channel.source", c.channel_source);
  add("observable.label", c.observable_label);
  add("observable.site",
      join<int>(c.observable_site,
                [](const int& v) { return std::to_string(v); }));
  add("time.values", join<double>(c.times, [](const double& v) {
        return format_double(v);
      }));
  add("schedule.steps", std::to_string(c.schedule_steps));
  add("schedule.rule", c.schedule_rule);
  add("schedule.first_radius", std::to_string(c.schedule_first_radius));
  add("schedule.site_cap", std::to_string(c.schedule_site_cap));
  add("region.extent",
      join<int>(c.region_extent, [](const int& v) { return std::to_string(v); }));
  add("backend.kind", c.backend_kind);
  add("backend.ode_tol", format_double(c.ode_tol));
  add("backend.ode_max_step_factor", format_double(c.ode_max_step_factor));
  add("backend.ode_max_steps", std::to_string(c.ode_max_steps));
  add("backend.exact_dim_cap", std::to_string(c.exact_dim_cap));
  add("backend.action_dim_cap", std::to_string(c.action_dim_cap));
  add("tolerances.unital", format_double(c.tol.unital));
  add("tolerances.trace", format_double(c.tol.trace));
  add("tolerances.cp", format_double(c.tol.cp));
  add("tolerances.duality", format_double(c.tol.duality));
  add("tolerances.roundtrip", format_double(c.tol.roundtrip));
  add("tolerances.semigroup", format_double(c.tol.semigroup));
  add("tolerances.cauchy_epsilon", format_double(c.tol.cauchy_epsilon));
  add("tolerances.cauchy_ratio", format_double(c.tol.cauchy_ratio));
  add("verify.pairs",
      join<std::pair<double, double>>(
          c.verify_pairs, [](const std::pair<double, double>& p) {
            return format_double(p.first) + ":" + format_double(p.second);
          }));
  add("verify.trials", std::to_string(c.verify_trials));
  add("tensor.k_values", join<Index>(c.tensor_k, [](const Index& v) {
        return std::to_string(v);
      }));
  add("tensor.samples", std::to_string(c.tensor_samples));
  add("kraus.rank_tol", format_double(c.kraus_rank_tol));
  add("run.seed", std::to_string(c.seed));
  if (!c.output_dir.empty()) add("output.dir", c.output_dir);
  return echo;
}

}  // namespace qldyn
