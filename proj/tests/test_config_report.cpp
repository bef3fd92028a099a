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

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "qldyn/config.hpp"
#include "qldyn/errors.hpp"
#include "qldyn/report.hpp"

using namespace qldyn;

namespace {

// A config text that exercises every section; values chosen to differ from
// the defaults wherever validation permits.
const char* kFullConfig = R"(
# chain scan
lattice.dimension = 1
model.name = ising_damping
model.J = 1.0
model.kappa = 0.5
channel.source = model
observable.label = Z
observable.site = 0
time.values = 0.0, 0.5, 1.0
schedule.steps = 4
schedule.rule = shell
schedule.first_radius = 1
schedule.site_cap = 9
region.extent = 3
backend.kind = ode
backend.ode_tol = 1e-6
backend.ode_max_step_factor = 0.2
backend.ode_max_steps = 500000
backend.exact_dim_cap = 128
backend.action_dim_cap = 512
tolerances.unital = 1e-9
tolerances.cp = 1e-8
tolerances.cauchy_epsilon = 0.02
tolerances.cauchy_ratio = 0.8
verify.pairs = 0.3:0.7, 0.5:0.5
verify.trials = 10
tensor.k_values = 2, 4
tensor.samples = 50
kraus.rank_tol = 1e-10
run.seed = 42
output.dir = out
)";

std::string minimal() {
  return "model.name = dephasing\ntime.values = 1.0\nrun.seed = 7\n";
}

std::string echo_text(const ExperimentConfig& c) {
  std::string out;
  for (const auto& [key, value] : config_echo(c)) {
    out += key + " = " + value + "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("parse_config fills defaults from a minimal config") {
  const ExperimentConfig c = parse_config(minimal());
  CHECK(c.lattice_dimension == 1);
  CHECK(c.model_name == "dephasing");
  CHECK(c.channel_source == "model");
  CHECK(c.observable_label == "Z");
  CHECK(c.observable_site == std::vector<int>{0});
  CHECK(c.times == std::vector<double>{1.0});
  CHECK(c.schedule_steps == 4);
  CHECK(c.schedule_rule == "shell");
  CHECK(c.schedule_first_radius == 0);
  CHECK(c.schedule_site_cap == 10);
  CHECK(c.region_extent == std::vector<int>{2});
  CHECK(c.backend_kind == "exact");
  CHECK(c.ode_tol == 1e-8);
  CHECK(c.exact_dim_cap == 64);
  CHECK(c.action_dim_cap == 1024);
  CHECK(c.tol.unital == 1e-10);
  CHECK(c.tol.trace == 1e-10);
  CHECK(c.tol.cp == 1e-9);
  CHECK(c.tol.duality == 1e-10);
  CHECK(c.tol.roundtrip == 1e-9);
  CHECK(c.tol.semigroup == 1e-8);
  CHECK(c.tol.cauchy_epsilon == 0.01);
  CHECK(c.tol.cauchy_ratio == 0.9);
  REQUIRE(c.verify_pairs.size() == 2);
  CHECK(c.verify_pairs[0] == std::pair<double, double>{0.3, 0.7});
  CHECK(c.verify_pairs[1] == std::pair<double, double>{0.5, 0.5});
  CHECK(c.verify_trials == 20);
  CHECK(c.tensor_k == std::vector<Index>{2});
  CHECK(c.tensor_samples == 25);
  CHECK(c.kraus_rank_tol == -1.0);
  CHECK(c.seed == 7);
  CHECK(c.output_dir.empty());
}

TEST_CASE("parse_config reads every section of a full config") {
  const ExperimentConfig c = parse_config(kFullConfig);
  CHECK(c.model_name == "ising_damping");
  CHECK(c.model_params.at("J") == 1.0);
  CHECK(c.model_params.at("kappa") == 0.5);
  CHECK(c.times == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(c.schedule_first_radius == 1);
  CHECK(c.schedule_site_cap == 9);
  CHECK(c.region_extent == std::vector<int>{3});
  CHECK(c.backend_kind == "ode");
  CHECK(c.ode_tol == 1e-6);
  CHECK(c.ode_max_step_factor == 0.2);
  CHECK(c.ode_max_steps == 500000);
  CHECK(c.tol.unital == 1e-9);
  CHECK(c.tol.cauchy_epsilon == 0.02);
  CHECK(c.verify_trials == 10);
  CHECK(c.tensor_k == std::vector<Index>{2, 4});
  CHECK(c.tensor_samples == 50);
  CHECK(c.kraus_rank_tol == 1e-10);
  CHECK(c.seed == 42);
  CHECK(c.output_dir == "out");

  // The model resolves at parse time; h stays at the catalog default.
  const LindbladModel model = model_from_config(c);
  CHECK(model.params.at("J") == 1.0);
  CHECK(model.params.at("h") == 0.8);
}

TEST_CASE("parse_config rejects malformed input with line numbers") {
  const std::string base = minimal();

  SUBCASE("missing seed") {
    CHECK_THROWS_WITH_AS(parse_config("model.name = dephasing\ntime.values = 1\n"),
                         doctest::Contains("run.seed"), ConfigError);
  }
  SUBCASE("missing times") {
    CHECK_THROWS_WITH_AS(parse_config("model.name = dephasing\nrun.seed = 1\n"),
                         doctest::Contains("time.values"), ConfigError);
  }
  SUBCASE("unknown key names itself and its line") {
    const std::string text = "modle.name = dephasing\n" + base;
    try {
      parse_config(text);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      const std::string what = e.what();
      CHECK(what.find("unknown key 'modle.name'") != std::string::npos);
      CHECK(what.find("line 1") != std::string::npos);
    }
  }
  SUBCASE("duplicate key") {
    CHECK_THROWS_WITH_AS(parse_config(base + "run.seed = 8\n"),
                         doctest::Contains("duplicate key 'run.seed'"),
                         ConfigError);
  }
  SUBCASE("line without equals sign") {
    CHECK_THROWS_WITH_AS(parse_config("run.seed\n"),
                         doctest::Contains("expected 'section.key = value'"),
                         ConfigError);
  }
  SUBCASE("key without a section") {
    CHECK_THROWS_WITH_AS(parse_config("seed = 1\n"),
                         doctest::Contains("malformed key"), ConfigError);
  }
  SUBCASE("bad number") {
    CHECK_THROWS_WITH_AS(parse_config(base + "model.kappa = fast\n"),
                         doctest::Contains("invalid number 'fast'"),
                         ConfigError);
  }
  SUBCASE("negative seed") {
    CHECK_THROWS_WITH_AS(
        parse_config("model.name = dephasing\ntime.values = 1\nrun.seed = -3\n"),
        doctest::Contains("invalid unsigned integer"), ConfigError);
  }
  SUBCASE("negative time") {
    CHECK_THROWS_WITH_AS(
        parse_config("model.name = dephasing\ntime.values = -1\nrun.seed = 1\n"),
        doctest::Contains("times must be >= 0"), ConfigError);
  }
  SUBCASE("nonpositive tolerance") {
    CHECK_THROWS_WITH_AS(parse_config(base + "tolerances.cp = -1e-9\n"),
                         doctest::Contains("tolerances must be > 0"),
                         ConfigError);
  }
  SUBCASE("cauchy ratio out of range") {
    CHECK_THROWS_WITH_AS(parse_config(base + "tolerances.cauchy_ratio = 1.5\n"),
                         doctest::Contains("in (0, 1]"), ConfigError);
  }
  SUBCASE("lattice dimension out of range") {
    CHECK_THROWS_WITH_AS(parse_config(base + "lattice.dimension = 3\n"),
                         doctest::Contains("must be 1 or 2"), ConfigError);
  }
  SUBCASE("unknown channel source") {
    CHECK_THROWS_WITH_AS(parse_config(base + "channel.source = schroedinger\n"),
                         doctest::Contains("'model' or 'transpose'"),
                         ConfigError);
  }
  SUBCASE("unknown model name surfaces the catalog error") {
    CHECK_THROWS_WITH_AS(
        parse_config("model.name = modle\ntime.values = 1\nrun.seed = 1\n"),
        doctest::Contains("modle"), ConfigError);
  }
  SUBCASE("unknown observable label") {
    CHECK_THROWS_WITH_AS(parse_config(base + "observable.label = Q\n"),
                         doctest::Contains("Q"), ConfigError);
  }
  SUBCASE("model params without a model") {
    CHECK_THROWS_WITH_AS(
        parse_config("channel.source = transpose\nmodel.kappa = 0.5\n"
                     "time.values = 1\nrun.seed = 1\n"),
        doctest::Contains("without model.name"), ConfigError);
  }
  SUBCASE("site arity must match the lattice dimension") {
    CHECK_THROWS_WITH_AS(parse_config(base + "lattice.dimension = 2\n"
                                             "region.extent = 2,2\n"),
                         doctest::Contains("observable.site needs 2"),
                         ConfigError);
  }
  SUBCASE("extent arity must match the lattice dimension") {
    CHECK_THROWS_WITH_AS(parse_config(base + "lattice.dimension = 2\n"
                                             "observable.site = 0,0\n"),
                         doctest::Contains("region.extent needs 2"),
                         ConfigError);
  }
  SUBCASE("schedule steps below two") {
    CHECK_THROWS_WITH_AS(parse_config(base + "schedule.steps = 1\n"),
                         doctest::Contains("must be >= 2"), ConfigError);
  }
}

TEST_CASE("parse_config ignores comments and blank lines") {
  const ExperimentConfig c = parse_config(
      "# header\n\nmodel.name = dephasing  # catalog entry\n"
      "time.values = 1.0\n   \nrun.seed = 7 # reproducible\n");
  CHECK(c.model_name == "dephasing");
  CHECK(c.seed == 7);
}

TEST_CASE("config_echo round-trips through the parser") {
  for (const char* text : {kFullConfig, "model.name = dephasing\n"
                                        "time.values = 0.0,0.25\n"
                                        "lattice.dimension = 2\n"
                                        "observable.site = 1,0\n"
                                        "region.extent = 2,2\n"
                                        "run.seed = 11\n"}) {
    const ExperimentConfig first = parse_config(text);
    const auto echo = config_echo(first);
    const ExperimentConfig second = parse_config(echo_text(first));
    CHECK(config_echo(second) == echo);
  }
}

TEST_CASE("config_echo resolves model defaults and formats numbers") {
  const ExperimentConfig c = parse_config(
      "model.name = ising_damping\nmodel.J = 2.0\ntime.values = 1\n"
      "backend.ode_tol = 1e-8\nrun.seed = 5\n");
  const auto echo = config_echo(c);
  const auto find = [&echo](const std::string& key) -> std::string {
    for (const auto& [k, v] : echo) {
      if (k == key) return v;
    }
    return "<missing>";
  };
  CHECK(find("model.J") == "2.0");
  CHECK(find("model.h") == "0.8");      // catalog default, made explicit
  CHECK(find("model.kappa") == "0.5");  // catalog default, made explicit
  CHECK(find("backend.ode_tol") == "1e-08");
  CHECK(find("verify.pairs") == "0.3:0.7,0.5:0.5");
  CHECK(find("run.seed") == "5");
  CHECK(find("output.dir") == "<missing>");
}

TEST_CASE("region_from_extent builds the embedding window") {
  SUBCASE("chain") {
    const ExperimentConfig c = parse_config(minimal() + "region.extent = 3\n");
    const Region r = region_from_extent(c);
    REQUIRE(r.size() == 3);
    CHECK(r.dim() == 8);
    CHECK(r.contains(site(2)));
    CHECK(!r.contains(site(3)));
  }
  SUBCASE("grid") {
    const ExperimentConfig c =
        parse_config("model.name = dephasing\ntime.values = 1\nrun.seed = 1\n"
                     "lattice.dimension = 2\nobservable.site = 0,0\n"
                     "region.extent = 2,3\n");
    const Region r = region_from_extent(c);
    REQUIRE(r.size() == 6);
    CHECK(r.contains(site(1, 2)));
    CHECK(!r.contains(site(2, 0)));
  }
}

TEST_CASE("observable_from_config places the labeled operator") {
  const ExperimentConfig c = parse_config(
      minimal() + "observable.label = X\nobservable.site = 1\n"
                  "region.extent = 3\n");
  const LocalOperator a = observable_from_config(c);
  CHECK(a.support.size() == 1);
  CHECK(a.support.contains(site(1)));
  CHECK(a.matrix(0, 1) == Complex(1, 0));
  CHECK(a.matrix(1, 0) == Complex(1, 0));
}

TEST_CASE("matrix_to_json stores row-major re/im pairs") {
  Matrix m(2, 2);
  m << Complex(1, 0), Complex(0, 1), Complex(2, -3), Complex(0, 0);
  const nlohmann::ordered_json j = matrix_to_json(m);
  CHECK(j["dim"] == 2);
  REQUIRE(j["data"].size() == 4);
  CHECK(j["data"][1][0] == 0.0);
  CHECK(j["data"][1][1] == 1.0);
  CHECK(j["data"][2][0] == 2.0);
  CHECK(j["data"][2][1] == -3.0);
}

TEST_CASE("format_number uses shortest round-trip decimals") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(1.0) == "1.0");
  CHECK(format_number(1e-8) == "1e-08");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-2.25) == "-2.25");
}

TEST_CASE("render_json emits the report envelope schema") {
  ReportEnvelope envelope;
  envelope.command = "verify";
  envelope.config = {{"run.seed", "7"}};
  envelope.status = "pass";
  envelope.total_ms = 12.5;
  envelope.timings["channel_ms"] = {1.0, 2.0};
  envelope.payload["pass"] = true;

  const nlohmann::json root = nlohmann::json::parse(render_json(envelope));
  CHECK(root["schema"] == 1);
  CHECK(root["artifact"]["name"] == "qldyn");
  CHECK(root["artifact"]["version"] == "0.1.0");
  CHECK(root["command"] == "verify");
  CHECK(root["status"] == "pass");
  CHECK(root["partial"] == false);
  CHECK(!root.contains("error"));
  CHECK(root["config"]["run.seed"] == "7");
  CHECK(root["timings"]["total_ms"] == 12.5);
  CHECK(root["payload"]["pass"] == true);

  envelope.status = "error";
  envelope.partial = true;
  envelope.error_message = "capacity: too big";
  const nlohmann::json failed = nlohmann::json::parse(render_json(envelope));
  CHECK(failed["error"] == "capacity: too big");
  CHECK(failed["partial"] == true);
}

TEST_CASE("render_csv joins rows with commas") {
  ReportEnvelope envelope;
  envelope.csv = {{"a", "b"}, {"1", "2.5"}};
  CHECK(render_csv(envelope) == "a,b\n1,2.5\n");
  envelope.csv.clear();
  CHECK(render_csv(envelope).empty());
}

TEST_CASE("write_file_atomic replaces content in place") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "qldyn_report_test";
  fs::create_directories(dir);
  const std::string path = (dir / "report.json").string();

  write_file_atomic(path, "first\n");
  write_file_atomic(path, "second\n");
  std::ifstream in(path, std::ios::binary);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(content == "second\n");
  CHECK(!fs::exists(path + ".tmp"));

  CHECK_THROWS_AS(write_file_atomic((dir / "missing" / "x.json").string(), "x"),
                  Error);
  fs::remove_all(dir);
}
