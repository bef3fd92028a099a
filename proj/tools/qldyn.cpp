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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qldyn/commands.hpp"
#include "qldyn/errors.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw qldyn::ConfigError("cannot open config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int exit_status(const qldyn::ReportEnvelope& envelope) {
  if (envelope.status == "pass") return 0;
  if (envelope.status == "fail") return 1;
  switch (envelope.error_kind) {
    case qldyn::ReportEnvelope::ErrorKind::Config:
      return 2;
    default:
      return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qldyn: dissipative quantum dynamics on finite lattices"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed_override = 0;
  bool has_seed_override = false;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config file")
        ->required();
    cmd->add_option("--out", out_dir, "output directory for the reports");
    cmd->add_option("--seed", seed_override, "override the config seed")
        ->each([&](const std::string&) { has_seed_override = true; });
  };

  CLI::App* scan = app.add_subcommand(
      "scan", "Cauchy scan of an observable over growing volumes");
  CLI::App* verify = app.add_subcommand(
      "verify", "verify channel properties at one volume");
  CLI::App* kraus = app.add_subcommand(
      "kraus", "extract and dump the Kraus decomposition");
  add_common(scan);
  add_common(verify);
  add_common(kraus);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  qldyn::ReportEnvelope envelope;
  try {
    qldyn::ExperimentConfig config = qldyn::parse_config(read_file(config_path));
    if (has_seed_override) config.seed = seed_override;
    if (out_dir.empty()) out_dir = config.output_dir;
    if (out_dir.empty()) out_dir = ".";

    if (scan->parsed()) {
      envelope = qldyn::cmd_scan(config);
    } else if (verify->parsed()) {
      envelope = qldyn::cmd_verify(config);
    } else {
      envelope = qldyn::cmd_kraus(config);
    }
  } catch (const qldyn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }

  try {
    std::filesystem::create_directories(out_dir);
    const std::string json_path = out_dir + "/report.json";
    qldyn::write_file_atomic(json_path, qldyn::render_json(envelope));
    qldyn::write_file_atomic(out_dir + "/report.csv",
                             qldyn::render_csv(envelope));
    std::cout << "qldyn " << envelope.command << ": " << envelope.status;
    if (!envelope.error_message.empty()) {
      std::cout << " (" << envelope.error_message << ")";
    }
    std::cout << " [" << json_path << "]\n";
  } catch (const std::exception& e) {
    std::cerr << "error writing reports: " << e.what() << "\n";
    return 3;
  }
  return exit_status(envelope);
}
