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

#include "qldyn/report.hpp"

#include <filesystem>
#include <fstream>

#include "qldyn/errors.hpp"

namespace qldyn {

std::string render_json(const ReportEnvelope& envelope) {
  nlohmann::ordered_json root;
  root["schema"] = kReportSchema;
  root["artifact"] = {{"name", kArtifactName}, {"version", kArtifactVersion}};
  root["command"] = envelope.command;
  root["status"] = envelope.status;
  root["partial"] = envelope.partial;
  if (!envelope.error_message.empty()) root["error"] = envelope.error_message;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [key, value] : envelope.config) config[key] = value;
  root["config"] = std::move(config);
  nlohmann::ordered_json timings = envelope.timings;
  timings["total_ms"] = envelope.total_ms;
  root["timings"] = std::move(timings);
  root["payload"] = envelope.payload;
  return root.dump(2) + "\n";
}

std::string render_csv(const ReportEnvelope& envelope) {
  std::string out;
  for (const auto& row : envelope.csv) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += row[i];
    }
    out += "\n";
  }
  return out;
}

nlohmann::ordered_json matrix_to_json(const Matrix& m) {
  nlohmann::ordered_json data = nlohmann::ordered_json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      data.push_back({m(r, c).real(), m(r, c).imag()});
    }
  }
  nlohmann::ordered_json out;
  out["dim"] = m.rows();
  out["data"] = std::move(data);
  return out;
}

std::string format_number(double x) { return nlohmann::json(x).dump(); }

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path temp = target.parent_path() / (target.filename().string() + ".tmp");
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + temp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error("write to " + temp.string() + " failed");
  }
  fs::rename(temp, target);
}

}  // namespace qldyn
