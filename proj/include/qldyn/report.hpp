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

#ifndef QLDYN_REPORT_HPP
#define QLDYN_REPORT_HPP

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qldyn/linalg.hpp"

namespace qldyn {

inline constexpr const char* kArtifactName = "qldyn";
inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

// What a command hands back to the front end. The payload is deterministic
// for a fixed config (seed included); wall-clock timings live outside it so
// that repeated runs produce byte-identical payloads.
struct ReportEnvelope {
  enum class ErrorKind { None, Config, Capacity, Other };

  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  std::string status = "pass";  // pass | fail | error
  bool partial = false;
  std::string error_message;
  ErrorKind error_kind = ErrorKind::None;
  double total_ms = 0.0;
  nlohmann::ordered_json timings = nlohmann::ordered_json::object();
  nlohmann::ordered_json payload = nlohmann::ordered_json::object();
  std::vector<std::vector<std::string>> csv;  // first row = header
};

std::string render_json(const ReportEnvelope& envelope);
std::string render_csv(const ReportEnvelope& envelope);

// {"dim": n, "data": [[re, im], ...]} with entries in row-major order.
nlohmann::ordered_json matrix_to_json(const Matrix& m);

// Canonical shortest-round-trip decimal form, identical to the JSON one.
std::string format_number(double x);

// Writes via a temp file in the same directory plus an atomic rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace qldyn

#endif
