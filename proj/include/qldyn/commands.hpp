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

#ifndef QLDYN_COMMANDS_HPP
#define QLDYN_COMMANDS_HPP

#include "qldyn/config.hpp"
#include "qldyn/report.hpp"

namespace qldyn {

// Command entry points. They do no file I/O and never throw: failures are
// captured in the envelope (status/error_kind) so the front end can write
// the report and map the exit status in one place.

// Thermodynamic-limit scan: Cauchy increments over a growing schedule.
ReportEnvelope cmd_scan(const ExperimentConfig& config);

// Channel verification at one volume: normalization, complete positivity,
// duality, Kraus round-trip, tensor stability, and the semigroup law.
ReportEnvelope cmd_verify(const ExperimentConfig& config);

// Kraus extraction dump for the channel at one volume and time.
ReportEnvelope cmd_kraus(const ExperimentConfig& config);

}  // namespace qldyn

#endif
