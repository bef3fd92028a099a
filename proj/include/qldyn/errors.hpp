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

#ifndef QLDYN_ERRORS_HPP
#define QLDYN_ERRORS_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qldyn {

// Base class for all qldyn failures.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent user configuration (CLI exit code 2).
struct ConfigError : Error {
  using Error::Error;
};

// A requested computation exceeds a configured size cap (CLI exit code 3).
struct CapacityError : Error {
  using Error::Error;
};

// A precondition on library input was violated.
struct InvalidArgument : Error {
  using Error::Error;
};

// Kraus extraction was asked of a map whose Choi matrix has a materially
// negative eigenvalue; carries the witness.
struct NotCompletelyPositiveError : Error {
  NotCompletelyPositiveError(const std::string& what, double eigenvalue,
                             std::vector<std::complex<double>> eigenvector)
      : Error(what),
        witness_eigenvalue(eigenvalue),
        witness_eigenvector(std::move(eigenvector)) {}

  double witness_eigenvalue;
  std::vector<std::complex<double>> witness_eigenvector;
};

}  // namespace qldyn

#endif
