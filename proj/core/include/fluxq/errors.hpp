// Copyright 2026 The fluxq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FLUXQ_ERRORS_HPP
#define FLUXQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fluxq {

/// Argument outside the mathematical domain of an operation.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Circuit parameters that do not describe a physical network
/// (singular or indefinite capacitance matrix, bad topology).
struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Charge basis unable to host the requested operator.
struct BasisError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Iterative eigensolver failed to reach the requested residual.
struct SolverError : std::runtime_error {
    SolverError(const std::string &what, double achieved_residual)
        : std::runtime_error(what), residual(achieved_residual) {
    }
    double residual;
};

/// Cutoff search hit the hard cap before certifying convergence.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or invalid configuration document.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Schedule that the simulator or angle tracker cannot interpret.
struct ScheduleError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace fluxq

#endif  // FLUXQ_ERRORS_HPP
