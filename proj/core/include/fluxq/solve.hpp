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

#ifndef FLUXQ_SOLVE_HPP
#define FLUXQ_SOLVE_HPP

#include <memory>

#include <Eigen/Dense>

#include "fluxq/circuit.hpp"
#include "fluxq/eigen_cache.hpp"
#include "fluxq/eigensolver.hpp"

namespace fluxq {

/// How single-qubit circuits are diagonalized.
struct SolveSettings {
    int cutoff = kDefaultCutoff;
    EigenSolverOptions eigen{};
    std::shared_ptr<const EigenCache> cache;
};

/// Lowest `levels` eigenpairs of the circuit in a ChargeBasis(settings.cutoff),
/// served from the cache when one is configured.
EigenPairs solve_circuit(const QubitCircuit &circuit, int levels, const SolveSettings &settings);

/// <v_r| (n_node - ng_node) |v_c> over the given states. The offset applies
/// only to the island.
Eigen::MatrixXcd charge_matrix(const ChargeBasis &basis, int node, double offset_charge,
                               const Eigen::MatrixXcd &states);

}  // namespace fluxq

#endif  // FLUXQ_SOLVE_HPP
