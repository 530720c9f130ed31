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

#ifndef FLUXQ_EIGENSOLVER_HPP
#define FLUXQ_EIGENSOLVER_HPP

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

#include "fluxq/circuit.hpp"

namespace fluxq {

struct EigenSolverOptions {
    /// Krylov subspace size; 0 picks max(2k + 24, 48).
    int krylov_dim = 0;
    int max_restarts = 2000;
    /// Ritz residual target relative to the operator norm bound.
    double tolerance = 1e-11;
    /// Acceptance bound on the final true residual, relative to the norm bound.
    double acceptance = 1e-8;
    /// Dimensions at or below this use dense diagonalization.
    std::size_t dense_threshold = 400;
    bool force_iterative = false;
    std::uint64_t seed = 0x5eed'f1e1'd0c5ULL;
};

/// Lowest eigenpairs, energies ascending, vectors unit norm. Within clusters
/// closer than kDegeneracyGap the vectors are orthonormal; every vector has its
/// largest-magnitude component real and positive.
struct EigenPairs {
    Eigen::VectorXd energies;
    Eigen::MatrixXcd vectors;  // one column per pair
    Eigen::VectorXd residuals;
    double norm_scale = 0.0;
    bool iterative = false;
    int restarts = 0;

    int count() const {
        return static_cast<int>(energies.size());
    }
};

inline constexpr double kDegeneracyGap = 1e-9;  // GHz

/// Thick-restart Lanczos with full reorthogonalization. Throws DomainError for
/// k outside [1, dim) and SolverError (carrying the achieved residual) when the
/// restart budget runs out.
EigenPairs lowest_eigenpairs(const SparseHermitianOperator &h, int k, const EigenSolverOptions &options = {});

/// Same contract through a full dense diagonalization.
EigenPairs dense_lowest_eigenpairs(const Eigen::MatrixXcd &h, int k);

/// Rotates each vector so its largest-magnitude component is real positive.
void fix_phases(Eigen::MatrixXcd &vectors);

}  // namespace fluxq

#endif  // FLUXQ_EIGENSOLVER_HPP
