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

#include "fluxq/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "fluxq/errors.hpp"

namespace fluxq {

EigenPairs solve_circuit(const QubitCircuit &circuit, int levels, const SolveSettings &settings) {
    std::string key;
    if (settings.cache) {
        key = EigenCache::key_for(circuit, settings.cutoff, levels);
        if (auto hit = settings.cache->load(key)) {
            return *std::move(hit);
        }
    }
    ChargeBasis basis(settings.cutoff);
    EigenPairs pairs = lowest_eigenpairs(build_hamiltonian(circuit, basis), levels, settings.eigen);
    if (settings.cache) {
        settings.cache->store(key, settings.cutoff, pairs);
    }
    return pairs;
}

Eigen::MatrixXcd charge_matrix(const ChargeBasis &basis, int node, double offset_charge,
                               const Eigen::MatrixXcd &states) {
    Eigen::VectorXd n = basis.node_charge(node);
    if (node == kNodeIsland) {
        n.array() -= offset_charge;
    }
    return states.adjoint() * (n.asDiagonal() * states);
}

namespace {

// Largest level shift between cutoffs nc and nc + 2, memoized per cutoff.
class ShiftProbe {
   public:
    ShiftProbe(const QubitCircuit &circuit, int levels) : circuit_(circuit), levels_(levels) {
    }

    Eigen::VectorXd energies(int nc) {
        auto it = cache_.find(nc);
        if (it != cache_.end()) {
            return it->second;
        }
        ChargeBasis basis(nc);
        EigenSolverOptions opts;
        auto pairs = lowest_eigenpairs(build_hamiltonian(circuit_, basis), levels_, opts);
        return cache_.emplace(nc, pairs.energies).first->second;
    }

    double shift(int nc) {
        return (energies(nc + 2) - energies(nc)).cwiseAbs().maxCoeff();
    }

   private:
    QubitCircuit circuit_;
    int levels_;
    std::map<int, Eigen::VectorXd> cache_;
};

}  // namespace

CutoffCertificate converge_cutoff(const QubitCircuit &circuit, int levels, double tol_ghz) {
    if (!(tol_ghz > 0.0)) {
        throw DomainError("converge_cutoff: tolerance must be positive");
    }
    if (levels < 1) {
        throw DomainError("converge_cutoff: need at least one level");
    }
    CutoffCertificate cert;
    cert.tolerance_ghz = tol_ghz;
    cert.levels = levels;
    if (std::isinf(tol_ghz)) {
        cert.cutoff = kMinHamiltonianCutoff;
        cert.shift_ghz = std::numeric_limits<double>::quiet_NaN();
        return cert;
    }

    ShiftProbe probe(circuit, levels);
    auto ok = [&](int nc) { return probe.shift(nc) < tol_ghz; };

    // Doubling phase: 3, 6, 12, then the cap.
    int lo = kMinHamiltonianCutoff - 1;  // largest cutoff known to fail
    int hi = kMinHamiltonianCutoff;
    while (!ok(hi)) {
        lo = hi;
        if (hi == kMaxCutoff) {
            throw ConvergenceError("converge_cutoff: levels still move by " + std::to_string(probe.shift(hi)) +
                                   " GHz at the cap cutoff " + std::to_string(kMaxCutoff));
        }
        hi = std::min(2 * hi, kMaxCutoff);
    }
    // Bisect (lo, hi] for the first passing cutoff.
    while (hi - lo > 1) {
        int mid = lo + (hi - lo) / 2;
        if (ok(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    cert.cutoff = hi;
    cert.shift_ghz = probe.shift(hi);
    return cert;
}

CutoffCertificate converge_cutoff(const FluxQubitSpec &spec, int levels, double tol_ghz) {
    return converge_cutoff(make_circuit(spec), levels, tol_ghz);
}

}  // namespace fluxq
