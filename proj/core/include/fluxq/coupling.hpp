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

#ifndef FLUXQ_COUPLING_HPP
#define FLUXQ_COUPLING_HPP

#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fluxq/circuit.hpp"
#include "fluxq/solve.hpp"
#include "fluxq/spectrum.hpp"

namespace fluxq {

struct Coupler {
    int i = 0;
    int j = 0;
    double cc_ff = 0.0;
};

enum class TopologyKind { kCustom, kChain, kGrid };

/// Qubits joined island-to-island by coupling capacitors. Sites of an n x n
/// grid are numbered row-major: site = row * n + col.
class CouplerGraph {
   public:
    CouplerGraph() = default;
    CouplerGraph(std::vector<FluxQubitSpec> sites, std::vector<Coupler> couplers,
                 TopologyKind kind = TopologyKind::kCustom, int side = 0);

    static CouplerGraph chain(int n, const FluxQubitSpec &site, double cc_ff);
    static CouplerGraph grid(int n, const FluxQubitSpec &site, double cc_ff);

    int size() const {
        return static_cast<int>(sites_.size());
    }
    const std::vector<FluxQubitSpec> &sites() const {
        return sites_;
    }
    const std::vector<Coupler> &couplers() const {
        return couplers_;
    }
    TopologyKind kind() const {
        return kind_;
    }
    /// Chain length or grid side; 0 for custom graphs.
    int side() const {
        return side_;
    }

    /// |l - l'| on a chain, |l - l'| + |m - m'| on a grid, hop count otherwise
    /// (-1 when disconnected).
    int distance(int a, int b) const;

    void set_voltage(int site, double ve_uv);
    void set_voltages(const std::vector<double> &ve_uv);

    /// Throws ModelError for out-of-range indices, self-coupling, duplicate
    /// pairs, negative capacitance and, for chain or grid kinds, couplers that
    /// are not lattice neighbours.
    void validate() const;

   private:
    std::vector<FluxQubitSpec> sites_;
    std::vector<Coupler> couplers_;
    TopologyKind kind_ = TopologyKind::kCustom;
    int side_ = 0;
    std::vector<std::vector<int>> hops_;
};

/// (3N) x (3N) node capacitance matrix in fF, three nodes per site in the
/// order (a, island, c).
Eigen::MatrixXd full_capacitance_matrix(const CouplerGraph &graph);

/// (e^2/2h) C^-1 of the whole network, in GHz. Throws ModelError when C is
/// not positive definite.
Eigen::MatrixXd full_inverse_capacitance(const CouplerGraph &graph);

/// Site circuit whose charging matrix is the site's diagonal block of the
/// network inverse.
QubitCircuit dressed_circuit(const CouplerGraph &graph, const Eigen::MatrixXd &inverse_ghz, int site);

/// <g|n - ng|g> - <e|n - ng|e> for the three nodes of one site.
Eigen::Vector3d charge_contrast(const QubitSpectrum &spectrum);

/// Ising coefficient of a pair of sites: the cross charging term
/// 8 sum_ij X_ij (n_i - ng_i)(n'_j - ng'_j) projected on |v v'> and combined
/// as (H_gg - H_ge - H_eg + H_ee)/4, which reduces to 2 sum_ij X_ij dn_i dn'_j.
double ising_coupling(const Eigen::Matrix3d &cross_ghz, const Eigen::Vector3d &contrast_1,
                      const Eigen::Vector3d &contrast_2);

struct PairCoupling {
    double g_ghz = 0.0;
    double delta1_ghz = 0.0;
    double delta2_ghz = 0.0;
    /// Full projection of H_total on {gg, ge, eg, ee}, including the
    /// flip-flop terms that the Ising form discards.
    Eigen::Matrix4cd projected;
};

/// Two qubits at f = 0.5 joined by Cc, at gate voltages Ve1 and Ve2.
PairCoupling pair_coupling_g(const FluxQubitSpec &spec1, const FluxQubitSpec &spec2, double cc_ff, double ve1_uv,
                             double ve2_uv, const SolveSettings &settings = {});

inline constexpr int kOracleStatesPerQubit = 8;

struct ExactPairCoupling {
    double g_ghz = 0.0;
    /// E_gg, E_ge, E_eg, E_ee of the coupled low-energy problem.
    Eigen::Vector4d energies;
    /// Smallest overlap of an assigned eigenvector with its product label.
    double min_assignment_weight = 0.0;
};

/// (E_gg + E_ee - E_ge - E_eg)/4 from diagonalizing the coupled pair in the
/// product basis of the lowest `states_per_qubit` levels of each qubit.
ExactPairCoupling exact_pair_coupling(const FluxQubitSpec &spec1, const FluxQubitSpec &spec2, double cc_ff,
                                      double ve1_uv, double ve2_uv, int states_per_qubit = kOracleStatesPerQubit,
                                      const SolveSettings &settings = {});

struct ChainCouplings {
    std::vector<double> g_ghz;  // g_ghz[n - 1] = g(n), n = 1..N-1
    double ratio = 0.0;         // g(2) / g(1)
};

/// g(n) between the middle-of-chain pair (l, l + n), l = floor((N - n)/2),
/// with every qubit at voltage Ve. Throws ModelError when |g(1)| is below
/// kCouplingFloor so that R is undefined.
ChainCouplings chain_couplings(int n, double cc_ff, double ve_uv, const FluxQubitSpec &spec_template,
                               const SolveSettings &settings = {}, int threads = 1);

inline constexpr double kCouplingFloor = 1e-12;  // GHz

struct EffectiveIsingModel {
    std::vector<double> delta_ghz;
    /// Unordered pairs (i < j) to g; entries with |g| < kCouplingFloor pruned.
    std::map<std::pair<int, int>, double> g_ghz;
    std::map<std::pair<int, int>, int> distance;
    std::vector<double> voltage_uv;
    TopologyKind kind = TopologyKind::kCustom;
    int side = 0;

    int size() const {
        return static_cast<int>(delta_ghz.size());
    }
    /// 0 for absent pairs.
    double coupling(int i, int j) const;
};

/// Per-site spectra at the given voltages and pairwise g from the network
/// cross blocks. All fluxes must be 0.5.
EffectiveIsingModel effective_model(const CouplerGraph &graph, const std::vector<double> &voltage_uv,
                                    const SolveSettings &settings = {}, int threads = 1);

/// g(d) = g1 R^(d - 1) for every pair of a chain or grid; Delta uniform.
EffectiveIsingModel geometric_model(TopologyKind kind, int side, double delta_ghz, double g1_ghz, double ratio);

/// {"sites": [Delta...], "pairs": [{"i", "j", "distance", "g_GHz"}...]} with
/// pairs sorted by (i, j).
std::string model_to_json(const EffectiveIsingModel &model);
EffectiveIsingModel model_from_json(const std::string &text);

}  // namespace fluxq

#endif  // FLUXQ_COUPLING_HPP
