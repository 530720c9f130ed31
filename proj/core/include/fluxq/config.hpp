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

#ifndef FLUXQ_CONFIG_HPP
#define FLUXQ_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fluxq/circuit.hpp"
#include "fluxq/coupling.hpp"
#include "fluxq/error_budget.hpp"

namespace fluxq {

/// Gate capacitance of the configuration's qubit template unless the
/// document sets one. Without it the gate voltage does nothing.
inline constexpr double kDefaultGateCapacitanceFf = 0.077;

struct SolverConfig {
    int cutoff = kDefaultCutoff;
    /// When set, the cutoff is certified by converge_cutoff at this tolerance.
    std::optional<double> cutoff_tolerance_ghz;
};

/// Parameter grids used by the command-line sweeps.
struct SweepConfig {
    std::vector<double> alpha;
    std::vector<double> flux;
    std::vector<double> voltage_uv;  // single-qubit spectrum axis
    std::vector<double> ve_uv;       // pair coupling and local-error axis
    std::vector<double> cc_ff;       // chain coupling and correlated-error axis
    std::vector<int> p = {4, 5};
    int chain_sites = 6;
    int correlated_sites = kCorrelatedChainSites;
    double chain_ve_uv = 1000.0;
};

/// Effective model used by the cluster-state runs. Unset fields are derived
/// from a six-qubit chain at (cc_ff, ve_uv).
struct ClusterConfig {
    double cc_ff = 0.077;
    double ve_uv = 1000.0;
    std::optional<double> ratio;
    std::optional<double> g1_ghz;
    std::optional<double> delta_ghz;
};

struct DeviceConfig {
    FluxQubitSpec qubit;  // template applied to every entry of `qubits`
    std::vector<FluxQubitSpec> qubits;
    std::vector<Coupler> couplers;
    TopologyKind kind = TopologyKind::kCustom;
    int side = 0;  // chain length or grid side
    NoiseParams noise;
    SolverConfig solver;
    SweepConfig sweeps;
    ClusterConfig cluster;

    CouplerGraph graph() const;
};

/// Parses a JSON device document. Unknown keys are rejected. Syntax errors
/// report line and column; invalid values name the field path.
DeviceConfig parse_device_config(std::string_view text);
DeviceConfig load_device_config(const std::filesystem::path &path);
/// Configuration with every default filled in (one qubit, no couplers).
DeviceConfig default_device_config();

/// Canonical JSON of the resolved configuration; stable key order and
/// exact (round-trip) number formatting.
std::string config_to_json(const DeviceConfig &config);
/// FNV-1a of config_to_json, as 16 hex digits.
std::string config_hash(const DeviceConfig &config);

/// `count` points from `start` to `stop` inclusive.
std::vector<double> linspace(double start, double stop, int count);

}  // namespace fluxq

#endif  // FLUXQ_CONFIG_HPP
