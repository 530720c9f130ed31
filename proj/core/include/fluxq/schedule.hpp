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

#ifndef FLUXQ_SCHEDULE_HPP
#define FLUXQ_SCHEDULE_HPP

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fluxq/coupling.hpp"

namespace fluxq {

using SitePair = std::pair<int, int>;  // always stored with first < second

struct PulseEvent {
    double at_ns = 0.0;
    std::vector<int> sites;
};

struct ScheduleStep {
    double duration_ns = 0.0;
    std::vector<int> powered;
    std::vector<SitePair> gates;  // controlled-phase targets of this step
    std::vector<PulseEvent> pulses;
    std::vector<int> init;  // prepared in |+> at the start of the step
};

/// Timed voltage and pi-pulse program on a chain or an n x n grid (sites
/// row-major, zero-based).
struct Schedule {
    TopologyKind kind = TopologyKind::kChain;
    int side = 0;
    double ve_uv = 0.0;
    int spacing = 2;  // minimum site distance between different gate pairs in a step
    std::vector<ScheduleStep> steps;
    /// Sites whose pattern pair was cut off by the lattice boundary.
    std::vector<int> truncated;

    int sites() const {
        return kind == TopologyKind::kGrid ? side * side : side;
    }
    int distance(int a, int b) const;
    /// Throws ScheduleError on out-of-range sites, pulses outside [0, duration],
    /// gates on unpowered sites or gate pairs closer than `spacing`.
    void validate() const;
};

/// Simple graph on the schedule's sites.
struct GraphStateTarget {
    int vertices = 0;
    std::set<SitePair> edges;

    std::vector<std::vector<int>> neighbours() const;
};

/// Union of the gates of every step. Throws ScheduleError if a pair appears
/// in more than one step.
GraphStateTarget target_graph(const Schedule &schedule);

/// Three steps; step k powers the pairs (3n - 3 + k, 3n - 2 + k) (one-based)
/// and pi-pulses both members of every second pair at mid-step. Each site is
/// initialized in the first step that powers it.
Schedule build_1d_schedule(int n, double t_cp_ns, double ve_uv = 0.0, int spacing = 2);

/// Twelve steps on an n x n grid: rows 4m - 3 (m <= floor(n/4)), rows 4p - 1
/// (p <= floor((n+1)/4)), then the same columns, each with the three-step
/// pattern and alternating pulse parity between neighbouring processed lines.
/// Sites no step touches are initialized in step 1 and stay isolated.
Schedule build_2d_schedule(int n, double t_cp_ns, double ve_uv = 0.0, int spacing = 2);

/// Gate counts per step.
std::vector<int> gate_counts(const Schedule &schedule);

std::string schedule_to_json(const Schedule &schedule);

inline constexpr int kMaxSimulatedQubits = 20;

/// Exact evolution of |0...0> under H = sum Delta_q/2 Z_q + sum g_ij Z_i Z_j,
/// where a pair is active only while both sites are powered (and, unless
/// include_nonlocal, only at site distance 1). Pulses are instantaneous X.
/// Qubit q is stored in bit q; Z|0> = |0>.
Eigen::VectorXcd simulate(const EffectiveIsingModel &model, const Schedule &schedule, bool include_nonlocal);

struct ResidualAngles {
    /// Conditional phase 4 * 2 pi * integral of g s_i s_j dt per active pair,
    /// where s = +-1 tracks the X frame. A controlled-phase gate is +-pi.
    std::map<SitePair, double> total;
    std::vector<std::map<SitePair, double>> per_step;
    /// 2 pi * integral of (Delta/2) s dt per site.
    std::vector<double> linear;
    /// Sites that end with an odd number of pi pulses.
    std::vector<bool> flipped;
};

/// Throws ScheduleError if any pulse is off its step's midpoint.
ResidualAngles residual_zz_angles(const EffectiveIsingModel &model, const Schedule &schedule,
                                  bool include_nonlocal = true);

/// X^flipped exp(-i sum (angle/4) z_i z_j - i sum linear_q z_q) |+...+>.
Eigen::VectorXcd state_from_angles(const ResidualAngles &angles, int sites);

struct ClusterFidelity {
    double raw = 0.0;
    /// After the local Z rotations that maximize the overlap.
    double frame_corrected = 0.0;
    std::vector<double> z_phases;
    /// <X_v prod_{u in N(v)} Z_u> of the frame-corrected state.
    std::vector<double> stabilizers;
};

/// Amplitudes of the graph state prod CZ |+...+>.
Eigen::VectorXcd graph_state(const GraphStateTarget &target);

ClusterFidelity cluster_fidelity(const Eigen::VectorXcd &state, const GraphStateTarget &target);

/// <X_v prod Z_u> for every vertex.
std::vector<double> stabilizer_expectations(const Eigen::VectorXcd &state, const GraphStateTarget &target);

}  // namespace fluxq

#endif  // FLUXQ_SCHEDULE_HPP
