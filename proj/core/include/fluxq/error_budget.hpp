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

#ifndef FLUXQ_ERROR_BUDGET_HPP
#define FLUXQ_ERROR_BUDGET_HPP

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fluxq/circuit.hpp"
#include "fluxq/coupling.hpp"
#include "fluxq/solve.hpp"

namespace fluxq {

struct NoiseParams {
    double dv_uv = 0.21;  // voltage fluctuation width
    double dt_ns = 0.05;  // timing jitter

    /// Throws DomainError for negative or non-finite widths.
    void validate() const;
};

inline constexpr double kLocalErrorThreshold = 1e-3;
inline constexpr double kCorrelatedErrorThreshold = 1e-4;

struct Dephasing {
    double eps_d = 0.0;
    double t_cp_ns = 0.0;
    double t2_ns = 0.0;  // +inf when the qubit is insensitive or noise-free
    /// t_cp <= 0.1 T2, the regime where eps_d = t_cp / T2 is meaningful.
    bool small_error_regime = true;
};

/// t_cp = 1/(8g), T2 = 1/(2 pi |slope| dv), eps_d = t_cp / T2.
Dephasing dephasing_error(double g_ghz, double slope_ghz_per_uv, double dv_uv);

/// 1 - |<++| U(t)^dag U(t + dt) |++>|^2 for U(t) = exp(-i 2 pi 4 g t |ee><ee|):
/// (3/8)(1 - cos(8 pi g dt)).
double timing_error(double g_ghz, double dt_ns);

struct ErrorBreakdown {
    double eps_d = 0.0;
    double eps_tim = 0.0;
    double eps_loc = 0.0;
    double eps_non = 0.0;
    double t_cp_ns = 0.0;
    double t2_ns = 0.0;
    bool in_regime = true;
};

ErrorBreakdown local_error(double g_ghz, double slope_ghz_per_uv, const NoiseParams &noise);

struct LocalErrorRow {
    double ve_uv = 0.0;
    double g_ghz = 0.0;
    double slope_ghz_per_uv = 0.0;
    ErrorBreakdown errors;
    std::string error;  // empty on success

    bool ok() const {
        return error.empty();
    }
};

struct LocalErrorCurve {
    std::vector<LocalErrorRow> rows;
    std::optional<std::size_t> argmin;  // index into rows
    /// The minimum is not at either end of the grid.
    bool interior_minimum = false;
    bool below_threshold = false;
    double threshold = kLocalErrorThreshold;

    double min_eps_loc() const {
        return argmin ? rows[*argmin].errors.eps_loc : 0.0;
    }
};

inline constexpr double kDefaultSlopeStepUv = 2.0;

/// Two identical qubits joined by Cc, both at Ve; g from pair_coupling_g and
/// the slope dE01/dVe of one dressed qubit.
LocalErrorCurve local_error_curve(const FluxQubitSpec &spec_template, double cc_ff,
                                  const std::vector<double> &ve_grid_uv, const NoiseParams &noise,
                                  const SolveSettings &settings = {}, int threads = 1,
                                  double slope_step_uv = kDefaultSlopeStepUv,
                                  double threshold = kLocalErrorThreshold);

using Multiplicity = std::function<int(int distance)>;

/// sum_{n=p}^{floor(N/2)} (pi/4) R^(n-1) m(n). Throws DomainError for R
/// outside [0, 1) or p < 2.
double correlated_error(double ratio, int p, int n_sites, const Multiplicity &multiplicity);

/// (pi/4)(R^4 + 2 R^5): one chain qubit under the three-step echo procedure.
double chain_echo_bound(double ratio);
/// (pi/4)(R^4 + 4 R^5): one lattice qubit under the twelve-step procedure.
double grid_echo_bound(double ratio);

/// Sites at exactly `distance` from `site` along the lattice axes: 2 for an
/// interior chain site, 4 for an interior grid site, fewer near edges.
int axis_multiplicity(TopologyKind kind, int side, int site, int distance);

/// Multiplicity of the central site of a chain or grid.
Multiplicity default_multiplicity(TopologyKind kind, int side);

struct CorrelatedRow {
    double cc_ff = 0.0;
    double ratio = 0.0;
    std::vector<double> eps_non;  // one per requested p
    std::string error;

    bool ok() const {
        return error.empty();
    }
};

inline constexpr int kCorrelatedChainSites = 64;

/// R from a six-qubit chain at each Cc, then eps_non for each p on a chain of
/// `n_sites` with interior multiplicity.
std::vector<CorrelatedRow> correlated_error_curve(const FluxQubitSpec &spec_template,
                                                  const std::vector<double> &cc_grid_ff, double ve_uv,
                                                  const std::vector<int> &p_values,
                                                  int n_sites = kCorrelatedChainSites,
                                                  const SolveSettings &settings = {}, int threads = 1);

/// `Ve_uV,g_GHz,dE01_dVe_GHz_per_uV,t_cp_ns,T2_ns,eps_d,eps_tim,eps_loc,status`
void write_local_error_csv(std::ostream &out, const LocalErrorCurve &curve);
/// `Cc_fF,R,eps_non_p<p>...,status`
void write_correlated_csv(std::ostream &out, const std::vector<int> &p_values,
                          const std::vector<CorrelatedRow> &rows);

}  // namespace fluxq

#endif  // FLUXQ_ERROR_BUDGET_HPP
