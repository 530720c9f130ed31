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

#include "fluxq/error_budget.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fluxq/errors.hpp"
#include "fluxq/format.hpp"
#include "fluxq/parallel.hpp"
#include "fluxq/spectrum.hpp"
#include "fluxq/units.hpp"

namespace fluxq {

void NoiseParams::validate() const {
    if (!(dv_uv >= 0.0) || !std::isfinite(dv_uv)) {
        throw DomainError("noise.dv_uv: must be a finite non-negative width");
    }
    if (!(dt_ns >= 0.0) || !std::isfinite(dt_ns)) {
        throw DomainError("noise.dt_ns: must be a finite non-negative width");
    }
}

Dephasing dephasing_error(double g_ghz, double slope_ghz_per_uv, double dv_uv) {
    if (!(g_ghz > 0.0)) {
        throw DomainError("dephasing_error: coupling g must be positive");
    }
    if (!(dv_uv >= 0.0)) {
        throw DomainError("dephasing_error: voltage width must be non-negative");
    }
    Dephasing d;
    d.t_cp_ns = units::cz_gate_time(g_ghz);
    double rate = units::kTwoPi * std::abs(slope_ghz_per_uv) * dv_uv;  // 1/T2 in 1/ns
    if (rate == 0.0) {
        d.t2_ns = std::numeric_limits<double>::infinity();
        d.eps_d = 0.0;
    } else {
        d.t2_ns = 1.0 / rate;
        d.eps_d = d.t_cp_ns * rate;
    }
    d.small_error_regime = d.t_cp_ns <= 0.1 * d.t2_ns;
    return d;
}

double timing_error(double g_ghz, double dt_ns) {
    if (!(g_ghz >= 0.0) || !(dt_ns >= 0.0)) {
        throw DomainError("timing_error: g and dt must be non-negative");
    }
    return 0.375 * (1.0 - std::cos(8.0 * std::numbers::pi * g_ghz * dt_ns));
}

ErrorBreakdown local_error(double g_ghz, double slope_ghz_per_uv, const NoiseParams &noise) {
    noise.validate();
    auto d = dephasing_error(g_ghz, slope_ghz_per_uv, noise.dv_uv);
    ErrorBreakdown b;
    b.eps_d = d.eps_d;
    b.eps_tim = timing_error(g_ghz, noise.dt_ns);
    b.eps_loc = b.eps_d + b.eps_tim;
    b.t_cp_ns = d.t_cp_ns;
    b.t2_ns = d.t2_ns;
    b.in_regime = d.small_error_regime && b.eps_loc <= 1.0;
    return b;
}

LocalErrorCurve local_error_curve(const FluxQubitSpec &spec_template, double cc_ff,
                                  const std::vector<double> &ve_grid_uv, const NoiseParams &noise,
                                  const SolveSettings &settings, int threads, double slope_step_uv,
                                  double threshold) {
    if (ve_grid_uv.empty()) {
        throw DomainError("empty grid");
    }
    noise.validate();
    LocalErrorCurve curve;
    curve.threshold = threshold;
    curve.rows.resize(ve_grid_uv.size());
    parallel_for(ve_grid_uv.size(), threads, [&](std::size_t k) {
        LocalErrorRow &row = curve.rows[k];
        row.ve_uv = ve_grid_uv[k];
        try {
            auto pair = pair_coupling_g(spec_template, spec_template, cc_ff, row.ve_uv, row.ve_uv, settings);
            FluxQubitSpec s = spec_template;
            s.ve_uv = row.ve_uv;
            CouplerGraph graph({s, s}, {{0, 1, cc_ff}});
            auto qubit = dressed_circuit(graph, full_inverse_capacitance(graph), 0);
            auto slope = de01_dve(qubit, slope_step_uv, settings);
            row.g_ghz = pair.g_ghz;
            row.slope_ghz_per_uv = slope.value;
            row.errors = local_error(std::abs(pair.g_ghz), slope.value, noise);
        } catch (const std::exception &e) {
            row.error = e.what();
        }
    });
    for (std::size_t k = 0; k < curve.rows.size(); ++k) {
        if (curve.rows[k].ok() &&
            (!curve.argmin || curve.rows[k].errors.eps_loc < curve.rows[*curve.argmin].errors.eps_loc)) {
            curve.argmin = k;
        }
    }
    if (curve.argmin) {
        curve.interior_minimum = *curve.argmin > 0 && *curve.argmin + 1 < curve.rows.size();
        curve.below_threshold = curve.min_eps_loc() < threshold;
    }
    return curve;
}

double correlated_error(double ratio, int p, int n_sites, const Multiplicity &multiplicity) {
    if (!(ratio >= 0.0)) {
        throw DomainError("correlated_error: coupling ratio must be non-negative");
    }
    if (ratio >= 1.0) {
        throw DomainError("correlated_error: coupling ratio " + format_number(ratio) +
                          " >= 1 makes the correlated error diverge");
    }
    if (p < 2) {
        throw DomainError("correlated_error: pair spacing p must be at least 2");
    }
    double sum = 0.0;
    for (int n = p; n <= n_sites / 2; ++n) {
        sum += std::pow(ratio, n - 1) * multiplicity(n);
    }
    return 0.25 * std::numbers::pi * sum;
}

double chain_echo_bound(double ratio) {
    return 0.25 * std::numbers::pi * (std::pow(ratio, 4) + 2.0 * std::pow(ratio, 5));
}

double grid_echo_bound(double ratio) {
    return 0.25 * std::numbers::pi * (std::pow(ratio, 4) + 4.0 * std::pow(ratio, 5));
}

int axis_multiplicity(TopologyKind kind, int side, int site, int distance) {
    if (distance < 1) {
        return 0;
    }
    auto count_line = [distance](int pos, int len) {
        return static_cast<int>(pos - distance >= 0) + static_cast<int>(pos + distance < len);
    };
    switch (kind) {
        case TopologyKind::kChain:
            return count_line(site, side);
        case TopologyKind::kGrid:
            return count_line(site / side, side) + count_line(site % side, side);
        case TopologyKind::kCustom:
            break;
    }
    throw DomainError("axis_multiplicity: needs a chain or grid");
}

Multiplicity default_multiplicity(TopologyKind kind, int side) {
    int center = kind == TopologyKind::kGrid ? (side / 2) * side + side / 2 : side / 2;
    return [=](int n) { return axis_multiplicity(kind, side, center, n); };
}

std::vector<CorrelatedRow> correlated_error_curve(const FluxQubitSpec &spec_template,
                                                  const std::vector<double> &cc_grid_ff, double ve_uv,
                                                  const std::vector<int> &p_values, int n_sites,
                                                  const SolveSettings &settings, int threads) {
    if (cc_grid_ff.empty()) {
        throw DomainError("empty grid");
    }
    std::vector<CorrelatedRow> rows(cc_grid_ff.size());
    auto multiplicity = default_multiplicity(TopologyKind::kChain, n_sites);
    parallel_for(cc_grid_ff.size(), threads, [&](std::size_t k) {
        CorrelatedRow &row = rows[k];
        row.cc_ff = cc_grid_ff[k];
        try {
            row.ratio = chain_couplings(6, row.cc_ff, ve_uv, spec_template, settings).ratio;
            for (int p : p_values) {
                row.eps_non.push_back(correlated_error(row.ratio, p, n_sites, multiplicity));
            }
        } catch (const std::exception &e) {
            row.error = e.what();
            row.eps_non.clear();
        }
    });
    return rows;
}

void write_local_error_csv(std::ostream &out, const LocalErrorCurve &curve) {
    out << "Ve_uV,g_GHz,dE01_dVe_GHz_per_uV,t_cp_ns,T2_ns,eps_d,eps_tim,eps_loc,status\n";
    for (const auto &r : curve.rows) {
        out << format_number(r.ve_uv) << ',';
        if (!r.ok()) {
            out << ",,,,,,,error\n";
            continue;
        }
        out << format_number(r.g_ghz) << ',' << format_number(r.slope_ghz_per_uv) << ','
            << format_number(r.errors.t_cp_ns) << ',' << format_number(r.errors.t2_ns) << ','
            << format_number(r.errors.eps_d) << ',' << format_number(r.errors.eps_tim) << ','
            << format_number(r.errors.eps_loc) << ',' << (r.errors.in_regime ? "ok" : "out_of_regime") << '\n';
    }
}

void write_correlated_csv(std::ostream &out, const std::vector<int> &p_values,
                          const std::vector<CorrelatedRow> &rows) {
    out << "Cc_fF,R";
    for (int p : p_values) {
        out << ",eps_non_p" << p;
    }
    out << ",status\n";
    for (const auto &r : rows) {
        out << format_number(r.cc_ff) << ',';
        if (!r.ok()) {
            out << std::string(p_values.size() + 1, ',') << "error\n";
            continue;
        }
        out << format_number(r.ratio);
        for (double e : r.eps_non) {
            out << ',' << format_number(e);
        }
        out << ",ok\n";
    }
}

}  // namespace fluxq
