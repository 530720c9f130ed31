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

#include "fluxq/spectrum.hpp"

#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>

#include "fluxq/errors.hpp"
#include "fluxq/format.hpp"
#include "fluxq/parallel.hpp"

namespace fluxq {

QubitSpectrum compute_spectrum(const QubitCircuit &circuit, const SolveSettings &settings) {
    EigenPairs pairs = solve_circuit(circuit, kSpectrumLevels, settings);
    QubitSpectrum s;
    s.circuit = circuit;
    s.cutoff = settings.cutoff;
    s.energies = std::move(pairs.energies);
    s.states = std::move(pairs.vectors);
    return s;
}

EnergyGaps energy_gaps(const QubitCircuit &circuit, const SolveSettings &settings) {
    auto s = compute_spectrum(circuit, settings);
    return {s.e01(), s.e12()};
}

EnergyGaps energy_gaps(const FluxQubitSpec &spec, const SolveSettings &settings) {
    return energy_gaps(make_circuit(spec), settings);
}

double flux_offset_from_optimal(double flux) {
    double f = flux - std::floor(flux);
    return f - 0.5;
}

TwoLevelFrame::TwoLevelFrame(const QubitCircuit &circuit, const SolveSettings &settings)
    : TwoLevelFrame(compute_spectrum(circuit.with_flux(0.5), settings), settings) {
}

TwoLevelFrame::TwoLevelFrame(QubitSpectrum optimal, const SolveSettings &settings)
    : optimal_(std::move(optimal)), settings_(settings) {
    if (optimal_.circuit.flux != 0.5 || optimal_.cutoff != settings.cutoff) {
        throw DomainError("TwoLevelFrame: spectrum must be solved at f = 0.5 with the same cutoff");
    }
    ChargeBasis basis(settings.cutoff);
    Eigen::VectorXcd g0 = optimal_.states.col(0);
    Eigen::VectorXcd e0 = optimal_.states.col(1);
    auto dh = flux_derivative(optimal_.circuit, basis);
    Eigen::VectorXcd dh_e(e0.size());
    dh.apply(e0, dh_e);
    Complex coupling = g0.dot(dh_e);  // <g0|dH/df|e0>
    if (std::abs(coupling) > 0.0) {
        e0 *= std::conj(coupling) / std::abs(coupling);
    }
    left_ = (g0 + e0) / std::numbers::sqrt2;
    right_ = (e0 - g0) / std::numbers::sqrt2;
}

TwoLevelParams TwoLevelFrame::evaluate(double flux) const {
    if (std::abs(flux_offset_from_optimal(flux)) > kTwoLevelWindow + 1e-12) {
        throw DomainError("two_level_params: flux " + format_number(flux) +
                          " lies outside the two-level window 0.5 +/- " + format_number(kTwoLevelWindow));
    }
    QubitCircuit at_f = optimal_.circuit.with_flux(flux);
    ChargeBasis basis(settings_.cutoff);
    auto h = build_hamiltonian(at_f, basis);
    Eigen::VectorXcd hl(left_.size());
    Eigen::VectorXcd hr(right_.size());
    h.apply(left_, hl);
    h.apply(right_, hr);
    TwoLevelParams p{};
    p.epsilon_ghz = right_.dot(hr).real() - left_.dot(hl).real();
    p.delta_ghz = 2.0 * std::abs(left_.dot(hr));
    p.e01_ghz = flux == optimal_.circuit.flux ? optimal_.e01() : compute_spectrum(at_f, settings_).e01();
    return p;
}

TwoLevelParams two_level_params(const QubitCircuit &circuit, const SolveSettings &settings) {
    if (std::abs(flux_offset_from_optimal(circuit.flux)) > kTwoLevelWindow + 1e-12) {
        throw DomainError("two_level_params: flux " + format_number(circuit.flux) +
                          " lies outside the two-level window 0.5 +/- " + format_number(kTwoLevelWindow));
    }
    return TwoLevelFrame(circuit, settings).evaluate(circuit.flux);
}

TwoLevelParams two_level_params(const FluxQubitSpec &spec, const SolveSettings &settings) {
    spec.validate();
    return two_level_params(make_circuit(spec), settings);
}

SweepAxis parse_sweep_axis(const std::string &name) {
    if (name == "alpha") {
        return SweepAxis::kAlpha;
    }
    if (name == "flux") {
        return SweepAxis::kFlux;
    }
    if (name == "voltage") {
        return SweepAxis::kVoltage;
    }
    throw DomainError("unknown sweep axis '" + name + "' (expected alpha, flux or voltage)");
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::kAlpha:
            return "alpha";
        case SweepAxis::kFlux:
            return "flux";
        case SweepAxis::kVoltage:
            return "voltage";
    }
    return "?";
}

namespace {

FluxQubitSpec spec_at(const FluxQubitSpec &base, SweepAxis axis, double value) {
    FluxQubitSpec s = base;
    switch (axis) {
        case SweepAxis::kAlpha:
            s.alpha = value;
            break;
        case SweepAxis::kFlux:
            s.flux = value;
            break;
        case SweepAxis::kVoltage:
            s.ve_uv = value;
            break;
    }
    return s;
}

}  // namespace

std::vector<SweepRow> sweep(const FluxQubitSpec &spec_template, SweepAxis axis, const std::vector<double> &grid,
                            const SolveSettings &settings, int threads) {
    if (grid.empty()) {
        throw DomainError("empty grid");
    }
    std::vector<SweepRow> rows(grid.size());

    // Along the flux axis every row shares one optimal-point frame.
    std::optional<TwoLevelFrame> shared_frame;
    std::string frame_error;
    if (axis == SweepAxis::kFlux) {
        try {
            FluxQubitSpec s = spec_template;
            s.validate();
            shared_frame.emplace(make_circuit(s), settings);
        } catch (const std::exception &e) {
            frame_error = e.what();
        }
    }

    parallel_for(grid.size(), threads, [&](std::size_t i) {
        SweepRow &row = rows[i];
        row.value = grid[i];
        try {
            FluxQubitSpec s = spec_at(spec_template, axis, grid[i]);
            s.validate();
            QubitCircuit c = make_circuit(s);
            auto spectrum = compute_spectrum(c, settings);
            row.e01_ghz = spectrum.e01();
            row.e12_ghz = spectrum.e12();
            if (std::abs(flux_offset_from_optimal(s.flux)) <= kTwoLevelWindow + 1e-12) {
                TwoLevelParams p{};
                if (axis == SweepAxis::kFlux) {
                    if (!shared_frame) {
                        throw SolverError("optimal-point frame unavailable: " + frame_error, 0.0);
                    }
                    p = shared_frame->evaluate(s.flux);
                } else if (c.flux == 0.5) {
                    p = TwoLevelFrame(std::move(spectrum), settings).evaluate(s.flux);
                } else {
                    p = TwoLevelFrame(c, settings).evaluate(s.flux);
                }
                row.delta_ghz = p.delta_ghz;
                row.epsilon_ghz = p.epsilon_ghz;
            }
        } catch (const std::exception &e) {
            row.error = e.what();
        }
    });
    return rows;
}

void write_sweep_csv(std::ostream &out, SweepAxis axis, const std::vector<SweepRow> &rows) {
    static const std::map<SweepAxis, std::string> kAxisHeader = {
        {SweepAxis::kAlpha, "alpha"}, {SweepAxis::kFlux, "f"}, {SweepAxis::kVoltage, "Ve_uV"}};
    out << kAxisHeader.at(axis) << ",E01_GHz,E12_GHz,Delta_GHz,epsilon_GHz,status\n";
    for (const auto &r : rows) {
        out << format_number(r.value) << ',';
        if (!r.ok()) {
            out << ",,,,error\n";
            continue;
        }
        out << format_number(r.e01_ghz) << ',' << format_number(r.e12_ghz) << ','
            << (r.delta_ghz ? format_number(*r.delta_ghz) : "") << ','
            << (r.epsilon_ghz ? format_number(*r.epsilon_ghz) : "") << ",ok\n";
    }
}

Derivative central_difference(const std::function<double(double)> &f, double x, double step) {
    if (!(step > 0.0)) {
        throw DomainError("finite-difference step must be positive");
    }
    Derivative d;
    d.value = (f(x + step) - f(x - step)) / (2.0 * step);
    d.refined = (f(x + step / 2) - f(x - step / 2)) / step;
    double scale = std::max(std::abs(d.value), std::abs(d.refined));
    double diff = std::abs(d.value - d.refined);
    // Both estimates at the rounding floor count as agreement on zero.
    d.accurate = diff <= kRichardsonAgreement * scale || scale < 1e-12;
    if (!d.accurate) {
        d.warning = "half-step estimate " + format_number(d.refined) + " differs from " + format_number(d.value) +
                    " by more than 5%";
    }
    return d;
}

Derivative de01_dve(const QubitCircuit &circuit, double step_uv, const SolveSettings &settings) {
    return central_difference(
        [&](double ve) { return compute_spectrum(circuit.with_voltage(ve), settings).e01(); }, circuit.ve_uv,
        step_uv);
}

Derivative de01_dve(const FluxQubitSpec &spec, double step_uv, const SolveSettings &settings) {
    spec.validate();
    return de01_dve(make_circuit(spec), step_uv, settings);
}

}  // namespace fluxq
