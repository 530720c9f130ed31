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

#ifndef FLUXQ_SPECTRUM_HPP
#define FLUXQ_SPECTRUM_HPP

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fluxq/circuit.hpp"
#include "fluxq/solve.hpp"

namespace fluxq {

/// Levels solved for every spectrum query. Keeping it fixed lets the cache
/// share entries between gap, frame and coupling computations.
inline constexpr int kSpectrumLevels = 3;

/// Half-width of the flux window in which the two-level reduction is used.
inline constexpr double kTwoLevelWindow = 0.02;

struct QubitSpectrum {
    QubitCircuit circuit;
    int cutoff = 0;
    Eigen::VectorXd energies;  // ascending
    Eigen::MatrixXcd states;   // columns in the ChargeBasis(cutoff)

    double e01() const {
        return energies(1) - energies(0);
    }
    double e12() const {
        return energies(2) - energies(1);
    }
};

QubitSpectrum compute_spectrum(const QubitCircuit &circuit, const SolveSettings &settings = {});

struct EnergyGaps {
    double e01_ghz;
    double e12_ghz;
};

EnergyGaps energy_gaps(const QubitCircuit &circuit, const SolveSettings &settings = {});
EnergyGaps energy_gaps(const FluxQubitSpec &spec, const SolveSettings &settings = {});

struct TwoLevelParams {
    double delta_ghz;
    double epsilon_ghz;
    double e01_ghz;
};

/// Persistent-current frame built from the two lowest states at f = 0.5 for a
/// given charge configuration:
///   |L> = (|g0> + |e0>)/sqrt2,  |R> = (|e0> - |g0>)/sqrt2,
/// with the relative phase of |e0> chosen so that <g0|dH/df|e0> is real and
/// positive. Then epsilon(f) = <R|H|R> - <L|H|L> decreases through zero at the
/// optimal point and Delta(f) = 2|<L|H|R>|.
class TwoLevelFrame {
   public:
    explicit TwoLevelFrame(const QubitCircuit &circuit, const SolveSettings &settings = {});
    /// Reuses a spectrum already solved at f = 0.5.
    TwoLevelFrame(QubitSpectrum optimal, const SolveSettings &settings);

    /// Throws DomainError when |f - 0.5| exceeds kTwoLevelWindow (f taken mod 1).
    TwoLevelParams evaluate(double flux) const;

    const QubitSpectrum &optimal_point() const {
        return optimal_;
    }

   private:
    QubitSpectrum optimal_;
    Eigen::VectorXcd left_;
    Eigen::VectorXcd right_;
    SolveSettings settings_;
};

TwoLevelParams two_level_params(const QubitCircuit &circuit, const SolveSettings &settings = {});
TwoLevelParams two_level_params(const FluxQubitSpec &spec, const SolveSettings &settings = {});

/// Distance of f (mod 1) from the optimal point.
double flux_offset_from_optimal(double flux);

enum class SweepAxis { kAlpha, kFlux, kVoltage };

SweepAxis parse_sweep_axis(const std::string &name);
std::string to_string(SweepAxis axis);

struct SweepRow {
    double value = 0.0;
    double e01_ghz = 0.0;
    double e12_ghz = 0.0;
    /// Absent when the row's flux lies outside the two-level window.
    std::optional<double> delta_ghz;
    std::optional<double> epsilon_ghz;
    /// Empty on success; otherwise the failure reason for this point.
    std::string error;

    bool ok() const {
        return error.empty();
    }
};

/// One row per grid value, each computed independently (failures are recorded
/// in the row and the sweep continues). Throws DomainError for an empty grid.
std::vector<SweepRow> sweep(const FluxQubitSpec &spec_template, SweepAxis axis, const std::vector<double> &grid,
                            const SolveSettings &settings = {}, int threads = 1);

/// CSV with header `<axis>,E01_GHz,E12_GHz,Delta_GHz,epsilon_GHz,status`.
void write_sweep_csv(std::ostream &out, SweepAxis axis, const std::vector<SweepRow> &rows);

struct Derivative {
    double value = 0.0;       // central difference at the requested step
    double refined = 0.0;     // same at half the step
    bool accurate = true;     // the two agree within kRichardsonAgreement
    std::string warning;
};

inline constexpr double kRichardsonAgreement = 0.05;

/// (f(x + h) - f(x - h)) / 2h together with the half-step agreement check.
Derivative central_difference(const std::function<double(double)> &f, double x, double step);

/// dE01/dVe in GHz/uV by central differences in the gate voltage.
Derivative de01_dve(const FluxQubitSpec &spec, double step_uv, const SolveSettings &settings = {});
Derivative de01_dve(const QubitCircuit &circuit, double step_uv, const SolveSettings &settings = {});

}  // namespace fluxq

#endif  // FLUXQ_SPECTRUM_HPP
