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

#include <cmath>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "fluxq/errors.hpp"
#include "fluxq/spectrum.hpp"

namespace fluxq {
namespace {

SolveSettings small_cutoff(int nc = 6) {
    SolveSettings s;
    s.cutoff = nc;
    return s;
}

TEST(Spectrum, DefaultQubitIsAboutThreeTimesMoreAnharmonic) {
    auto gaps = energy_gaps(FluxQubitSpec{}, small_cutoff(8));
    EXPECT_GT(gaps.e01_ghz, 0.0);
    EXPECT_GT(gaps.e12_ghz, 0.0);
    double ratio = gaps.e01_ghz / gaps.e12_ghz;
    EXPECT_GE(ratio, 2.5);
    EXPECT_LE(ratio, 3.5);
}

TEST(Spectrum, GapsMatchDenseDiagonalization) {
    FluxQubitSpec s;
    s.cg_ff = 0.077;
    s.ve_uv = 800.0;
    auto gaps = energy_gaps(s, small_cutoff(4));
    auto dense = dense_lowest_eigenpairs(build_hamiltonian(s, ChargeBasis(4)).to_dense(), 3);
    EXPECT_NEAR(gaps.e01_ghz, dense.energies(1) - dense.energies(0), 1e-8);
    EXPECT_NEAR(gaps.e12_ghz, dense.energies(2) - dense.energies(1), 1e-8);
}

TEST(Spectrum, AlphaSweepIsMonotone) {
    auto rows = sweep(FluxQubitSpec{}, SweepAxis::kAlpha, {0.1, 0.2, 0.3, 0.4, 0.5}, small_cutoff(), 2);
    ASSERT_EQ(rows.size(), 5u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        ASSERT_TRUE(rows[i].ok()) << rows[i].error;
        EXPECT_LT(rows[i].e01_ghz, rows[i - 1].e01_ghz) << "alpha " << rows[i].value;
    }
}

TEST(TwoLevel, FrameIsConsistentWithExactGap) {
    auto circuit = make_circuit(FluxQubitSpec{});
    TwoLevelFrame frame(circuit, small_cutoff());
    auto at_opt = frame.evaluate(0.5);
    EXPECT_NEAR(at_opt.epsilon_ghz, 0.0, 1e-9);
    double delta0 = at_opt.delta_ghz;
    for (double f : {0.498, 0.499, 0.5015, 0.502}) {
        auto p = frame.evaluate(f);
        EXPECT_NEAR(std::hypot(p.epsilon_ghz, p.delta_ghz), p.e01_ghz, 0.01 * p.e01_ghz) << f;
        EXPECT_LT(std::abs(p.delta_ghz - delta0), 0.05 * delta0) << f;
    }
    for (double d : {0.001, 0.003}) {
        EXPECT_NEAR(frame.evaluate(0.5 + d).epsilon_ghz, -frame.evaluate(0.5 - d).epsilon_ghz, 1e-6);
    }
    // Bias decreases through the degeneracy point.
    EXPECT_LT(frame.evaluate(0.501).epsilon_ghz, frame.evaluate(0.499).epsilon_ghz);
}

TEST(TwoLevel, OutsideWindowIsRejected) {
    TwoLevelFrame frame(make_circuit(FluxQubitSpec{}), small_cutoff(4));
    EXPECT_THROW(frame.evaluate(0.53), DomainError);
    EXPECT_NO_THROW(frame.evaluate(1.5));
    EXPECT_NEAR(flux_offset_from_optimal(1.49), -0.01, 1e-12);
}

TEST(Sweep, EmptyGridThrowsAndFailuresStayPerRow) {
    EXPECT_THROW(sweep(FluxQubitSpec{}, SweepAxis::kFlux, {}, small_cutoff(4)), DomainError);
    auto rows = sweep(FluxQubitSpec{}, SweepAxis::kFlux, {0.5, 0.45}, small_cutoff(4));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_TRUE(rows[0].ok());
    EXPECT_TRUE(rows[0].delta_ghz.has_value());
    // Outside the two-level window the gaps are still reported.
    EXPECT_TRUE(rows[1].ok());
    EXPECT_FALSE(rows[1].delta_ghz.has_value());
}

TEST(Sweep, SinglePointEqualsDirectEvaluation) {
    FluxQubitSpec s;
    s.cg_ff = 0.16;
    auto rows = sweep(s, SweepAxis::kVoltage, {500.0}, small_cutoff(4));
    s.ve_uv = 500.0;
    auto direct = energy_gaps(s, small_cutoff(4));
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].e01_ghz, direct.e01_ghz);
    EXPECT_EQ(rows[0].e12_ghz, direct.e12_ghz);
}

TEST(Sweep, VoltageMovesTheOptimalPointEnergy) {
    FluxQubitSpec s;
    s.cg_ff = 0.16;
    auto rows = sweep(s, SweepAxis::kVoltage, {0.0, 1000.0, 2000.0}, small_cutoff());
    EXPECT_GT(std::abs(rows[1].e01_ghz - rows[0].e01_ghz), 1e-3);
    EXPECT_GT(std::abs(rows[2].e01_ghz - rows[1].e01_ghz), 1e-3);
}

TEST(Sweep, ResultIsIndependentOfThreadCount) {
    auto a = sweep(FluxQubitSpec{}, SweepAxis::kFlux, {0.49, 0.495, 0.5, 0.505}, small_cutoff(4), 1);
    auto b = sweep(FluxQubitSpec{}, SweepAxis::kFlux, {0.49, 0.495, 0.5, 0.505}, small_cutoff(4), 4);
    std::ostringstream sa, sb;
    write_sweep_csv(sa, SweepAxis::kFlux, a);
    write_sweep_csv(sb, SweepAxis::kFlux, b);
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_EQ(sa.str().substr(0, sa.str().find('\n')), "f,E01_GHz,E12_GHz,Delta_GHz,epsilon_GHz,status");
}

TEST(Sweep, AxisNamesRoundTrip) {
    for (auto axis : {SweepAxis::kAlpha, SweepAxis::kFlux, SweepAxis::kVoltage}) {
        EXPECT_EQ(parse_sweep_axis(to_string(axis)), axis);
    }
    EXPECT_THROW(parse_sweep_axis("charge"), DomainError);
}

TEST(Derivative, QuadraticIsRecoveredExactly) {
    auto d = central_difference([](double x) { return 3.0 * x * x - 2.0 * x + 7.0; }, 1.5, 0.25);
    EXPECT_NEAR(d.value, 7.0, 1e-12);
    EXPECT_NEAR(d.refined, 7.0, 1e-12);
    EXPECT_TRUE(d.accurate);
    EXPECT_THROW(central_difference([](double x) { return x; }, 0.0, 0.0), DomainError);
}

TEST(Derivative, DisagreementIsFlagged) {
    auto d = central_difference([](double x) { return std::sin(50.0 * x); }, 0.3, 0.1);
    EXPECT_FALSE(d.accurate);
    EXPECT_FALSE(d.warning.empty());
}

TEST(Derivative, EvenPointHasZeroSlope) {
    FluxQubitSpec s;
    s.cg_ff = 0.077;
    auto d = de01_dve(s, 2.0, small_cutoff(4));
    EXPECT_NEAR(d.value, 0.0, 1e-8);
}

TEST(Derivative, OperatingPointSlopeIsStable) {
    FluxQubitSpec s;
    s.cg_ff = 0.077;
    s.ve_uv = 1000.0;
    auto coarse = de01_dve(s, 4.0, small_cutoff());
    auto fine = de01_dve(s, 1.0, small_cutoff());
    EXPECT_TRUE(fine.accurate) << fine.warning;
    EXPECT_GT(std::abs(fine.value), 0.0);
    EXPECT_NEAR(coarse.value, fine.value, 1e-3 * std::abs(fine.value));
}

TEST(Cutoff, CertificateConvergesAndIsReproducible) {
    auto circuit = make_circuit(FluxQubitSpec{});
    auto a = converge_cutoff(circuit, 3, 1e-3);
    auto b = converge_cutoff(circuit, 3, 1e-3);
    EXPECT_EQ(a.cutoff, b.cutoff);
    EXPECT_EQ(a.shift_ghz, b.shift_ghz);
    EXPECT_LT(a.shift_ghz, 1e-3);
    EXPECT_GE(a.cutoff, kMinHamiltonianCutoff);
    EXPECT_LE(a.cutoff, kMaxCutoff);
}

}  // namespace
}  // namespace fluxq
