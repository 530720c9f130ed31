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

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "fluxq/error_budget.hpp"
#include "fluxq/errors.hpp"

namespace fluxq {
namespace {

constexpr double kPi = std::numbers::pi;

// Controlled-phase evolution: only |ee> picks up a phase, 8 pi g t.
Eigen::Matrix4cd cz_unitary(double g, double t) {
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
    u(3, 3) = std::polar(1.0, 8.0 * kPi * g * t);
    return u;
}

double timing_oracle(double g, double dt) {
    double t = 1.0 / (8.0 * g);
    Eigen::Vector4cd pp = Eigen::Vector4cd::Constant(0.5);
    std::complex<double> overlap = pp.dot(cz_unitary(g, t).adjoint() * cz_unitary(g, t + dt) * pp);
    return 1.0 - std::norm(overlap);
}

TEST(Timing, ClosedFormMatchesUnitaryOverlap) {
    for (int i = 0; i < 10; ++i) {
        double g = 0.01 + 0.05 * i;
        for (int j = 0; j < 10; ++j) {
            double dt = 0.02 * j;
            EXPECT_NEAR(timing_error(g, dt), timing_oracle(g, dt), 1e-12) << g << " " << dt;
        }
    }
}

TEST(Timing, SmallJitterExpansion) {
    for (double g : {0.05, 0.2}) {
        double dt = 0.04 / (8.0 * kPi * g);
        double taylor = 12.0 * kPi * kPi * g * g * dt * dt;
        EXPECT_NEAR(timing_error(g, dt), taylor, 0.01 * taylor);
    }
    EXPECT_EQ(timing_error(0.2, 0.0), 0.0);
    EXPECT_THROW(timing_error(-0.1, 0.01), DomainError);
}

TEST(Dephasing, GateTimeAndLinearity) {
    auto d = dephasing_error(0.0125, 0.01, 0.21);
    EXPECT_NEAR(d.t_cp_ns, 10.0, 1e-12);
    EXPECT_NEAR(d.t2_ns, 1.0 / (2.0 * kPi * 0.01 * 0.21), 1e-9);
    EXPECT_NEAR(d.t_cp_ns / d.t2_ns, d.eps_d, 1e-15);
    for (double k : {2.0, 3.0, 10.0}) {
        EXPECT_NEAR(dephasing_error(0.0125, 0.01, k * 0.21).eps_d, k * d.eps_d, 1e-15 * k);
    }
    auto quiet = dephasing_error(0.2, 0.01, 0.0);
    EXPECT_EQ(quiet.eps_d, 0.0);
    EXPECT_EQ(quiet.t2_ns, std::numeric_limits<double>::infinity());
    EXPECT_THROW(dephasing_error(0.0, 0.01, 0.21), DomainError);
}

TEST(Dephasing, RegimeFlag) {
    EXPECT_TRUE(dephasing_error(0.2, 1e-4, 0.21).small_error_regime);
    EXPECT_FALSE(dephasing_error(0.001, 1.0, 1.0).small_error_regime);
}

TEST(LocalError, ZeroNoiseIsExactlyZero) {
    auto b = local_error(0.2, 0.05, NoiseParams{0.0, 0.0});
    EXPECT_EQ(b.eps_d, 0.0);
    EXPECT_EQ(b.eps_tim, 0.0);
    EXPECT_EQ(b.eps_loc, 0.0);
    EXPECT_THROW(local_error(0.2, 0.05, NoiseParams{-1.0, 0.0}), DomainError);
}

TEST(LocalError, TimingErrorIsEvenInJitter) {
    EXPECT_EQ(timing_error(0.2, 0.05), 0.375 * (1.0 - std::cos(-8.0 * kPi * 0.2 * 0.05)));
}

TEST(LocalError, CurveHasInteriorMinimum) {
    FluxQubitSpec s;
    s.cg_ff = 0.077;
    SolveSettings settings;
    settings.cutoff = 6;
    std::vector<double> grid = {100.0, 200.0, 300.0, 500.0, 800.0, 1200.0, 1600.0};
    auto curve = local_error_curve(s, 0.077, grid, NoiseParams{}, settings, 2);
    ASSERT_TRUE(curve.argmin.has_value());
    EXPECT_TRUE(curve.interior_minimum);
    for (std::size_t k = 1; k < curve.rows.size(); ++k) {
        ASSERT_TRUE(curve.rows[k].ok()) << curve.rows[k].error;
        EXPECT_GT(curve.rows[k].errors.eps_tim, curve.rows[k - 1].errors.eps_tim);
    }
    auto quiet = local_error_curve(s, 0.077, {500.0}, NoiseParams{0.0, 0.0}, settings);
    EXPECT_EQ(quiet.rows[0].errors.eps_loc, 0.0);
    std::ostringstream csv;
    write_local_error_csv(csv, curve);
    const std::string text = csv.str();
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 8);
    EXPECT_THROW(local_error_curve(s, 0.077, {}, NoiseParams{}, settings), DomainError);
}

TEST(LocalError, LargerCouplingLowersTheMinimum) {
    FluxQubitSpec s;
    s.cg_ff = 0.077;
    SolveSettings settings;
    settings.cutoff = 6;
    std::vector<double> grid = {100.0, 200.0, 300.0, 400.0, 600.0, 900.0};
    auto weak = local_error_curve(s, 0.05, grid, NoiseParams{}, settings, 2);
    auto strong = local_error_curve(s, 0.1, grid, NoiseParams{}, settings, 2);
    EXPECT_LE(strong.min_eps_loc(), weak.min_eps_loc());
}

TEST(Correlated, SumMatchesGeometricClosedForm) {
    auto one = [](int) { return 1; };
    for (double r : {0.01, 0.03, 0.1, 0.3}) {
        // Long chain so the truncated tail is below rounding.
        double sum = correlated_error(r, 5, 4000, one);
        double closed = 0.25 * kPi * std::pow(r, 4) / (1.0 - r);
        EXPECT_NEAR(sum, closed, 1e-12 * closed + 1e-300) << r;
    }
    // Finite range: explicit geometric partial sum.
    double r = 0.2;
    double partial = 0.25 * kPi * (std::pow(r, 3) - std::pow(r, 10)) / (1.0 - r) * 2.0;
    EXPECT_NEAR(correlated_error(r, 4, 20, [](int) { return 2; }), partial, 1e-15);
}

TEST(Correlated, MonotoneInRatioAndSpacing) {
    auto m = default_multiplicity(TopologyKind::kChain, 64);
    double prev = 0.0;
    for (double r : {0.0, 0.01, 0.05, 0.1, 0.5}) {
        double e = correlated_error(r, 4, 64, m);
        if (r == 0.0) {
            EXPECT_EQ(e, 0.0);
        } else {
            EXPECT_GT(e, prev);
        }
        prev = e;
    }
    EXPECT_GT(correlated_error(0.1, 3, 64, m), correlated_error(0.1, 4, 64, m));
    EXPECT_GT(correlated_error(0.1, 4, 64, m), correlated_error(0.1, 5, 64, m));
    EXPECT_THROW(correlated_error(1.0, 4, 64, m), DomainError);
    EXPECT_THROW(correlated_error(0.1, 1, 64, m), DomainError);
}

TEST(Correlated, EchoBounds) {
    double r = 0.0274;
    EXPECT_NEAR(chain_echo_bound(r), 0.25 * kPi * (std::pow(r, 4) + 2 * std::pow(r, 5)), 1e-20);
    EXPECT_NEAR(grid_echo_bound(r), 0.25 * kPi * (std::pow(r, 4) + 4 * std::pow(r, 5)), 1e-20);
    EXPECT_LT(chain_echo_bound(r), kCorrelatedErrorThreshold);
    EXPECT_GT(grid_echo_bound(r), chain_echo_bound(r));
}

TEST(Correlated, LatticeMultiplicities) {
    EXPECT_EQ(axis_multiplicity(TopologyKind::kChain, 10, 5, 2), 2);
    EXPECT_EQ(axis_multiplicity(TopologyKind::kChain, 10, 0, 2), 1);
    EXPECT_EQ(axis_multiplicity(TopologyKind::kChain, 10, 8, 2), 1);
    EXPECT_EQ(axis_multiplicity(TopologyKind::kGrid, 10, 55, 3), 4);
    EXPECT_EQ(axis_multiplicity(TopologyKind::kGrid, 10, 0, 3), 2);
    EXPECT_EQ(axis_multiplicity(TopologyKind::kChain, 10, 5, 0), 0);
    EXPECT_EQ(default_multiplicity(TopologyKind::kChain, 64)(3), 2);
    EXPECT_EQ(default_multiplicity(TopologyKind::kGrid, 16)(3), 4);
}

}  // namespace
}  // namespace fluxq
