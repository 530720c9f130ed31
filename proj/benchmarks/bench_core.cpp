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

#include <benchmark/benchmark.h>

#include "fluxq/circuit.hpp"
#include "fluxq/coupling.hpp"
#include "fluxq/eigensolver.hpp"
#include "fluxq/schedule.hpp"
#include "fluxq/units.hpp"

namespace {

fluxq::FluxQubitSpec gated() {
    fluxq::FluxQubitSpec s;
    s.cg_ff = 0.077;
    s.ve_uv = 1000.0;
    return s;
}

void BM_BuildHamiltonian(benchmark::State &state) {
    fluxq::ChargeBasis basis(static_cast<int>(state.range(0)));
    auto circuit = fluxq::make_circuit(gated());
    for (auto _ : state) {
        benchmark::DoNotOptimize(fluxq::build_hamiltonian(circuit, basis));
    }
    state.counters["dim"] = static_cast<double>(basis.dimension());
}
BENCHMARK(BM_BuildHamiltonian)->Arg(6)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_LowestEigenpairs(benchmark::State &state) {
    fluxq::ChargeBasis basis(static_cast<int>(state.range(0)));
    auto h = fluxq::build_hamiltonian(gated(), basis);
    fluxq::EigenSolverOptions opt;
    opt.force_iterative = true;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fluxq::lowest_eigenpairs(h, 3, opt));
    }
}
BENCHMARK(BM_LowestEigenpairs)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Simulate1D(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    auto schedule = fluxq::build_1d_schedule(n, fluxq::units::cz_gate_time(0.2));
    auto model = fluxq::geometric_model(fluxq::TopologyKind::kChain, n, 10.0, 0.2, 0.03);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fluxq::simulate(model, schedule, true));
    }
}
BENCHMARK(BM_Simulate1D)->Arg(9)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_ResidualAngles2D(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    auto schedule = fluxq::build_2d_schedule(n, fluxq::units::cz_gate_time(0.2));
    auto model = fluxq::geometric_model(fluxq::TopologyKind::kGrid, n, 10.0, 0.2, 0.03);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fluxq::residual_zz_angles(model, schedule));
    }
}
BENCHMARK(BM_ResidualAngles2D)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
