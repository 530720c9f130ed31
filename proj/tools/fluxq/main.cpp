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

#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "fluxq/parallel.hpp"
#include "fluxq/spectrum.hpp"

namespace {

using namespace fluxq;
using namespace fluxq::cli;

struct GlobalOptions {
    std::string config;
    std::string out = "out";
    int threads = default_thread_count();
    std::string cache;
    std::optional<int> cutoff;
};

Common make_common(const GlobalOptions &g) {
    Common c;
    c.config = g.config.empty() ? default_device_config() : load_device_config(g.config);
    c.out_dir = g.out;
    if (g.threads < 1) {
        throw UsageError("--threads must be at least 1");
    }
    c.threads = g.threads;
    if (g.cutoff) {
        if (*g.cutoff < kMinHamiltonianCutoff || *g.cutoff > kMaxCutoff) {
            throw UsageError("--cutoff must lie in [" + std::to_string(kMinHamiltonianCutoff) + ", " +
                             std::to_string(kMaxCutoff) + "]");
        }
        c.settings.cutoff = *g.cutoff;
    } else if (c.config.solver.cutoff_tolerance_ghz) {
        c.settings.cutoff =
            converge_cutoff(c.config.qubits.front(), kSpectrumLevels, *c.config.solver.cutoff_tolerance_ghz).cutoff;
    } else {
        c.settings.cutoff = c.config.solver.cutoff;
    }
    if (!g.cache.empty()) {
        c.settings.cache = std::make_shared<const EigenCache>(g.cache);
    }
    return c;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"fluxq: voltage-controlled Ising coupling of capacitively coupled flux qubits"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--config", global.config, "Device configuration (JSON)")->check(CLI::ExistingFile);
    app.add_option("--out", global.out, "Output directory")->capture_default_str();
    app.add_option("--threads", global.threads, "Worker threads for sweeps")->capture_default_str();
    app.add_option("--cache", global.cache, "Eigenpair cache directory");
    app.add_option("--cutoff", global.cutoff, "Charge-basis cutoff (overrides the config)");

    SpectrumOptions spectrum;
    auto *sp = app.add_subcommand("spectrum", "E01/E12 sweeps over alpha, flux or gate voltage");
    sp->add_option("--axis", spectrum.axis, "Sweep axis")
        ->required()
        ->check(CLI::IsMember({"alpha", "flux", "voltage"}));

    CouplingOptions coupling;
    auto *cp = app.add_subcommand("coupling", "Pair coupling g(Ve) or chain couplings g(n) and R(Cc)");
    cp->add_option("--mode", coupling.mode, "pair or chain")->required()->check(CLI::IsMember({"pair", "chain"}));
    cp->add_option("--cc", coupling.cc_ff, "Coupling capacitance in fF (pair mode)");
    cp->add_option("--oracle-states", coupling.oracle_states,
                   "Levels per qubit in the exact pair oracle; 0 disables it")
        ->capture_default_str();

    ErrorsOptions errors;
    auto *er = app.add_subcommand("errors", "Local (dephasing + timing) or correlated error budgets");
    auto *local = er->add_flag("--local", errors.local, "eps_loc versus Ve");
    auto *corr = er->add_flag("--correlated", errors.correlated, "eps_non versus Cc");
    local->excludes(corr);
    er->add_option("--cc", errors.cc_ff, "Coupling capacitance in fF (local mode)");
    er->add_option("--p", errors.p, "Pair spacing; repeat for several curves (correlated mode)");

    ClusterOptions cluster;
    auto *cl = app.add_subcommand("cluster", "Cluster-state schedules, residual couplings and simulation");
    cl->add_option("--dim", cluster.dim, "1d or 2d")->required()->check(CLI::IsMember({"1d", "2d"}));
    cl->add_option("--n", cluster.n, "Chain length or lattice side");
    cl->add_flag("--simulate", cluster.simulate, "Run the statevector simulation");
    cl->add_flag("--nonlocal", cluster.nonlocal, "Keep couplings beyond nearest neighbours");
    cl->add_flag("--echo-demo", cluster.echo_demo, "Three-qubit echo cancellation check");
    cl->add_option("--report", cluster.report, "Report path (default <out>/cluster_report.json)");

    for (auto *sub : {sp, cp, er, cl}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        Common common = make_common(global);
        if (sp->parsed()) {
            return run_spectrum(common, spectrum);
        }
        if (cp->parsed()) {
            return run_coupling(common, coupling);
        }
        if (er->parsed()) {
            return run_errors(common, errors);
        }
        return run_cluster(common, cluster);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
