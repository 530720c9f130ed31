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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

#include "fluxq/coupling.hpp"
#include "fluxq/error_budget.hpp"
#include "fluxq/errors.hpp"
#include "fluxq/format.hpp"
#include "fluxq/parallel.hpp"
#include "fluxq/schedule.hpp"
#include "fluxq/spectrum.hpp"
#include "fluxq/units.hpp"

namespace fluxq::cli {

namespace {

void require_grid(const std::vector<double> &grid, const std::string &name) {
    if (grid.empty()) {
        throw UsageError("empty grid (sweeps." + name + ")");
    }
}

const FluxQubitSpec &first_qubit(const Common &c) {
    return c.config.qubits.front();
}

const FluxQubitSpec &second_qubit(const Common &c) {
    return c.config.qubits.size() > 1 ? c.config.qubits[1] : c.config.qubits.front();
}

double coupling_capacitance(const Common &c, const std::optional<double> &flag) {
    if (flag) {
        return *flag;
    }
    if (!c.config.couplers.empty()) {
        return c.config.couplers.front().cc_ff;
    }
    return c.config.cluster.cc_ff;
}

std::string status_of(const std::string &error) {
    return error.empty() ? "ok" : error;
}

int run_pair(const Common &common, const CouplingOptions &options, Run &run) {
    const auto &grid = common.config.sweeps.ve_uv;
    require_grid(grid, "ve_uv");
    const double cc = coupling_capacitance(common, options.cc_ff);
    const auto &q1 = first_qubit(common);
    const auto &q2 = second_qubit(common);
    run.parameters()["cc_fF"] = json_number(cc);
    run.parameters()["oracle_states"] = options.oracle_states;
    run.set_grid("Ve_uV", grid);

    struct Row {
        double g = 0.0;
        std::optional<double> exact;
        double delta1 = 0.0;
        double delta2 = 0.0;
        std::string error;
    };
    std::vector<Row> rows(grid.size());
    parallel_for(grid.size(), common.threads, [&](std::size_t k) {
        Row &r = rows[k];
        try {
            auto pc = pair_coupling_g(q1, q2, cc, grid[k], grid[k], common.settings);
            r.g = pc.g_ghz;
            r.delta1 = pc.delta1_ghz;
            r.delta2 = pc.delta2_ghz;
            if (options.oracle_states > 0) {
                r.exact = exact_pair_coupling(q1, q2, cc, grid[k], grid[k], options.oracle_states, common.settings)
                              .g_ghz;
            }
        } catch (const std::exception &e) {
            r.error = e.what();
        }
    });

    std::ostringstream csv;
    csv << "Ve_uV,n_g,g_GHz,g_exact_GHz,rel_diff,Delta1_GHz,Delta2_GHz,status\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const Row &r = rows[k];
        csv << format_number(grid[k]) << ',' << format_number(units::offset_charge(q1.cg_ff, grid[k])) << ',';
        if (!r.error.empty()) {
            csv << ",,,,,error\n";
        } else {
            csv << format_number(r.g) << ',';
            if (r.exact) {
                csv << format_number(*r.exact);
            }
            csv << ',';
            if (r.exact && *r.exact != 0.0) {
                csv << format_number((r.g - *r.exact) / std::abs(*r.exact));
            }
            csv << ',' << format_number(r.delta1) << ',' << format_number(r.delta2) << ",ok\n";
        }
        run.point("Ve_uV=" + format_number(grid[k]), status_of(r.error));
    }
    run.write("coupling_pair.csv", csv.str());
    return run.finish();
}

int run_chain(const Common &common, Run &run) {
    const auto &grid = common.config.sweeps.cc_ff;
    require_grid(grid, "cc_ff");
    const int n = common.config.sweeps.chain_sites;
    const double ve = common.config.sweeps.chain_ve_uv;
    run.parameters()["chain_sites"] = n;
    run.parameters()["Ve_uV"] = json_number(ve);
    run.set_grid("Cc_fF", grid);

    std::vector<ChainCouplings> rows(grid.size());
    std::vector<std::string> errors(grid.size());
    parallel_for(grid.size(), common.threads, [&](std::size_t k) {
        try {
            rows[k] = chain_couplings(n, grid[k], ve, first_qubit(common), common.settings);
        } catch (const std::exception &e) {
            errors[k] = e.what();
        }
    });

    std::ostringstream csv;
    csv << "Cc_fF";
    for (int d = 1; d < n; ++d) {
        csv << ",g" << d << "_GHz";
    }
    csv << ",R,status\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
        csv << format_number(grid[k]);
        if (!errors[k].empty()) {
            csv << std::string(static_cast<std::size_t>(n), ',') << ",error\n";
        } else {
            for (double g : rows[k].g_ghz) {
                csv << ',' << format_number(g);
            }
            csv << ',' << format_number(rows[k].ratio) << ",ok\n";
        }
        run.point("Cc_fF=" + format_number(grid[k]), status_of(errors[k]));
    }
    run.write("coupling_chain.csv", csv.str());
    return run.finish();
}

int run_local_errors(const Common &common, const ErrorsOptions &options, Run &run) {
    const auto &grid = common.config.sweeps.ve_uv;
    require_grid(grid, "ve_uv");
    const double cc = coupling_capacitance(common, options.cc_ff);
    const auto &noise = common.config.noise;
    run.parameters()["mode"] = "local";
    run.parameters()["cc_fF"] = json_number(cc);
    run.set_grid("Ve_uV", grid);

    auto curve = local_error_curve(first_qubit(common), cc, grid, noise, common.settings, common.threads);
    std::ostringstream csv;
    write_local_error_csv(csv, curve);
    for (const auto &r : curve.rows) {
        run.point("Ve_uV=" + format_number(r.ve_uv), status_of(r.error));
    }
    run.write("errors_local.csv", csv.str());

    Json summary;
    summary["cc_fF"] = json_number(cc);
    summary["dv_uV"] = json_number(noise.dv_uv);
    summary["dt_ns"] = json_number(noise.dt_ns);
    summary["threshold"] = json_number(curve.threshold);
    if (curve.argmin) {
        const auto &best = curve.rows[*curve.argmin];
        summary["argmin_Ve_uV"] = json_number(best.ve_uv);
        summary["min_eps_loc"] = json_number(best.errors.eps_loc);
        summary["g_at_min_GHz"] = json_number(best.g_ghz);
        summary["interior_minimum"] = curve.interior_minimum;
        summary["below_threshold"] = curve.below_threshold;
        summary["within_factor_3"] = best.errors.eps_loc < 3.0 * curve.threshold;
        std::cout << "min eps_loc = " << format_number(best.errors.eps_loc) << " at Ve = "
                  << format_number(best.ve_uv) << " uV (threshold " << format_number(curve.threshold) << ": "
                  << (curve.below_threshold ? "pass" : "fail") << ")\n";
    } else {
        summary["argmin_Ve_uV"] = nullptr;
        summary["min_eps_loc"] = nullptr;
    }
    run.write_json("errors_local_summary.json", summary);
    return run.finish();
}

int run_correlated_errors(const Common &common, const ErrorsOptions &options, Run &run) {
    const auto &grid = common.config.sweeps.cc_ff;
    require_grid(grid, "cc_ff");
    const auto p = options.p.empty() ? common.config.sweeps.p : options.p;
    if (p.empty()) {
        throw UsageError("no pair spacing p given");
    }
    for (int v : p) {
        if (v < 2) {
            throw UsageError("--p must be at least 2");
        }
    }
    const double ve = common.config.sweeps.chain_ve_uv;
    const int sites = common.config.sweeps.correlated_sites;
    run.parameters()["mode"] = "correlated";
    run.parameters()["p"] = p;
    run.parameters()["Ve_uV"] = json_number(ve);
    run.parameters()["sites"] = sites;
    run.set_grid("Cc_fF", grid);

    auto rows = correlated_error_curve(first_qubit(common), grid, ve, p, sites, common.settings, common.threads);
    std::ostringstream csv;
    write_correlated_csv(csv, p, rows);
    for (const auto &r : rows) {
        run.point("Cc_fF=" + format_number(r.cc_ff), status_of(r.error));
    }
    run.write("errors_correlated.csv", csv.str());

    Json curves = Json::array();
    for (std::size_t j = 0; j < p.size(); ++j) {
        Json c;
        c["p"] = p[j];
        Json first = nullptr;
        Json crossing = nullptr;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (!rows[k].ok() || rows[k].eps_non[j] <= kCorrelatedErrorThreshold) {
                continue;
            }
            first = json_number(rows[k].cc_ff);
            if (k > 0 && rows[k - 1].ok()) {
                double a = rows[k - 1].eps_non[j];
                double b = rows[k].eps_non[j];
                double t = (kCorrelatedErrorThreshold - a) / (b - a);
                crossing = json_number(rows[k - 1].cc_ff + t * (rows[k].cc_ff - rows[k - 1].cc_ff));
            }
            break;
        }
        c["first_exceeding_Cc_fF"] = first;
        c["crossing_Cc_fF"] = crossing;
        curves.push_back(std::move(c));
    }
    Json summary;
    summary["threshold"] = json_number(kCorrelatedErrorThreshold);
    summary["Ve_uV"] = json_number(ve);
    summary["sites"] = sites;
    summary["curves"] = std::move(curves);
    run.write_json("errors_correlated_summary.json", summary);
    return run.finish();
}

struct ModelSource {
    double delta = 0.0;
    double g1 = 0.0;
    double ratio = 0.0;
    std::string source;
};

ModelSource cluster_model(const Common &common) {
    const auto &cc = common.config.cluster;
    ModelSource m;
    if (cc.ratio && cc.g1_ghz) {
        m.ratio = *cc.ratio;
        m.g1 = *cc.g1_ghz;
        m.source = "config";
    } else {
        auto chain = chain_couplings(6, cc.cc_ff, cc.ve_uv, first_qubit(common), common.settings, common.threads);
        m.g1 = cc.g1_ghz.value_or(chain.g_ghz.front());
        m.ratio = cc.ratio.value_or(chain.ratio);
        m.source = "chain";
    }
    if (cc.delta_ghz) {
        m.delta = *cc.delta_ghz;
    } else {
        FluxQubitSpec s = first_qubit(common);
        s.ve_uv = cc.ve_uv;
        m.delta = energy_gaps(s, common.settings).e01_ghz;
    }
    if (!(m.ratio >= 0.0 && m.ratio < 1.0)) {
        throw ModelError("coupling ratio R = " + format_number(m.ratio) + " is outside [0, 1)");
    }
    if (m.g1 == 0.0) {
        throw ModelError("nearest-neighbour coupling is zero");
    }
    return m;
}

// Site closest to the lattice centre that takes part in a gate.
std::pair<int, std::size_t> central_target(const Schedule &s) {
    int n = s.sites();
    int centre = s.kind == TopologyKind::kGrid ? (s.side / 2) * s.side + s.side / 2 : s.side / 2;
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
        order[static_cast<std::size_t>(q)] = q;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return s.distance(a, centre) < s.distance(b, centre); });
    for (int q : order) {
        for (std::size_t k = 0; k < s.steps.size(); ++k) {
            for (const auto &g : s.steps[k].gates) {
                if (g.first == q || g.second == q) {
                    return {q, k};
                }
            }
        }
    }
    return {-1, 0};
}

}  // namespace

int run_spectrum(const Common &common, const SpectrumOptions &options) {
    SweepAxis axis = parse_sweep_axis(options.axis);
    const auto &sw = common.config.sweeps;
    const auto &grid = axis == SweepAxis::kAlpha ? sw.alpha : axis == SweepAxis::kFlux ? sw.flux : sw.voltage_uv;
    require_grid(grid, axis == SweepAxis::kVoltage ? "voltage_uv" : to_string(axis));
    Run run("spectrum", common);
    run.parameters()["axis"] = to_string(axis);
    run.parameters()["cutoff"] = common.settings.cutoff;
    run.set_grid(to_string(axis), grid);

    auto rows = sweep(first_qubit(common), axis, grid, common.settings, common.threads);
    std::ostringstream csv;
    write_sweep_csv(csv, axis, rows);
    for (const auto &r : rows) {
        run.point(to_string(axis) + "=" + format_number(r.value), status_of(r.error));
    }
    run.write("spectrum_" + to_string(axis) + ".csv", csv.str());
    return run.finish();
}

int run_coupling(const Common &common, const CouplingOptions &options) {
    if (options.oracle_states < 0 || options.oracle_states == 1) {
        throw UsageError("--oracle-states must be 0 or at least 2");
    }
    Run run("coupling", common);
    run.parameters()["mode"] = options.mode;
    run.parameters()["cutoff"] = common.settings.cutoff;
    if (options.mode == "pair") {
        return run_pair(common, options, run);
    }
    if (options.mode == "chain") {
        return run_chain(common, run);
    }
    throw UsageError("unknown coupling mode '" + options.mode + "'");
}

int run_errors(const Common &common, const ErrorsOptions &options) {
    if (options.local == options.correlated) {
        throw UsageError("choose exactly one of --local and --correlated");
    }
    if (options.local && !options.p.empty()) {
        throw UsageError("--p applies to --correlated only");
    }
    Run run("errors", common);
    run.parameters()["cutoff"] = common.settings.cutoff;
    return options.local ? run_local_errors(common, options, run) : run_correlated_errors(common, options, run);
}

int run_cluster(const Common &common, const ClusterOptions &options) {
    ClusterOptions opt = options;
    if (opt.echo_demo) {
        if (opt.dim != "1d" || (opt.n != 0 && opt.n != 3)) {
            throw UsageError("--echo-demo runs on --dim 1d --n 3");
        }
        opt.n = 3;
        opt.nonlocal = true;
        opt.simulate = true;
    }
    if (opt.n <= 0) {
        throw UsageError("--n is required");
    }
    const bool grid = opt.dim == "2d";
    const TopologyKind kind = grid ? TopologyKind::kGrid : TopologyKind::kChain;
    const int sites = grid ? opt.n * opt.n : opt.n;
    if (opt.simulate && sites > kMaxSimulatedQubits) {
        throw UsageError("--simulate supports at most " + std::to_string(kMaxSimulatedQubits) + " qubits, got " +
                         std::to_string(sites));
    }

    Run run("cluster", common);
    auto src = cluster_model(common);
    const double t_cp = units::cz_gate_time(std::abs(src.g1));
    const double ve = common.config.cluster.ve_uv;

    Schedule schedule;
    std::string schedule_name;
    if (opt.echo_demo) {
        schedule.kind = TopologyKind::kChain;
        schedule.side = 3;
        schedule.ve_uv = ve;
        schedule.steps = {ScheduleStep{t_cp, {0, 1, 2}, {{0, 1}}, {{0.5 * t_cp, {0, 1}}}, {0, 1, 2}}};
        schedule.validate();
        schedule_name = "cluster_echo_schedule.json";
    } else {
        schedule = grid ? build_2d_schedule(opt.n, t_cp, ve) : build_1d_schedule(opt.n, t_cp, ve);
        schedule_name = "cluster_" + opt.dim + "_n" + std::to_string(opt.n) + "_schedule.json";
    }
    auto model = geometric_model(kind, opt.n, src.delta, src.g1, src.ratio);
    auto target = target_graph(schedule);
    auto angles = residual_zz_angles(model, schedule, opt.nonlocal);
    const double bound = grid ? grid_echo_bound(src.ratio) : chain_echo_bound(src.ratio);

    run.parameters()["dim"] = opt.dim;
    run.parameters()["n"] = opt.n;
    run.parameters()["simulate"] = opt.simulate;
    run.parameters()["nonlocal"] = opt.nonlocal;
    run.parameters()["echo_demo"] = opt.echo_demo;
    run.parameters()["cutoff"] = common.settings.cutoff;
    run.write(schedule_name, schedule_to_json(schedule));

    Json report;
    report["dim"] = opt.dim;
    report["n"] = opt.n;
    report["sites"] = sites;
    report["include_nonlocal"] = opt.nonlocal;
    report["model"] = {{"delta_GHz", json_number(src.delta)},
                       {"g1_GHz", json_number(src.g1)},
                       {"R", json_number(src.ratio)},
                       {"source", src.source}};
    report["t_cp_ns"] = json_number(t_cp);
    report["schedule_file"] = schedule_name;
    report["gate_counts"] = gate_counts(schedule);
    report["truncated"] = schedule.truncated;
    Json edges = Json::array();
    for (const auto &[a, b] : target.edges) {
        edges.push_back({a, b});
    }
    report["target_edges"] = std::move(edges);
    report["echo_bound"] = json_number(bound);

    std::vector<double> per_qubit(static_cast<std::size_t>(sites), 0.0);
    Json table = Json::array();
    for (const auto &[pair, angle] : angles.total) {
        if (angle == 0.0) {
            continue;
        }
        bool is_target = target.edges.contains(pair);
        if (!is_target) {
            per_qubit[static_cast<std::size_t>(pair.first)] += std::abs(angle) / 4.0;
            per_qubit[static_cast<std::size_t>(pair.second)] += std::abs(angle) / 4.0;
        }
        table.push_back({{"i", pair.first},
                         {"j", pair.second},
                         {"distance", schedule.distance(pair.first, pair.second)},
                         {"angle_rad", json_number(angle)},
                         {"target", is_target}});
    }
    report["residual_angles"] = std::move(table);
    report["residual_rad_per_qubit"] = json_numbers(per_qubit);
    report["max_residual_rad_per_qubit"] = json_number(*std::max_element(per_qubit.begin(), per_qubit.end()));

    auto [centre, step] = central_target(schedule);
    if (centre >= 0) {
        struct Partner {
            int site;
            int distance;
            double g;
        };
        std::vector<Partner> partners;
        const double duration = schedule.steps[step].duration_ns;
        for (const auto &[pair, angle] : angles.per_step[step]) {
            if ((pair.first != centre && pair.second != centre) || angle == 0.0 || target.edges.contains(pair)) {
                continue;
            }
            int other = pair.first == centre ? pair.second : pair.first;
            // An uncancelled pair accumulates 8 pi g t over the step.
            partners.push_back({other, schedule.distance(centre, other),
                                std::abs(angle) / (8.0 * std::numbers::pi * duration)});
        }
        std::stable_sort(partners.begin(), partners.end(),
                         [](const Partner &a, const Partner &b) { return a.g > b.g; });
        Json list = Json::array();
        for (std::size_t k = 0; k < partners.size() && k < 8; ++k) {
            list.push_back({{"site", partners[k].site},
                            {"distance", partners[k].distance},
                            {"g_GHz", json_number(partners[k].g)},
                            {"g_over_g1", json_number(partners[k].g / std::abs(src.g1))}});
        }
        report["central_target"] = {{"site", centre}, {"step", step + 1}, {"uncancelled", std::move(list)}};
    }

    if (opt.simulate) {
        auto state = simulate(model, schedule, opt.nonlocal);
        auto fid = cluster_fidelity(state, target);
        double per_qubit_infidelity = 1.0 - std::pow(fid.frame_corrected, 1.0 / sites);
        Json sim;
        sim["norm"] = json_number(state.norm());
        sim["raw_fidelity"] = json_number(fid.raw);
        sim["frame_corrected_fidelity"] = json_number(fid.frame_corrected);
        sim["per_qubit_infidelity"] = json_number(per_qubit_infidelity);
        sim["infidelity_over_bound"] = bound > 0.0 ? json_number(per_qubit_infidelity / bound) : Json(nullptr);
        sim["z_phases_rad"] = json_numbers(fid.z_phases);
        Json stabs = Json::array();
        for (std::size_t v = 0; v < fid.stabilizers.size(); ++v) {
            stabs.push_back({{"vertex", v}, {"value", json_number(fid.stabilizers[v])}});
        }
        sim["stabilizers"] = std::move(stabs);
        sim["min_stabilizer"] = json_number(*std::min_element(fid.stabilizers.begin(), fid.stabilizers.end()));
        report["simulation"] = std::move(sim);
        std::cout << "frame-corrected fidelity = " << format_number(fid.frame_corrected)
                  << ", raw fidelity = " << format_number(fid.raw) << '\n';
    }
    run.point(opt.dim + " n=" + std::to_string(opt.n), "ok");
    std::filesystem::path report_path = opt.report.empty() ? std::filesystem::path("cluster_report.json")
                                                           : std::filesystem::absolute(opt.report);
    run.write_json(report_path.string(), report);
    return run.finish();
}

}  // namespace fluxq::cli
