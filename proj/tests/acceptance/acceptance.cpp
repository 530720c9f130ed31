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

// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fluxq/config.hpp"
#include "fluxq/coupling.hpp"
#include "fluxq/error_budget.hpp"
#include "fluxq/format.hpp"
#include "fluxq/parallel.hpp"
#include "fluxq/schedule.hpp"
#include "fluxq/spectrum.hpp"
#include "fluxq/units.hpp"

namespace fs = std::filesystem;
using namespace fluxq;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGateCapacitance = 0.077;
constexpr double kOperatingVe = 1000.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v, int digits = 4) {
    std::ostringstream s;
    s.precision(digits);
    s << v;
    return s.str();
}

FluxQubitSpec gated() {
    FluxQubitSpec s;
    s.cg_ff = kGateCapacitance;
    return s;
}

// State shared between criteria.
struct Context {
    int threads = 1;
    SolveSettings settings;  // certified cutoff once criterion 1 has run
    double ratio = 0.0;      // R at Cc = 0.077 fF
    double g1 = 0.0;
    std::vector<std::pair<double, double>> ratio_by_cc;
    fs::path cli;
    fs::path config;
    fs::path work;
};

Outcome anharmonicity(Context &ctx) {
    auto t0 = Clock::now();
    FluxQubitSpec spec;
    auto cert = converge_cutoff(spec, kSpectrumLevels, 1e-3);
    ctx.settings.cutoff = cert.cutoff;
    auto gaps = energy_gaps(spec, ctx.settings);
    double ratio = gaps.e01_ghz / gaps.e12_ghz;
    double elapsed = seconds_since(t0);
    return {ratio >= 2.5 && ratio <= 3.5 && elapsed < 300.0,
            "E01=" + num(gaps.e01_ghz, 6) + " GHz, E12=" + num(gaps.e12_ghz, 6) + " GHz, E01/E12=" + num(ratio) +
                " at cutoff " + std::to_string(cert.cutoff)};
}

Outcome cutoff_convergence(Context &ctx) {
    FluxQubitSpec spec;
    auto a = converge_cutoff(spec, kSpectrumLevels, 1e-3);
    auto b = converge_cutoff(spec, kSpectrumLevels, 1e-3);
    bool reproducible = a.cutoff == b.cutoff && a.shift_ghz == b.shift_ghz;
    SolveSettings lo = ctx.settings, hi = ctx.settings;
    lo.cutoff = a.cutoff;
    hi.cutoff = a.cutoff + 2;
    auto g0 = energy_gaps(spec, lo);
    auto g1 = energy_gaps(spec, hi);
    double d01 = std::abs(g1.e01_ghz - g0.e01_ghz);
    double d12 = std::abs(g1.e12_ghz - g0.e12_ghz);
    return {reproducible && d01 < 1e-3 && d12 < 1e-3,
            "cutoff " + std::to_string(a.cutoff) + ": |dE01|=" + num(d01, 3) + " GHz, |dE12|=" + num(d12, 3) +
                " GHz at +2; certificate " + (reproducible ? "reproducible" : "NOT reproducible")};
}

Outcome two_level(Context &ctx) {
    TwoLevelFrame frame(make_circuit(FluxQubitSpec{}), ctx.settings);
    double delta0 = frame.evaluate(0.5).delta_ghz;
    double worst_gap = 0.0, worst_anti = 0.0, worst_delta = 0.0;
    bool decreasing = true;
    double prev_eps = INFINITY;
    for (int k = -8; k <= 8; ++k) {
        double f = 0.5 + 0.00025 * k;
        auto p = frame.evaluate(f);
        worst_gap = std::max(worst_gap, std::abs(std::hypot(p.epsilon_ghz, p.delta_ghz) / p.e01_ghz - 1.0));
        worst_delta = std::max(worst_delta, std::abs(p.delta_ghz - delta0) / delta0);
        decreasing = decreasing && p.epsilon_ghz < prev_eps;
        prev_eps = p.epsilon_ghz;
        if (k > 0) {
            worst_anti = std::max(worst_anti, std::abs(p.epsilon_ghz + frame.evaluate(0.5 - 0.00025 * k).epsilon_ghz));
        }
    }
    return {worst_gap < 0.01 && worst_anti < 1e-6 && worst_delta < 0.05 && decreasing,
            "max |sqrt(eps^2+Delta^2)/E01-1|=" + num(worst_gap, 3) + ", max |eps(f)+eps(1-f)|=" + num(worst_anti, 3) +
                " GHz, max Delta variation=" + num(worst_delta, 3) + ", eps " +
                (decreasing ? "strictly decreasing" : "NOT monotone")};
}

Outcome switchability(Context &ctx) {
    auto t0 = Clock::now();
    auto s = gated();
    double on = pair_coupling_g(s, s, kGateCapacitance, kOperatingVe, kOperatingVe, ctx.settings).g_ghz;
    double off = pair_coupling_g(s, s, kGateCapacitance, 0.0, 0.0, ctx.settings).g_ghz;
    double elapsed = seconds_since(t0);
    double rel = std::abs(off) / std::abs(on);
    return {rel <= 1e-4 && elapsed < 600.0,
            "|g(0)|=" + num(std::abs(off), 3) + " GHz, |g(" + num(kOperatingVe) + " uV)|=" + num(std::abs(on)) +
                " GHz, ratio " + num(rel, 3)};
}

Outcome coupling_oracle(Context &ctx) {
    auto s = gated();
    double worst = 0.0;
    std::string at;
    // Operating window n_g in [0.1, 0.45]; below it the second-order ZZ the
    // projection drops is comparable to the first-order term.
    for (int k = 0; k <= 7; ++k) {
        double ng = 0.1 + 0.05 * k;
        double ve = units::voltage_for_offset_charge(kGateCapacitance, ng);
        double proj = pair_coupling_g(s, s, kGateCapacitance, ve, ve, ctx.settings).g_ghz;
        double exact =
            exact_pair_coupling(s, s, kGateCapacitance, ve, ve, kOracleStatesPerQubit, ctx.settings).g_ghz;
        double rel = std::abs(proj - exact) / std::abs(exact);
        if (rel > worst) {
            worst = rel;
            at = num(ve, 5);
        }
    }
    return {worst <= 0.1, "max relative difference " + num(worst, 3) + " at Ve=" + at +
                              " uV over n_g in [0.1, 0.45] (M=8 oracle)"};
}

Outcome exponential_decay(Context &ctx) {
    auto chain = chain_couplings(6, kGateCapacitance, kOperatingVe, gated(), ctx.settings, ctx.threads);
    ctx.ratio = chain.ratio;
    ctx.g1 = chain.g_ghz[0];
    double worst_fit = 0.0;
    for (int n = 1; n <= 4; ++n) {
        double fit = chain.g_ghz[0] * std::pow(chain.ratio, n - 1);
        worst_fit = std::max(worst_fit, std::abs(chain.g_ghz[static_cast<std::size_t>(n - 1)] - fit) / std::abs(fit));
    }
    bool increasing = true;
    double prev = -1.0;
    ctx.ratio_by_cc.clear();
    for (double cc : linspace(0.02, 0.15, 14)) {
        double r = chain_couplings(6, cc, kOperatingVe, gated(), ctx.settings, ctx.threads).ratio;
        ctx.ratio_by_cc.emplace_back(cc, r);
        increasing = increasing && r > prev;
        prev = r;
    }
    return {worst_fit < 0.25 && increasing,
            "g(1)=" + num(chain.g_ghz[0]) + " GHz, R=" + num(chain.ratio) + ", max fit deviation n<=4 " +
                num(worst_fit, 3) + ", R(Cc) from " + num(ctx.ratio_by_cc.front().second) + " to " +
                num(ctx.ratio_by_cc.back().second) + (increasing ? " strictly increasing" : " NOT monotone")};
}

Outcome timing_oracle(Context &) {
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        double g = 0.01 + 0.05 * i;
        double t = units::cz_gate_time(g);
        for (int j = 0; j < 10; ++j) {
            double dt = 0.02 * j;
            // <++| U(t)^dagger U(t + dt) |++> with U = diag(1, 1, 1, e^{i 8 pi g t}).
            std::complex<double> amp = 0.75 + 0.25 * std::polar(1.0, 8.0 * kPi * g * (t + dt) - 8.0 * kPi * g * t);
            worst = std::max(worst, std::abs(timing_error(g, dt) - (1.0 - std::norm(amp))));
        }
    }
    double base = dephasing_error(0.2, 0.01, 0.21).eps_d;
    double lin = 0.0;
    for (double k : {0.5, 2.0, 4.0, 10.0}) {
        lin = std::max(lin, std::abs(dephasing_error(0.2, 0.01, 0.21 * k).eps_d - k * base) / (k * base));
    }
    return {worst <= 1e-12 && lin <= 1e-14,
            "max |closed-brute|=" + num(worst, 3) + " on 10x10 grid, eps_d linearity defect " + num(lin, 3)};
}

Outcome local_error_check(Context &ctx) {
    auto grid = linspace(50.0, 2000.0, 40);
    auto curve = local_error_curve(gated(), kGateCapacitance, grid, NoiseParams{0.21, 0.05}, ctx.settings,
                                   ctx.threads);
    if (!curve.argmin) {
        return {false, "no valid point on the curve"};
    }
    const auto &row = curve.rows[*curve.argmin];
    double m = curve.min_eps_loc();
    bool within = m < kLocalErrorThreshold || m <= 3.0 * kLocalErrorThreshold;
    return {curve.interior_minimum && within,
            "min eps_loc=" + num(100.0 * m, 3) + "% at Ve=" + num(row.ve_uv, 4) + " uV (eps_d=" +
                num(100.0 * row.errors.eps_d, 3) + "%, eps_tim=" + num(100.0 * row.errors.eps_tim, 3) +
                "%, dE01/dVe=" + num(row.slope_ghz_per_uv, 3) + " GHz/uV), interior=" +
                (curve.interior_minimum ? "yes" : "no") + "; target 0.1%, tolerance 0.3%"};
}

Outcome correlated(Context &ctx) {
    double worst = 0.0;
    for (double r : {0.01, 0.0274, 0.05, 0.1}) {
        double sum = correlated_error(r, 5, 4000, [](int) { return 1; });
        double closed = 0.25 * kPi * std::pow(r, 4) / (1.0 - r);
        worst = std::max(worst, std::abs(sum - closed) / closed);
    }
    double r_max = 0.0;
    for (const auto &[cc, r] : ctx.ratio_by_cc) {
        if (cc <= kGateCapacitance + 1e-12) {
            r_max = std::max(r_max, r);
        }
    }
    r_max = std::max(r_max, ctx.ratio);
    double bound = chain_echo_bound(r_max);
    return {worst <= 1e-12 && bound <= kCorrelatedErrorThreshold,
            "series vs closed form rel " + num(worst, 3) + "; (pi/4)(R^4+2R^5)=" + num(bound, 3) +
                " at max R=" + num(r_max) + " for Cc<=0.077 fF"};
}

Outcome echo(Context &ctx) {
    const double t = units::cz_gate_time(std::abs(ctx.g1));
    Schedule s;
    s.side = 3;
    s.steps = {ScheduleStep{t, {0, 1, 2}, {{0, 1}}, {{0.5 * t, {0, 1}}}, {0, 1, 2}}};
    s.validate();
    auto model = geometric_model(TopologyKind::kChain, 3, 10.0, std::abs(ctx.g1), ctx.ratio);
    auto angles = residual_zz_angles(model, s);
    auto angle = [&](int a, int b) { return angles.total.count({a, b}) ? angles.total.at({a, b}) : 0.0; };
    auto fid = cluster_fidelity(simulate(model, s, true), GraphStateTarget{3, {{0, 1}}});
    bool ok = fid.frame_corrected >= 1.0 - 1e-9 && angle(1, 2) == 0.0 && angle(0, 2) == 0.0 &&
              std::abs(std::abs(angle(0, 1)) - kPi) < 1e-12;
    return {ok, "overlap with (|+0>+|-1>)/sqrt2 (x) |+> = " + format_number(fid.frame_corrected) +
                    " after the pi-pulse and local-Z frame; angles (1,2)=" + num(angle(0, 1)) +
                    ", (2,3)=" + num(angle(1, 2)) + ", (1,3)=" + num(angle(0, 2))};
}

Outcome procedure(Context &) {
    const double t = 1.0 / (8.0 * 0.2);
    double worst_fid = 1.0, worst_stab = 1.0;
    bool partition = true, counts = true;
    auto check = [&](const Schedule &s) {
        auto model = geometric_model(s.kind, s.side, 10.0, 0.2, 0.05);
        auto target = target_graph(s);
        auto fid = cluster_fidelity(simulate(model, s, false), target);
        worst_fid = std::min(worst_fid, fid.frame_corrected);
        for (double v : fid.stabilizers) {
            worst_stab = std::min(worst_stab, v);
        }
        std::map<SitePair, int> seen;
        for (const auto &step : s.steps) {
            for (const auto &g : step.gates) {
                ++seen[g];
            }
        }
        partition = partition && seen.size() == target.edges.size() &&
                    std::all_of(seen.begin(), seen.end(), [&](const auto &e) {
                        return e.second == 1 && target.edges.contains(e.first);
                    });
    };
    for (int n = 2; n <= 16; ++n) {
        auto s = build_1d_schedule(n, t);
        check(s);
        auto c = gate_counts(s);
        counts = counts && c[2] == (n - 1) / 3 && *std::min_element(c.begin(), c.end()) == (n - 1) / 3;
    }
    check(build_2d_schedule(4, t));
    for (int n = 4; n <= 12; ++n) {
        auto c = gate_counts(build_2d_schedule(n, t));
        counts = counts && c[0] + c[1] + c[2] == (n - 1) * (n / 4);
    }
    return {worst_fid >= 1.0 - 1e-9 && worst_stab >= 1.0 - 1e-9 && partition && counts,
            "min fidelity " + format_number(worst_fid) + ", min stabilizer " + format_number(worst_stab) +
                " (1D N=2..16, 2D 4x4); partition " + (partition ? "exact" : "BROKEN") + "; gate counts " +
                (counts ? "match" : "MISMATCH")};
}

// Histogram of distances of uncancelled non-target partners of the gate site
// nearest the centre, in the first step that gates it.
std::map<int, int> partners(const Schedule &s, const EffectiveIsingModel &model) {
    auto angles = residual_zz_angles(model, s);
    auto target = target_graph(s);
    int centre = s.kind == TopologyKind::kGrid ? (s.side / 2) * s.side + s.side / 2 : s.side / 2;
    for (std::size_t k = 0; k < s.steps.size(); ++k) {
        for (const auto &g : s.steps[k].gates) {
            if (g.first != centre && g.second != centre) {
                continue;
            }
            std::map<int, int> hist;
            for (const auto &[pair, a] : angles.per_step[k]) {
                if ((pair.first == centre || pair.second == centre) && a != 0.0 && !target.edges.contains(pair)) {
                    ++hist[s.distance(pair.first, pair.second)];
                }
            }
            return hist;
        }
    }
    return {};
}

Outcome residual(Context &ctx) {
    const double g1 = std::abs(ctx.g1);
    const double t = units::cz_gate_time(g1);
    auto s = build_1d_schedule(9, t, kOperatingVe);
    auto model = geometric_model(TopologyKind::kChain, 9, 10.0, g1, ctx.ratio);
    auto fid = cluster_fidelity(simulate(model, s, true), target_graph(s));
    double per_qubit = 1.0 - std::pow(fid.frame_corrected, 1.0 / 9.0);
    double bound = chain_echo_bound(ctx.ratio);

    auto angles = residual_zz_angles(model, s, true);
    auto target = target_graph(s);
    std::vector<double> linear(9, 0.0);
    for (const auto &[pair, a] : angles.total) {
        if (!target.edges.contains(pair)) {
            linear[static_cast<std::size_t>(pair.first)] += std::abs(a) / 4.0;
            linear[static_cast<std::size_t>(pair.second)] += std::abs(a) / 4.0;
        }
    }
    double max_linear = *std::max_element(linear.begin(), linear.end());

    auto h1 = partners(build_1d_schedule(24, t), geometric_model(TopologyKind::kChain, 24, 10.0, g1, ctx.ratio));
    auto h2 = partners(build_2d_schedule(20, t), geometric_model(TopologyKind::kGrid, 20, 10.0, g1, ctx.ratio));
    bool structure = !h1.empty() && !h2.empty() && h1.begin()->first == 5 && h1[5] == 1 && h1[6] == 2 &&
                     h2.begin()->first == 5 && h2[5] == 1 && h2[6] == 4;
    return {per_qubit <= 5.0 * bound && structure,
            "N=9 per-qubit infidelity " + num(per_qubit, 3) + " vs bound " + num(bound, 3) +
                " (max per-qubit residual angle " + num(max_linear, 3) + " rad); leading partners 1D: " +
                std::to_string(h1[5]) + " x gR^4, " + std::to_string(h1[6]) + " x gR^5; 2D: " +
                std::to_string(h2[5]) + " x gR^4, " + std::to_string(h2[6]) + " x gR^5"};
}

std::string read_file(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::map<std::string, std::string> outputs_of(const fs::path &dir) {
    std::map<std::string, std::string> out;
    for (const auto &e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) {
            continue;
        }
        std::string content = read_file(e.path());
        if (e.path().filename() == "manifest.json") {
            auto doc = nlohmann::json::parse(content);
            doc.erase("runtime");
            content = doc.dump();
        }
        out[fs::relative(e.path(), dir).generic_string()] = std::move(content);
    }
    return out;
}

Outcome determinism(Context &ctx) {
    if (ctx.cli.empty()) {
        return {false, "no CLI binary given (--cli)"};
    }
    const std::vector<std::string> commands = {
        "spectrum --axis alpha",      "spectrum --axis flux",   "spectrum --axis voltage",
        "coupling --mode pair",       "coupling --mode chain",  "errors --local",
        "errors --correlated",        "cluster --dim 1d --n 6 --simulate --nonlocal",
        "cluster --dim 1d --echo-demo", "cluster --dim 2d --n 4 --simulate",
    };
    int checked = 0, files = 0;
    for (std::size_t k = 0; k < commands.size(); ++k) {
        std::map<std::string, std::string> reference;
        for (const char *variant : {"a1", "b1", "c4"}) {
            fs::path out = ctx.work / ("cmd" + std::to_string(k)) / variant;
            fs::remove_all(out);
            std::string threads = variant[1] == '4' ? "4" : "1";
            std::string line = "\"" + ctx.cli.string() + "\" --config \"" + ctx.config.string() + "\" --out \"" +
                               out.string() + "\" --threads " + threads + " " + commands[k] + " > \"" +
                               (ctx.work / ("cmd" + std::to_string(k) + "_" + variant + ".log")).string() + "\" 2>&1";
            int rc = std::system(line.c_str());
            if (rc != 0) {
                return {false, "'" + commands[k] + "' exited with status " + std::to_string(rc)};
            }
            auto got = outputs_of(out);
            if (reference.empty()) {
                reference = std::move(got);
                files += static_cast<int>(reference.size());
            } else if (got != reference) {
                return {false, "'" + commands[k] + "' output differs between runs (" + variant + ")"};
            }
        }
        ++checked;
    }
    return {true, std::to_string(checked) + " commands x 3 runs (threads 1, 1, 4): " + std::to_string(files) +
                      " files byte-identical (manifest compared without its runtime block)"};
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"fluxq acceptance"};
    Context ctx;
    ctx.threads = default_thread_count();
    std::vector<int> expected_failures;
    std::string report;
    app.add_option("--cli", ctx.cli, "fluxq command-line binary");
    app.add_option("--config", ctx.config, "Configuration for the CLI determinism runs");
    app.add_option("--work", ctx.work, "Scratch directory")->default_val(fs::temp_directory_path() / "fluxq_acc");
    app.add_option("--threads", ctx.threads, "Worker threads");
    app.add_option("--expect-fail", expected_failures, "Criteria with documented deviations");
    app.add_option("--report", report, "Also write the result lines to this file");
    CLI11_PARSE(app, argc, argv);
    fs::create_directories(ctx.work);

    const std::vector<std::pair<std::string, std::function<Outcome(Context &)>>> criteria = {
        {"anharmonicity ratio", anharmonicity},
        {"cutoff convergence", cutoff_convergence},
        {"two-level consistency", two_level},
        {"switchability", switchability},
        {"coupling oracle", coupling_oracle},
        {"exponential decay", exponential_decay},
        {"timing-error oracle", timing_oracle},
        {"local-error curve", local_error_check},
        {"correlated-error formulas", correlated},
        {"echo exactness", echo},
        {"procedure correctness", procedure},
        {"residual-error consistency", residual},
        {"determinism", determinism},
    };

    // Criteria run in order; 1 fixes the cutoff and 6 supplies R and g(1) to 9, 10 and 12.
    std::vector<std::string> lines(criteria.size());
    int passed = 0, unexpected = 0;
    for (std::size_t idx = 0; idx < criteria.size(); ++idx) {
        const auto &[name, run] = criteria[idx];
        const int id = static_cast<int>(idx) + 1;
        Outcome o;
        auto t0 = Clock::now();
        try {
            o = run(ctx);
        } catch (const std::exception &e) {
            o = {false, std::string("error: ") + e.what()};
        }
        bool expected = std::find(expected_failures.begin(), expected_failures.end(), id) != expected_failures.end();
        std::string line = std::string(o.pass ? "PASS" : "FAIL") + " " + std::to_string(id) + " " + name + ": " +
                           o.detail + " [" + num(seconds_since(t0), 3) + " s]" +
                           (!o.pass && expected ? " (documented deviation)" : "");
        std::cout << line << std::endl;
        lines[idx] = line;
        passed += o.pass ? 1 : 0;
        unexpected += (!o.pass && !expected) ? 1 : 0;
    }
    std::cout << passed << "/" << criteria.size() << " criteria passed";
    if (unexpected > 0) {
        std::cout << ", " << unexpected << " unexpected failure(s)";
    }
    std::cout << std::endl;
    if (!report.empty()) {
        std::ofstream out(report);
        for (const auto &l : lines) {
            out << l << '\n';
        }
    }
    return unexpected == 0 ? 0 : 1;
}
