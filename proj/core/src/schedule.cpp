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

#include "fluxq/schedule.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "fluxq/errors.hpp"
#include "fluxq/units.hpp"
#include "json.hpp"

namespace fluxq {

namespace {

SitePair ordered(int a, int b) {
    return {std::min(a, b), std::max(a, b)};
}

std::string pair_text(const SitePair &p) {
    return "(" + std::to_string(p.first) + ", " + std::to_string(p.second) + ")";
}

// Which pattern pairs of a line receive the mid-step pulse.
enum class PulseParity { kOdd, kEven };

// Appends one line's share of the three-step pattern to steps[0..2].
// `line` lists the sites in order along the line.
void add_line(std::vector<ScheduleStep> &steps, std::size_t first_step, const std::vector<int> &line,
              PulseParity parity, double t_cp_ns, std::set<int> &truncated) {
    const int len = static_cast<int>(line.size());
    for (int k = 0; k < 3; ++k) {
        ScheduleStep &step = steps[first_step + static_cast<std::size_t>(k)];
        std::vector<int> pulsed;
        for (int n = 1;; ++n) {
            int a = 3 * n - 2 + k;  // one-based positions along the line
            int b = a + 1;
            if (a > len) {
                break;
            }
            if (b > len) {
                truncated.insert(line[static_cast<std::size_t>(a - 1)]);
                break;
            }
            int sa = line[static_cast<std::size_t>(a - 1)];
            int sb = line[static_cast<std::size_t>(b - 1)];
            step.gates.push_back(ordered(sa, sb));
            step.powered.push_back(sa);
            step.powered.push_back(sb);
            bool odd = n % 2 == 1;
            if (odd == (parity == PulseParity::kOdd)) {
                pulsed.push_back(sa);
                pulsed.push_back(sb);
            }
        }
        if (!pulsed.empty()) {
            if (step.pulses.empty()) {
                step.pulses.push_back({0.5 * t_cp_ns, {}});
            }
            auto &sites = step.pulses.front().sites;
            sites.insert(sites.end(), pulsed.begin(), pulsed.end());
        }
    }
}

// Sorts site lists and assigns first-touch initialization.
void finish(Schedule &s) {
    std::vector<bool> ready(static_cast<std::size_t>(s.sites()), false);
    for (auto &step : s.steps) {
        std::sort(step.powered.begin(), step.powered.end());
        std::sort(step.gates.begin(), step.gates.end());
        for (auto &ev : step.pulses) {
            std::sort(ev.sites.begin(), ev.sites.end());
        }
        for (int q : step.powered) {
            if (!ready[static_cast<std::size_t>(q)]) {
                ready[static_cast<std::size_t>(q)] = true;
                step.init.push_back(q);
            }
        }
    }
    if (!s.steps.empty()) {
        auto &first = s.steps.front().init;
        for (int q = 0; q < s.sites(); ++q) {
            if (!ready[static_cast<std::size_t>(q)]) {
                first.push_back(q);
            }
        }
        std::sort(first.begin(), first.end());
    }
}

void check_timing(double t_cp_ns) {
    if (!(t_cp_ns > 0.0) || !std::isfinite(t_cp_ns)) {
        throw DomainError("gate time must be positive and finite");
    }
}

}  // namespace

int Schedule::distance(int a, int b) const {
    if (kind == TopologyKind::kGrid) {
        return std::abs(a / side - b / side) + std::abs(a % side - b % side);
    }
    return std::abs(a - b);
}

void Schedule::validate() const {
    const int n = sites();
    auto check_site = [n](int q, const std::string &where) {
        if (q < 0 || q >= n) {
            throw ScheduleError(where + ": site " + std::to_string(q) + " out of range");
        }
    };
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const auto &step = steps[k];
        std::string where = "steps[" + std::to_string(k) + "]";
        if (!(step.duration_ns >= 0.0)) {
            throw ScheduleError(where + ": negative duration");
        }
        std::set<int> powered(step.powered.begin(), step.powered.end());
        for (int q : step.powered) {
            check_site(q, where + ".powered");
        }
        for (int q : step.init) {
            check_site(q, where + ".init");
        }
        for (const auto &ev : step.pulses) {
            if (ev.at_ns < 0.0 || ev.at_ns > step.duration_ns) {
                throw ScheduleError(where + ": pulse offset outside [0, duration]");
            }
            for (int q : ev.sites) {
                check_site(q, where + ".pulses");
            }
        }
        for (const auto &g : step.gates) {
            check_site(g.first, where + ".gates");
            check_site(g.second, where + ".gates");
            if (g.first == g.second) {
                throw ScheduleError(where + ": gate on a single site");
            }
            if (!powered.contains(g.first) || !powered.contains(g.second)) {
                throw ScheduleError(where + ": gate " + pair_text(g) + " on an unpowered site");
            }
        }
        for (std::size_t a = 0; a < step.gates.size(); ++a) {
            for (std::size_t b = a + 1; b < step.gates.size(); ++b) {
                const auto &x = step.gates[a];
                const auto &y = step.gates[b];
                int d = std::min({distance(x.first, y.first), distance(x.first, y.second),
                                  distance(x.second, y.first), distance(x.second, y.second)});
                if (d < spacing) {
                    throw ScheduleError(where + ": gates " + pair_text(x) + " and " + pair_text(y) +
                                        " are closer than the pair spacing " + std::to_string(spacing));
                }
            }
        }
    }
}

std::vector<std::vector<int>> GraphStateTarget::neighbours() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(vertices));
    for (const auto &[a, b] : edges) {
        out[static_cast<std::size_t>(a)].push_back(b);
        out[static_cast<std::size_t>(b)].push_back(a);
    }
    return out;
}

GraphStateTarget target_graph(const Schedule &schedule) {
    GraphStateTarget t;
    t.vertices = schedule.sites();
    for (const auto &step : schedule.steps) {
        for (const auto &g : step.gates) {
            if (!t.edges.insert(ordered(g.first, g.second)).second) {
                throw ScheduleError("gate " + pair_text(g) + " is applied in more than one step");
            }
        }
    }
    return t;
}

Schedule build_1d_schedule(int n, double t_cp_ns, double ve_uv, int spacing) {
    if (n < 2) {
        throw DomainError("build_1d_schedule: need at least two qubits");
    }
    if (spacing < 2) {
        throw DomainError("build_1d_schedule: pair spacing must be at least 2");
    }
    check_timing(t_cp_ns);
    Schedule s;
    s.kind = TopologyKind::kChain;
    s.side = n;
    s.ve_uv = ve_uv;
    s.spacing = spacing;
    s.steps.assign(3, ScheduleStep{t_cp_ns, {}, {}, {}, {}});
    std::vector<int> line(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
        line[static_cast<std::size_t>(q)] = q;
    }
    std::set<int> truncated;
    add_line(s.steps, 0, line, PulseParity::kEven, t_cp_ns, truncated);
    s.truncated.assign(truncated.begin(), truncated.end());
    finish(s);
    s.validate();
    return s;
}

Schedule build_2d_schedule(int n, double t_cp_ns, double ve_uv, int spacing) {
    if (n < 4) {
        throw DomainError("build_2d_schedule: need a lattice side of at least 4");
    }
    if (spacing < 2) {
        throw DomainError("build_2d_schedule: pair spacing must be at least 2");
    }
    check_timing(t_cp_ns);
    Schedule s;
    s.kind = TopologyKind::kGrid;
    s.side = n;
    s.ve_uv = ve_uv;
    s.spacing = spacing;
    s.steps.assign(12, ScheduleStep{t_cp_ns, {}, {}, {}, {}});

    auto row = [n](int r) {  // one-based row
        std::vector<int> line;
        for (int c = 0; c < n; ++c) {
            line.push_back((r - 1) * n + c);
        }
        return line;
    };
    auto column = [n](int c) {
        std::vector<int> line;
        for (int r = 0; r < n; ++r) {
            line.push_back(r * n + (c - 1));
        }
        return line;
    };
    // Neighbouring processed lines (four apart) use opposite pulse parity.
    auto parity = [](int index) { return index % 2 == 1 ? PulseParity::kOdd : PulseParity::kEven; };

    std::set<int> truncated;
    for (int m = 1; m <= n / 4; ++m) {
        add_line(s.steps, 0, row(4 * m - 3), parity(m), t_cp_ns, truncated);
    }
    for (int p = 1; p <= (n + 1) / 4; ++p) {
        add_line(s.steps, 3, row(4 * p - 1), parity(p), t_cp_ns, truncated);
    }
    for (int m = 1; m <= n / 4; ++m) {
        add_line(s.steps, 6, column(4 * m - 3), parity(m), t_cp_ns, truncated);
    }
    for (int p = 1; p <= (n + 1) / 4; ++p) {
        add_line(s.steps, 9, column(4 * p - 1), parity(p), t_cp_ns, truncated);
    }
    s.truncated.assign(truncated.begin(), truncated.end());
    finish(s);
    s.validate();
    return s;
}

std::vector<int> gate_counts(const Schedule &schedule) {
    std::vector<int> out;
    for (const auto &step : schedule.steps) {
        out.push_back(static_cast<int>(step.gates.size()));
    }
    return out;
}

std::string schedule_to_json(const Schedule &schedule) {
    nlohmann::ordered_json doc;
    doc["topology"] = schedule.kind == TopologyKind::kGrid ? "grid" : "chain";
    doc["n"] = schedule.side;
    doc["ve_uV"] = schedule.ve_uv;
    doc["spacing"] = schedule.spacing;
    auto steps = nlohmann::ordered_json::array();
    for (const auto &step : schedule.steps) {
        nlohmann::ordered_json js;
        js["duration_ns"] = step.duration_ns;
        js["powered"] = step.powered;
        auto gates = nlohmann::ordered_json::array();
        for (const auto &g : step.gates) {
            gates.push_back({g.first, g.second});
        }
        js["gates"] = std::move(gates);
        auto pulses = nlohmann::ordered_json::array();
        for (const auto &ev : step.pulses) {
            nlohmann::ordered_json jp;
            jp["at_ns"] = ev.at_ns;
            jp["sites"] = ev.sites;
            pulses.push_back(std::move(jp));
        }
        js["pulses"] = std::move(pulses);
        js["init"] = step.init;
        steps.push_back(std::move(js));
    }
    doc["steps"] = std::move(steps);
    doc["truncated"] = schedule.truncated;
    return doc.dump(2) + "\n";
}

namespace {

void check_model(const EffectiveIsingModel &model, const Schedule &schedule) {
    if (model.size() != schedule.sites()) {
        throw ScheduleError("model has " + std::to_string(model.size()) + " sites but the schedule has " +
                            std::to_string(schedule.sites()));
    }
    schedule.validate();
}

// Model couplings acting during a step.
std::vector<std::pair<SitePair, double>> active_pairs(const EffectiveIsingModel &model, const Schedule &schedule,
                                                      const ScheduleStep &step, bool include_nonlocal) {
    std::set<int> powered(step.powered.begin(), step.powered.end());
    std::vector<std::pair<SitePair, double>> out;
    for (const auto &[pair, g] : model.g_ghz) {
        if (!powered.contains(pair.first) || !powered.contains(pair.second)) {
            continue;
        }
        if (!include_nonlocal && schedule.distance(pair.first, pair.second) != 1) {
            continue;
        }
        out.emplace_back(pair, g);
    }
    return out;
}

std::uint64_t site_mask(const std::vector<int> &sites) {
    std::uint64_t m = 0;
    for (int q : sites) {
        m |= std::uint64_t{1} << q;
    }
    return m;
}

void apply_x(Eigen::VectorXcd &psi, std::uint64_t mask) {
    if (mask == 0) {
        return;
    }
    Eigen::VectorXcd out(psi.size());
    for (Eigen::Index b = 0; b < psi.size(); ++b) {
        out(b) = psi(static_cast<Eigen::Index>(static_cast<std::uint64_t>(b) ^ mask));
    }
    psi.swap(out);
}

inline double spin(std::uint64_t b, int q) {
    return ((b >> q) & 1u) ? -1.0 : 1.0;
}

}  // namespace

Eigen::VectorXcd simulate(const EffectiveIsingModel &model, const Schedule &schedule, bool include_nonlocal) {
    check_model(model, schedule);
    const int n = schedule.sites();
    if (n > kMaxSimulatedQubits) {
        throw ScheduleError("statevector simulation is capped at " + std::to_string(kMaxSimulatedQubits) +
                            " qubits, got " + std::to_string(n));
    }
    const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi(0) = 1.0;
    std::vector<bool> ready(static_cast<std::size_t>(n), false);

    for (std::size_t k = 0; k < schedule.steps.size(); ++k) {
        const auto &step = schedule.steps[k];
        for (int q : step.init) {
            if (ready[static_cast<std::size_t>(q)]) {
                throw ScheduleError("site " + std::to_string(q) + " is initialized twice");
            }
            const auto bit = std::uint64_t{1} << q;
            // |0> -> |+> on qubit q.
            for (Eigen::Index b = 0; b < dim; ++b) {
                if ((static_cast<std::uint64_t>(b) & bit) && std::abs(psi(b)) > 1e-12) {
                    throw ScheduleError("site " + std::to_string(q) + " is not in |0> at initialization");
                }
            }
            for (Eigen::Index b = 0; b < dim; ++b) {
                if (!(static_cast<std::uint64_t>(b) & bit)) {
                    Complex a = psi(b) / std::numbers::sqrt2;
                    psi(b) = a;
                    psi(static_cast<Eigen::Index>(static_cast<std::uint64_t>(b) | bit)) = a;
                }
            }
            ready[static_cast<std::size_t>(q)] = true;
        }
        for (int q : step.powered) {
            if (!ready[static_cast<std::size_t>(q)]) {
                throw ScheduleError("steps[" + std::to_string(k) + "]: site " + std::to_string(q) +
                                    " is powered before initialization");
            }
        }

        // Energy of every basis state during this step.
        auto pairs = active_pairs(model, schedule, step, include_nonlocal);
        Eigen::VectorXd energy(dim);
        for (Eigen::Index b = 0; b < dim; ++b) {
            auto ub = static_cast<std::uint64_t>(b);
            double e = 0.0;
            for (int q = 0; q < n; ++q) {
                e += 0.5 * model.delta_ghz[static_cast<std::size_t>(q)] * spin(ub, q);
            }
            for (const auto &[pair, g] : pairs) {
                e += g * spin(ub, pair.first) * spin(ub, pair.second);
            }
            energy(b) = e;
        }
        auto evolve = [&](double dt) {
            if (dt <= 0.0) {
                return;
            }
            for (Eigen::Index b = 0; b < dim; ++b) {
                psi(b) *= std::polar(1.0, -units::phase(energy(b), dt));
            }
        };

        auto events = step.pulses;
        std::stable_sort(events.begin(), events.end(),
                         [](const PulseEvent &a, const PulseEvent &b) { return a.at_ns < b.at_ns; });
        double t = 0.0;
        for (const auto &ev : events) {
            for (int q : ev.sites) {
                if (!ready[static_cast<std::size_t>(q)]) {
                    throw ScheduleError("pi pulse on uninitialized site " + std::to_string(q));
                }
            }
            evolve(ev.at_ns - t);
            t = ev.at_ns;
            apply_x(psi, site_mask(ev.sites));
        }
        evolve(step.duration_ns - t);
    }
    return psi;
}

ResidualAngles residual_zz_angles(const EffectiveIsingModel &model, const Schedule &schedule,
                                  bool include_nonlocal) {
    check_model(model, schedule);
    const int n = schedule.sites();
    ResidualAngles out;
    out.linear.assign(static_cast<std::size_t>(n), 0.0);
    out.flipped.assign(static_cast<std::size_t>(n), false);
    std::vector<double> sign(static_cast<std::size_t>(n), 1.0);
    std::vector<bool> ready(static_cast<std::size_t>(n), false);

    for (std::size_t k = 0; k < schedule.steps.size(); ++k) {
        const auto &step = schedule.steps[k];
        const double half = 0.5 * step.duration_ns;
        std::set<int> pulsed;
        for (const auto &ev : step.pulses) {
            if (std::abs(ev.at_ns - half) > 1e-12 * std::max(1.0, step.duration_ns)) {
                throw ScheduleError("steps[" + std::to_string(k) +
                                    "]: residual angles need every pulse at the step midpoint");
            }
            for (int q : ev.sites) {
                // Two pulses on one site at the same instant cancel.
                if (!pulsed.insert(q).second) {
                    pulsed.erase(q);
                }
            }
        }
        for (int q : step.init) {
            ready[static_cast<std::size_t>(q)] = true;
        }
        for (int q : pulsed) {
            if (!ready[static_cast<std::size_t>(q)]) {
                throw ScheduleError("pi pulse on uninitialized site " + std::to_string(q));
            }
        }
        auto after = sign;
        for (int q : pulsed) {
            after[static_cast<std::size_t>(q)] = -after[static_cast<std::size_t>(q)];
        }

        std::map<SitePair, double> this_step;
        for (const auto &[pair, g] : active_pairs(model, schedule, step, include_nonlocal)) {
            auto i = static_cast<std::size_t>(pair.first);
            auto j = static_cast<std::size_t>(pair.second);
            // (s_i s_j before + s_i s_j after) is exactly 0 or +-2.
            double s = sign[i] * sign[j] + after[i] * after[j];
            double angle = 4.0 * units::phase(g, half) * s;
            this_step[pair] = angle;
            out.total[pair] += angle;
        }
        for (int q = 0; q < n; ++q) {
            auto qi = static_cast<std::size_t>(q);
            if (ready[qi]) {
                out.linear[qi] += units::phase(0.5 * model.delta_ghz[qi], half) * (sign[qi] + after[qi]);
            }
        }
        out.per_step.push_back(std::move(this_step));
        sign = std::move(after);
    }
    for (int q = 0; q < n; ++q) {
        out.flipped[static_cast<std::size_t>(q)] = sign[static_cast<std::size_t>(q)] < 0.0;
    }
    return out;
}

Eigen::VectorXcd state_from_angles(const ResidualAngles &angles, int sites) {
    if (sites > kMaxSimulatedQubits) {
        throw ScheduleError("state reconstruction is capped at " + std::to_string(kMaxSimulatedQubits) + " qubits");
    }
    const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << sites);
    const double amp = std::pow(2.0, -0.5 * sites);
    Eigen::VectorXcd psi(dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        auto ub = static_cast<std::uint64_t>(b);
        double phase = 0.0;
        for (int q = 0; q < sites; ++q) {
            phase += angles.linear[static_cast<std::size_t>(q)] * spin(ub, q);
        }
        for (const auto &[pair, a] : angles.total) {
            phase += 0.25 * a * spin(ub, pair.first) * spin(ub, pair.second);
        }
        psi(b) = std::polar(amp, -phase);
    }
    std::vector<int> flipped;
    for (int q = 0; q < sites; ++q) {
        if (angles.flipped[static_cast<std::size_t>(q)]) {
            flipped.push_back(q);
        }
    }
    apply_x(psi, site_mask(flipped));
    return psi;
}

Eigen::VectorXcd graph_state(const GraphStateTarget &target) {
    if (target.vertices > kMaxSimulatedQubits) {
        throw ScheduleError("graph state is capped at " + std::to_string(kMaxSimulatedQubits) + " qubits");
    }
    const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << target.vertices);
    const double amp = std::pow(2.0, -0.5 * target.vertices);
    Eigen::VectorXcd g(dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        auto ub = static_cast<std::uint64_t>(b);
        int parity = 0;
        for (const auto &[i, j] : target.edges) {
            parity ^= static_cast<int>((ub >> i) & (ub >> j) & 1u);
        }
        g(b) = parity ? -amp : amp;
    }
    return g;
}

std::vector<double> stabilizer_expectations(const Eigen::VectorXcd &state, const GraphStateTarget &target) {
    const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << target.vertices);
    if (state.size() != dim) {
        throw ScheduleError("state dimension does not match the target's vertex count");
    }
    auto nbrs = target.neighbours();
    std::vector<double> out;
    for (int v = 0; v < target.vertices; ++v) {
        std::uint64_t zmask = site_mask(nbrs[static_cast<std::size_t>(v)]);
        std::uint64_t xbit = std::uint64_t{1} << v;
        Complex acc = 0.0;
        for (Eigen::Index b = 0; b < dim; ++b) {
            auto ub = static_cast<std::uint64_t>(b);
            double s = (std::popcount(ub & zmask) & 1) ? -1.0 : 1.0;
            acc += std::conj(state(b)) * s * state(static_cast<Eigen::Index>(ub ^ xbit));
        }
        out.push_back(acc.real());
    }
    return out;
}

ClusterFidelity cluster_fidelity(const Eigen::VectorXcd &state, const GraphStateTarget &target) {
    const int n = target.vertices;
    const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n);
    if (state.size() != dim) {
        throw ScheduleError("state dimension does not match the target's vertex count");
    }
    Eigen::VectorXcd g = graph_state(target);
    ClusterFidelity out;
    out.raw = std::norm(g.dot(state));

    // Start from the phases that align the single-excitation amplitudes.
    std::vector<double> phi(static_cast<std::size_t>(n), 0.0);
    if (std::abs(state(0)) > 1e-8) {
        for (int q = 0; q < n; ++q) {
            auto e = static_cast<Eigen::Index>(std::uint64_t{1} << q);
            if (std::abs(state(e)) > 1e-8) {
                phi[static_cast<std::size_t>(q)] = std::arg(g(e) / g(0)) - std::arg(state(e) / state(0));
            }
        }
    }
    Eigen::VectorXcd w(dim);  // conj(G_b) psi_b e^{i phi.b}
    for (Eigen::Index b = 0; b < dim; ++b) {
        double ph = 0.0;
        for (int q = 0; q < n; ++q) {
            if ((static_cast<std::uint64_t>(b) >> q) & 1u) {
                ph += phi[static_cast<std::size_t>(q)];
            }
        }
        w(b) = std::conj(g(b)) * state(b) * std::polar(1.0, ph);
    }
    // Coordinate ascent: for one site the optimum is arg(A0) - arg(A1).
    double best = std::norm(w.sum());
    for (int sweep = 0; sweep < 200; ++sweep) {
        for (int q = 0; q < n; ++q) {
            const auto bit = std::uint64_t{1} << q;
            Complex a0 = 0.0, a1 = 0.0;
            for (Eigen::Index b = 0; b < dim; ++b) {
                ((static_cast<std::uint64_t>(b) & bit) ? a1 : a0) += w(b);
            }
            if (std::abs(a0) == 0.0 || std::abs(a1) == 0.0) {
                continue;
            }
            double delta = std::arg(a0) - std::arg(a1);
            Complex rot = std::polar(1.0, delta);
            for (Eigen::Index b = 0; b < dim; ++b) {
                if (static_cast<std::uint64_t>(b) & bit) {
                    w(b) *= rot;
                }
            }
            phi[static_cast<std::size_t>(q)] += delta;
        }
        double now = std::norm(w.sum());
        bool done = now - best <= 1e-15;
        best = std::max(best, now);
        if (done) {
            break;
        }
    }
    out.frame_corrected = best;
    for (auto &p : phi) {
        p = std::remainder(p, 2.0 * std::numbers::pi);
    }
    out.z_phases = phi;

    Eigen::VectorXcd corrected(dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        double ph = 0.0;
        for (int q = 0; q < n; ++q) {
            if ((static_cast<std::uint64_t>(b) >> q) & 1u) {
                ph += phi[static_cast<std::size_t>(q)];
            }
        }
        corrected(b) = state(b) * std::polar(1.0, ph);
    }
    // Remove the global phase so the stabilizers see the aligned state.
    Complex overlap = g.dot(corrected);
    if (std::abs(overlap) > 0.0) {
        corrected *= std::conj(overlap) / std::abs(overlap);
    }
    out.stabilizers = stabilizer_expectations(corrected, target);
    return out;
}

}  // namespace fluxq
