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

#include "fluxq/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <set>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "fluxq/errors.hpp"
#include "fluxq/parallel.hpp"
#include "fluxq/units.hpp"
#include "json.hpp"

namespace fluxq {

CouplerGraph::CouplerGraph(std::vector<FluxQubitSpec> sites, std::vector<Coupler> couplers, TopologyKind kind,
                           int side)
    : sites_(std::move(sites)), couplers_(std::move(couplers)), kind_(kind), side_(side) {
    validate();
    if (kind_ == TopologyKind::kCustom) {
        auto n = static_cast<std::size_t>(size());
        std::vector<std::vector<int>> adj(n);
        for (const auto &c : couplers_) {
            adj[static_cast<std::size_t>(c.i)].push_back(c.j);
            adj[static_cast<std::size_t>(c.j)].push_back(c.i);
        }
        hops_.assign(n, std::vector<int>(n, -1));
        for (std::size_t s = 0; s < n; ++s) {
            std::deque<int> queue{static_cast<int>(s)};
            hops_[s][s] = 0;
            while (!queue.empty()) {
                int u = queue.front();
                queue.pop_front();
                for (int v : adj[static_cast<std::size_t>(u)]) {
                    if (hops_[s][static_cast<std::size_t>(v)] < 0) {
                        hops_[s][static_cast<std::size_t>(v)] = hops_[s][static_cast<std::size_t>(u)] + 1;
                        queue.push_back(v);
                    }
                }
            }
        }
    }
}

CouplerGraph CouplerGraph::chain(int n, const FluxQubitSpec &site, double cc_ff) {
    if (n < 1) {
        throw ModelError("chain needs at least one site");
    }
    std::vector<Coupler> couplers;
    for (int l = 0; l + 1 < n; ++l) {
        couplers.push_back({l, l + 1, cc_ff});
    }
    return CouplerGraph(std::vector<FluxQubitSpec>(static_cast<std::size_t>(n), site), std::move(couplers),
                        TopologyKind::kChain, n);
}

CouplerGraph CouplerGraph::grid(int n, const FluxQubitSpec &site, double cc_ff) {
    if (n < 1) {
        throw ModelError("grid needs at least one site");
    }
    std::vector<Coupler> couplers;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            int s = r * n + c;
            if (c + 1 < n) {
                couplers.push_back({s, s + 1, cc_ff});
            }
            if (r + 1 < n) {
                couplers.push_back({s, s + n, cc_ff});
            }
        }
    }
    return CouplerGraph(std::vector<FluxQubitSpec>(static_cast<std::size_t>(n * n), site), std::move(couplers),
                        TopologyKind::kGrid, n);
}

int CouplerGraph::distance(int a, int b) const {
    switch (kind_) {
        case TopologyKind::kChain:
            return std::abs(a - b);
        case TopologyKind::kGrid:
            return std::abs(a / side_ - b / side_) + std::abs(a % side_ - b % side_);
        case TopologyKind::kCustom:
            break;
    }
    return hops_.at(static_cast<std::size_t>(a)).at(static_cast<std::size_t>(b));
}

void CouplerGraph::set_voltage(int site, double ve_uv) {
    sites_.at(static_cast<std::size_t>(site)).ve_uv = ve_uv;
}

void CouplerGraph::set_voltages(const std::vector<double> &ve_uv) {
    if (ve_uv.size() != sites_.size()) {
        throw ModelError("voltage pattern has " + std::to_string(ve_uv.size()) + " entries for " +
                         std::to_string(sites_.size()) + " sites");
    }
    for (std::size_t s = 0; s < sites_.size(); ++s) {
        sites_[s].ve_uv = ve_uv[s];
    }
}

void CouplerGraph::validate() const {
    const int n = size();
    if (kind_ == TopologyKind::kChain && side_ != n) {
        throw ModelError("chain side does not match its site count");
    }
    if (kind_ == TopologyKind::kGrid && side_ * side_ != n) {
        throw ModelError("grid side does not match its site count");
    }
    std::set<std::pair<int, int>> seen;
    for (std::size_t k = 0; k < couplers_.size(); ++k) {
        const auto &c = couplers_[k];
        std::string where = "couplers[" + std::to_string(k) + "]";
        if (c.i < 0 || c.i >= n || c.j < 0 || c.j >= n) {
            throw ModelError(where + ": qubit index out of range");
        }
        if (c.i == c.j) {
            throw ModelError(where + ": self-coupling of qubit " + std::to_string(c.i));
        }
        if (!(c.cc_ff >= 0.0)) {
            throw ModelError(where + ".cc_ff: coupling capacitance must be non-negative");
        }
        if (!seen.emplace(std::min(c.i, c.j), std::max(c.i, c.j)).second) {
            throw ModelError(where + ": duplicate pair (" + std::to_string(c.i) + ", " + std::to_string(c.j) + ")");
        }
        if (kind_ != TopologyKind::kCustom && distance(c.i, c.j) != 1) {
            throw ModelError(where + ": sites are not lattice neighbours");
        }
    }
}

Eigen::MatrixXd full_capacitance_matrix(const CouplerGraph &graph) {
    const int n = graph.size();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(3 * n, 3 * n);
    for (int s = 0; s < n; ++s) {
        c.block<3, 3>(3 * s, 3 * s) = node_capacitance_matrix(graph.sites()[static_cast<std::size_t>(s)]);
    }
    for (const auto &k : graph.couplers()) {
        int a = 3 * k.i + kNodeIsland;
        int b = 3 * k.j + kNodeIsland;
        c(a, a) += k.cc_ff;
        c(b, b) += k.cc_ff;
        c(a, b) -= k.cc_ff;
        c(b, a) -= k.cc_ff;
    }
    return c;
}

Eigen::MatrixXd full_inverse_capacitance(const CouplerGraph &graph) {
    Eigen::MatrixXd c = full_capacitance_matrix(graph);
    Eigen::LLT<Eigen::MatrixXd> llt(c);
    if (llt.info() != Eigen::Success) {
        throw ModelError("network capacitance matrix is not positive definite");
    }
    Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(c.rows(), c.cols()));
    inv = 0.5 * (inv + inv.transpose());
    return units::kChargingEnergyOneFemtoFaradGHz * inv;
}

QubitCircuit dressed_circuit(const CouplerGraph &graph, const Eigen::MatrixXd &inverse_ghz, int site) {
    const auto &spec = graph.sites().at(static_cast<std::size_t>(site));
    spec.validate();
    QubitCircuit c;
    c.junctions = spec.junctions();
    c.charging_ghz = inverse_ghz.block<3, 3>(3 * site, 3 * site);
    c.cg_ff = spec.cg_ff;
    c.ve_uv = spec.ve_uv;
    c.flux = spec.flux;
    return c;
}

Eigen::Vector3d charge_contrast(const QubitSpectrum &spectrum) {
    ChargeBasis basis(spectrum.cutoff);
    Eigen::Vector3d out;
    Eigen::MatrixXcd ge = spectrum.states.leftCols(2);
    for (int node = 0; node < kNodesPerQubit; ++node) {
        Eigen::MatrixXcd m = charge_matrix(basis, node, spectrum.circuit.offset_charge(), ge);
        out(node) = m(0, 0).real() - m(1, 1).real();
    }
    return out;
}

double ising_coupling(const Eigen::Matrix3d &cross_ghz, const Eigen::Vector3d &contrast_1,
                      const Eigen::Vector3d &contrast_2) {
    return 2.0 * contrast_1.dot(cross_ghz * contrast_2);
}

namespace {

void require_optimal_point(const FluxQubitSpec &spec, const char *who) {
    if (flux_offset_from_optimal(spec.flux) != 0.0) {
        throw DomainError(std::string(who) + ": qubits must sit at the optimal point f = 0.5");
    }
}

CouplerGraph pair_graph(FluxQubitSpec s1, FluxQubitSpec s2, double cc_ff, double ve1, double ve2) {
    require_optimal_point(s1, "pair coupling");
    require_optimal_point(s2, "pair coupling");
    s1.ve_uv = ve1;
    s2.ve_uv = ve2;
    return CouplerGraph({s1, s2}, {{0, 1, cc_ff}});
}

// Charge matrices of the three nodes over the first m states.
std::array<Eigen::MatrixXcd, 3> node_matrices(const QubitCircuit &circuit, const ChargeBasis &basis,
                                              const Eigen::MatrixXcd &states) {
    std::array<Eigen::MatrixXcd, 3> out;
    for (int node = 0; node < kNodesPerQubit; ++node) {
        out[static_cast<std::size_t>(node)] = charge_matrix(basis, node, circuit.offset_charge(), states);
    }
    return out;
}

// Low-energy pair Hamiltonian on the product basis |a b>, index a * m2 + b.
Eigen::MatrixXcd product_hamiltonian(const Eigen::VectorXd &e1, const std::array<Eigen::MatrixXcd, 3> &n1,
                                     const Eigen::VectorXd &e2, const std::array<Eigen::MatrixXcd, 3> &n2,
                                     const Eigen::Matrix3d &cross) {
    const Eigen::Index m1 = e1.size();
    const Eigen::Index m2 = e2.size();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m1 * m2, m1 * m2);
    for (Eigen::Index a = 0; a < m1; ++a) {
        for (Eigen::Index b = 0; b < m2; ++b) {
            h(a * m2 + b, a * m2 + b) = e1(a) + e2(b);
        }
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double x = cross(i, j);
            if (x == 0.0) {
                continue;
            }
            const auto &p = n1[static_cast<std::size_t>(i)];
            const auto &q = n2[static_cast<std::size_t>(j)];
            for (Eigen::Index a = 0; a < m1; ++a) {
                for (Eigen::Index a2 = 0; a2 < m1; ++a2) {
                    h.block(a * m2, a2 * m2, m2, m2) += (8.0 * x * p(a, a2)) * q;
                }
            }
        }
    }
    return 0.5 * (h + h.adjoint());
}

}  // namespace

PairCoupling pair_coupling_g(const FluxQubitSpec &spec1, const FluxQubitSpec &spec2, double cc_ff, double ve1_uv,
                             double ve2_uv, const SolveSettings &settings) {
    CouplerGraph graph = pair_graph(spec1, spec2, cc_ff, ve1_uv, ve2_uv);
    Eigen::MatrixXd inv = full_inverse_capacitance(graph);
    QubitSpectrum q1 = compute_spectrum(dressed_circuit(graph, inv, 0), settings);
    QubitSpectrum q2 = compute_spectrum(dressed_circuit(graph, inv, 1), settings);
    Eigen::Matrix3d cross = inv.block<3, 3>(0, 3);

    PairCoupling out;
    out.g_ghz = ising_coupling(cross, charge_contrast(q1), charge_contrast(q2));
    out.delta1_ghz = q1.e01();
    out.delta2_ghz = q2.e01();

    ChargeBasis basis(settings.cutoff);
    auto n1 = node_matrices(q1.circuit, basis, q1.states.leftCols(2));
    auto n2 = node_matrices(q2.circuit, basis, q2.states.leftCols(2));
    out.projected = product_hamiltonian(q1.energies.head(2), n1, q2.energies.head(2), n2, cross);
    return out;
}

ExactPairCoupling exact_pair_coupling(const FluxQubitSpec &spec1, const FluxQubitSpec &spec2, double cc_ff,
                                      double ve1_uv, double ve2_uv, int states_per_qubit,
                                      const SolveSettings &settings) {
    if (states_per_qubit < 2) {
        throw DomainError("exact_pair_coupling: need at least two states per qubit");
    }
    CouplerGraph graph = pair_graph(spec1, spec2, cc_ff, ve1_uv, ve2_uv);
    Eigen::MatrixXd inv = full_inverse_capacitance(graph);
    ChargeBasis basis(settings.cutoff);
    QubitCircuit c1 = dressed_circuit(graph, inv, 0);
    QubitCircuit c2 = dressed_circuit(graph, inv, 1);
    EigenPairs p1 = solve_circuit(c1, states_per_qubit, settings);
    EigenPairs p2 = solve_circuit(c2, states_per_qubit, settings);
    auto n1 = node_matrices(c1, basis, p1.vectors);
    auto n2 = node_matrices(c2, basis, p2.vectors);
    Eigen::MatrixXcd h = product_hamiltonian(p1.energies, n1, p2.energies, n2, inv.block<3, 3>(0, 3));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::MatrixXcd &v = es.eigenvectors();
    const Eigen::VectorXd &e = es.eigenvalues();
    const Eigen::Index m = states_per_qubit;
    const Eigen::Index gg = 0, ge = 1, eg = m, ee = m + 1;

    auto weight = [&](Eigen::Index col, Eigen::Index row) { return std::norm(v(row, col)); };
    auto best = [&](auto score, const std::set<Eigen::Index> &taken) {
        Eigen::Index arg = -1;
        double top = -1.0;
        for (Eigen::Index c = 0; c < v.cols(); ++c) {
            if (!taken.contains(c) && score(c) > top) {
                top = score(c);
                arg = c;
            }
        }
        return std::pair{arg, top};
    };

    std::set<Eigen::Index> taken;
    auto [c_gg, w_gg] = best([&](Eigen::Index c) { return weight(c, gg); }, taken);
    taken.insert(c_gg);
    auto [c_ee, w_ee] = best([&](Eigen::Index c) { return weight(c, ee); }, taken);
    taken.insert(c_ee);
    // ge and eg may hybridize when the qubits are resonant; only their sum
    // enters g, so pick the two states carrying most weight in span{ge, eg}.
    auto in_span = [&](Eigen::Index c) { return weight(c, ge) + weight(c, eg); };
    auto [c_a, w_a] = best(in_span, taken);
    taken.insert(c_a);
    auto [c_b, w_b] = best(in_span, taken);
    if (weight(c_a, ge) < weight(c_b, ge)) {
        std::swap(c_a, c_b);
    }

    ExactPairCoupling out;
    out.energies << e(c_gg), e(c_a), e(c_b), e(c_ee);
    out.g_ghz = 0.25 * (e(c_gg) + e(c_ee) - e(c_a) - e(c_b));
    out.min_assignment_weight = std::min({w_gg, w_ee, w_a, w_b});
    return out;
}

ChainCouplings chain_couplings(int n, double cc_ff, double ve_uv, const FluxQubitSpec &spec_template,
                               const SolveSettings &settings, int threads) {
    if (n < 3) {
        throw DomainError("chain_couplings: need at least three qubits");
    }
    require_optimal_point(spec_template, "chain_couplings");
    FluxQubitSpec site = spec_template;
    site.ve_uv = ve_uv;
    CouplerGraph graph = CouplerGraph::chain(n, site, cc_ff);
    Eigen::MatrixXd inv = full_inverse_capacitance(graph);

    std::set<int> needed;
    for (int d = 1; d < n; ++d) {
        int l = (n - d) / 2;
        needed.insert(l);
        needed.insert(l + d);
    }
    std::vector<int> sites(needed.begin(), needed.end());
    std::vector<Eigen::Vector3d> contrast(sites.size());
    parallel_for(sites.size(), threads, [&](std::size_t k) {
        contrast[k] = charge_contrast(compute_spectrum(dressed_circuit(graph, inv, sites[k]), settings));
    });
    auto contrast_of = [&](int s) {
        return contrast[static_cast<std::size_t>(std::find(sites.begin(), sites.end(), s) - sites.begin())];
    };

    ChainCouplings out;
    for (int d = 1; d < n; ++d) {
        int l = (n - d) / 2;
        out.g_ghz.push_back(ising_coupling(inv.block<3, 3>(3 * l, 3 * (l + d)), contrast_of(l), contrast_of(l + d)));
    }
    if (std::abs(out.g_ghz[0]) < kCouplingFloor) {
        throw ModelError("chain_couplings: nearest-neighbour coupling " + std::to_string(out.g_ghz[0]) +
                         " GHz is below the numeric floor, so the coupling ratio is undefined");
    }
    out.ratio = out.g_ghz[1] / out.g_ghz[0];
    return out;
}

double EffectiveIsingModel::coupling(int i, int j) const {
    auto it = g_ghz.find({std::min(i, j), std::max(i, j)});
    return it == g_ghz.end() ? 0.0 : it->second;
}

EffectiveIsingModel effective_model(const CouplerGraph &graph_in, const std::vector<double> &voltage_uv,
                                    const SolveSettings &settings, int threads) {
    CouplerGraph graph = graph_in;
    graph.set_voltages(voltage_uv);
    for (const auto &s : graph.sites()) {
        require_optimal_point(s, "effective_model");
    }
    Eigen::MatrixXd inv = full_inverse_capacitance(graph);
    const auto n = static_cast<std::size_t>(graph.size());
    std::vector<Eigen::Vector3d> contrast(n);

    EffectiveIsingModel model;
    model.delta_ghz.resize(n);
    model.voltage_uv = voltage_uv;
    model.kind = graph.kind();
    model.side = graph.side();
    parallel_for(n, threads, [&](std::size_t s) {
        auto spec = compute_spectrum(dressed_circuit(graph, inv, static_cast<int>(s)), settings);
        model.delta_ghz[s] = spec.e01();
        contrast[s] = charge_contrast(spec);
    });
    for (int i = 0; i < graph.size(); ++i) {
        for (int j = i + 1; j < graph.size(); ++j) {
            double g = ising_coupling(inv.block<3, 3>(3 * i, 3 * j), contrast[static_cast<std::size_t>(i)],
                                      contrast[static_cast<std::size_t>(j)]);
            if (std::abs(g) >= kCouplingFloor) {
                model.g_ghz[{i, j}] = g;
                model.distance[{i, j}] = graph.distance(i, j);
            }
        }
    }
    return model;
}

EffectiveIsingModel geometric_model(TopologyKind kind, int side, double delta_ghz, double g1_ghz, double ratio) {
    if (kind == TopologyKind::kCustom || side < 1) {
        throw DomainError("geometric_model: needs a chain or grid");
    }
    if (!(ratio >= 0.0 && ratio < 1.0)) {
        throw DomainError("geometric_model: coupling ratio must lie in [0, 1)");
    }
    int n = kind == TopologyKind::kChain ? side : side * side;
    EffectiveIsingModel model;
    model.kind = kind;
    model.side = side;
    model.delta_ghz.assign(static_cast<std::size_t>(n), delta_ghz);
    model.voltage_uv.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            int d = kind == TopologyKind::kChain ? j - i
                                                 : std::abs(i / side - j / side) + std::abs(i % side - j % side);
            double g = g1_ghz * std::pow(ratio, d - 1);
            if (std::abs(g) >= kCouplingFloor) {
                model.g_ghz[{i, j}] = g;
                model.distance[{i, j}] = d;
            }
        }
    }
    return model;
}

std::string model_to_json(const EffectiveIsingModel &model) {
    nlohmann::ordered_json doc;
    doc["sites"] = model.delta_ghz;
    auto pairs = nlohmann::ordered_json::array();
    for (const auto &[key, g] : model.g_ghz) {
        nlohmann::ordered_json p;
        p["i"] = key.first;
        p["j"] = key.second;
        auto d = model.distance.find(key);
        p["distance"] = d == model.distance.end() ? -1 : d->second;
        p["g_GHz"] = g;
        pairs.push_back(std::move(p));
    }
    doc["pairs"] = std::move(pairs);
    return doc.dump(2) + "\n";
}

EffectiveIsingModel model_from_json(const std::string &text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError(std::string("model document: ") + e.what());
    }
    EffectiveIsingModel model;
    try {
        model.delta_ghz = doc.at("sites").get<std::vector<double>>();
        model.voltage_uv.assign(model.delta_ghz.size(), 0.0);
        const int n = model.size();
        for (const auto &p : doc.at("pairs")) {
            int i = p.at("i").get<int>();
            int j = p.at("j").get<int>();
            if (i < 0 || j < 0 || i >= n || j >= n || i == j) {
                throw ConfigError("model document: invalid pair (" + std::to_string(i) + ", " + std::to_string(j) +
                                  ")");
            }
            std::pair key{std::min(i, j), std::max(i, j)};
            model.g_ghz[key] = p.at("g_GHz").get<double>();
            model.distance[key] = p.value("distance", -1);
        }
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("model document: ") + e.what());
    }
    return model;
}

}  // namespace fluxq
