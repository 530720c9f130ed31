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

#include "fluxq/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "fluxq/eigen_cache.hpp"
#include "fluxq/errors.hpp"
#include "json.hpp"

namespace fluxq {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// A JSON node together with its path in the document, for diagnostics.
class Field {
   public:
    Field(const json &value, std::string path) : value_(value), path_(std::move(path)) {
    }

    const json &value() const {
        return value_;
    }
    const std::string &path() const {
        return path_;
    }

    [[noreturn]] void fail(const std::string &message) const {
        throw ConfigError(path_ + ": " + message);
    }

    void require_object(std::initializer_list<std::string_view> keys) const {
        if (!value_.is_object()) {
            fail("expected an object");
        }
        for (const auto &[key, _] : value_.items()) {
            bool known = false;
            for (auto k : keys) {
                known = known || key == k;
            }
            if (!known) {
                throw ConfigError(child_path(key) + ": unknown key");
            }
        }
    }

    bool has(const std::string &key) const {
        return value_.is_object() && value_.contains(key);
    }

    Field at(const std::string &key) const {
        return {value_.at(key), child_path(key)};
    }

    Field at(std::size_t index) const {
        return {value_.at(index), path_ + "[" + std::to_string(index) + "]"};
    }

    double number() const {
        if (!value_.is_number()) {
            fail("expected a number");
        }
        double v = value_.get<double>();
        if (!std::isfinite(v)) {
            fail("must be finite");
        }
        return v;
    }

    int integer() const {
        if (!value_.is_number_integer()) {
            fail("expected an integer");
        }
        auto v = value_.get<long long>();
        if (v < -1'000'000'000LL || v > 1'000'000'000LL) {
            fail("integer out of range");
        }
        return static_cast<int>(v);
    }

    std::string string() const {
        if (!value_.is_string()) {
            fail("expected a string");
        }
        return value_.get<std::string>();
    }

    void read(const std::string &key, double &out) const {
        if (has(key)) {
            out = at(key).number();
        }
    }

    void read(const std::string &key, int &out) const {
        if (has(key)) {
            out = at(key).integer();
        }
    }

    void read(const std::string &key, std::optional<double> &out) const {
        if (has(key)) {
            out = at(key).number();
        }
    }

   private:
    std::string child_path(const std::string &key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    const json &value_;
    std::string path_;
};

void read_qubit(const Field &node, FluxQubitSpec &spec) {
    node.require_object({"ej1_ghz", "alpha", "ej_ec_ratio", "cg_ff", "flux", "ve_uv", "island_load_ff"});
    node.read("ej1_ghz", spec.ej1_ghz);
    node.read("alpha", spec.alpha);
    node.read("ej_ec_ratio", spec.ej_ec_ratio);
    node.read("cg_ff", spec.cg_ff);
    node.read("flux", spec.flux);
    node.read("ve_uv", spec.ve_uv);
    node.read("island_load_ff", spec.island_load_ff);
    try {
        spec.validate();
    } catch (const DomainError &e) {
        node.fail(e.what());
    }
}

std::vector<double> read_grid(const Field &node) {
    const json &v = node.value();
    if (v.is_array()) {
        std::vector<double> out;
        for (std::size_t k = 0; k < v.size(); ++k) {
            out.push_back(node.at(k).number());
        }
        return out;
    }
    if (v.is_object()) {
        node.require_object({"start", "stop", "count"});
        for (const char *key : {"start", "stop", "count"}) {
            if (!node.has(key)) {
                node.fail(std::string("missing \"") + key + "\"");
            }
        }
        int count = node.at("count").integer();
        if (count < 0) {
            node.at("count").fail("must be non-negative");
        }
        return linspace(node.at("start").number(), node.at("stop").number(), count);
    }
    node.fail("expected an array of numbers or {start, stop, count}");
}

ordered_json grid_json(const std::vector<double> &grid) {
    auto out = ordered_json::array();
    for (double v : grid) {
        out.push_back(v);
    }
    return out;
}

ordered_json qubit_json(const FluxQubitSpec &s) {
    ordered_json q;
    q["ej1_ghz"] = s.ej1_ghz;
    q["alpha"] = s.alpha;
    q["ej_ec_ratio"] = s.ej_ec_ratio;
    q["cg_ff"] = s.cg_ff;
    q["flux"] = s.flux;
    q["ve_uv"] = s.ve_uv;
    q["island_load_ff"] = s.island_load_ff;
    return q;
}

void set_default_sweeps(SweepConfig &s) {
    s.alpha = linspace(0.1, 1.0, 19);
    s.flux = linspace(0.49, 0.51, 21);
    s.voltage_uv = linspace(0.0, 2000.0, 21);
    s.ve_uv = linspace(50.0, 2000.0, 40);
    s.cc_ff = linspace(0.02, 0.15, 14);
}

}  // namespace

std::vector<double> linspace(double start, double stop, int count) {
    if (count < 0) {
        throw DomainError("linspace: negative count");
    }
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        out[static_cast<std::size_t>(k)] =
            count == 1 ? start : start + (stop - start) * static_cast<double>(k) / static_cast<double>(count - 1);
    }
    if (count > 1) {
        out.back() = stop;
    }
    return out;
}

CouplerGraph DeviceConfig::graph() const {
    return CouplerGraph(qubits, couplers, kind, side);
}

DeviceConfig default_device_config() {
    DeviceConfig c;
    c.qubit.cg_ff = kDefaultGateCapacitanceFf;
    c.qubits = {c.qubit};
    set_default_sweeps(c.sweeps);
    return c;
}

DeviceConfig parse_device_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        std::size_t line = 1, column = 1;
        for (std::size_t k = 0; k < end; ++k) {
            if (text[k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ConfigError("config: syntax error at line " + std::to_string(line) + ", column " +
                          std::to_string(column) + ": " + e.what());
    }

    DeviceConfig c = default_device_config();
    c.qubits.clear();
    Field root(doc, "config");
    root.require_object({"qubit", "qubits", "topology", "couplers", "noise", "solver", "sweeps", "cluster"});

    if (root.has("qubit")) {
        read_qubit(root.at("qubit"), c.qubit);
    }

    std::optional<double> topology_cc;
    if (root.has("topology")) {
        Field t = root.at("topology");
        t.require_object({"kind", "n", "cc_ff"});
        if (!t.has("kind") || !t.has("n")) {
            t.fail("needs \"kind\" and \"n\"");
        }
        std::string kind = t.at("kind").string();
        if (kind == "chain") {
            c.kind = TopologyKind::kChain;
        } else if (kind == "grid") {
            c.kind = TopologyKind::kGrid;
        } else {
            t.at("kind").fail("expected \"chain\" or \"grid\", got \"" + kind + "\"");
        }
        c.side = t.at("n").integer();
        if (c.side < 1 || (c.kind == TopologyKind::kGrid && c.side > 1000) || c.side > 1'000'000) {
            t.at("n").fail("out of range");
        }
        if (t.has("cc_ff")) {
            topology_cc = t.at("cc_ff").number();
            if (*topology_cc < 0.0) {
                t.at("cc_ff").fail("must be non-negative");
            }
        }
    }

    if (root.has("qubits")) {
        Field list = root.at("qubits");
        if (!list.value().is_array()) {
            list.fail("expected an array");
        }
        for (std::size_t k = 0; k < list.value().size(); ++k) {
            FluxQubitSpec spec = c.qubit;
            read_qubit(list.at(k), spec);
            c.qubits.push_back(spec);
        }
        if (c.qubits.empty()) {
            list.fail("needs at least one qubit");
        }
    }
    if (c.kind != TopologyKind::kCustom) {
        int expected = c.kind == TopologyKind::kGrid ? c.side * c.side : c.side;
        if (c.qubits.empty()) {
            c.qubits.assign(static_cast<std::size_t>(expected), c.qubit);
        } else if (static_cast<int>(c.qubits.size()) != expected) {
            throw ConfigError("config.qubits: topology needs " + std::to_string(expected) + " qubits, got " +
                              std::to_string(c.qubits.size()));
        }
    } else if (c.qubits.empty()) {
        c.qubits = {c.qubit};
    }

    if (root.has("couplers")) {
        Field list = root.at("couplers");
        if (!list.value().is_array()) {
            list.fail("expected an array");
        }
        for (std::size_t k = 0; k < list.value().size(); ++k) {
            Field e = list.at(k);
            e.require_object({"i", "j", "cc_ff"});
            if (!e.has("i") || !e.has("j") || !e.has("cc_ff")) {
                e.fail("needs \"i\", \"j\" and \"cc_ff\"");
            }
            c.couplers.push_back({e.at("i").integer(), e.at("j").integer(), e.at("cc_ff").number()});
        }
    } else if (c.kind != TopologyKind::kCustom) {
        if (!topology_cc) {
            throw ConfigError("config.topology.cc_ff: required when no couplers are listed");
        }
        auto g = c.kind == TopologyKind::kChain ? CouplerGraph::chain(c.side, c.qubit, *topology_cc)
                                                : CouplerGraph::grid(c.side, c.qubit, *topology_cc);
        c.couplers = g.couplers();
    }
    try {
        c.graph();
    } catch (const ModelError &e) {
        throw ConfigError(std::string("config.") + e.what());
    }

    if (root.has("noise")) {
        Field n = root.at("noise");
        n.require_object({"dv_uv", "dt_ns"});
        n.read("dv_uv", c.noise.dv_uv);
        n.read("dt_ns", c.noise.dt_ns);
        try {
            c.noise.validate();
        } catch (const DomainError &e) {
            throw ConfigError(std::string("config.") + e.what());
        }
    }

    if (root.has("solver")) {
        Field s = root.at("solver");
        s.require_object({"cutoff", "cutoff_tolerance_ghz"});
        s.read("cutoff", c.solver.cutoff);
        if (c.solver.cutoff < kMinHamiltonianCutoff || c.solver.cutoff > kMaxCutoff) {
            s.at("cutoff").fail("must lie in [" + std::to_string(kMinHamiltonianCutoff) + ", " +
                                std::to_string(kMaxCutoff) + "]");
        }
        s.read("cutoff_tolerance_ghz", c.solver.cutoff_tolerance_ghz);
        if (c.solver.cutoff_tolerance_ghz && !(*c.solver.cutoff_tolerance_ghz > 0.0)) {
            s.at("cutoff_tolerance_ghz").fail("must be positive");
        }
    }

    if (root.has("sweeps")) {
        Field s = root.at("sweeps");
        s.require_object({"alpha", "flux", "voltage_uv", "ve_uv", "cc_ff", "p", "chain_sites", "correlated_sites",
                          "chain_ve_uv"});
        auto grid = [&](const char *key, std::vector<double> &out) {
            if (s.has(key)) {
                out = read_grid(s.at(key));
            }
        };
        grid("alpha", c.sweeps.alpha);
        grid("flux", c.sweeps.flux);
        grid("voltage_uv", c.sweeps.voltage_uv);
        grid("ve_uv", c.sweeps.ve_uv);
        grid("cc_ff", c.sweeps.cc_ff);
        if (s.has("p")) {
            Field p = s.at("p");
            if (!p.value().is_array()) {
                p.fail("expected an array of integers");
            }
            c.sweeps.p.clear();
            for (std::size_t k = 0; k < p.value().size(); ++k) {
                int v = p.at(k).integer();
                if (v < 2) {
                    p.at(k).fail("pair spacing must be at least 2");
                }
                c.sweeps.p.push_back(v);
            }
        }
        s.read("chain_sites", c.sweeps.chain_sites);
        if (c.sweeps.chain_sites < 3 || c.sweeps.chain_sites > 64) {
            s.at("chain_sites").fail("must lie in [3, 64]");
        }
        s.read("correlated_sites", c.sweeps.correlated_sites);
        if (c.sweeps.correlated_sites < 2) {
            s.at("correlated_sites").fail("must be at least 2");
        }
        s.read("chain_ve_uv", c.sweeps.chain_ve_uv);
    }

    if (root.has("cluster")) {
        Field s = root.at("cluster");
        s.require_object({"cc_ff", "ve_uv", "ratio", "g1_ghz", "delta_ghz"});
        s.read("cc_ff", c.cluster.cc_ff);
        s.read("ve_uv", c.cluster.ve_uv);
        s.read("ratio", c.cluster.ratio);
        s.read("g1_ghz", c.cluster.g1_ghz);
        s.read("delta_ghz", c.cluster.delta_ghz);
        if (c.cluster.cc_ff <= 0.0) {
            s.at("cc_ff").fail("must be positive");
        }
        if (c.cluster.ratio && !(*c.cluster.ratio >= 0.0 && *c.cluster.ratio < 1.0)) {
            s.at("ratio").fail("must lie in [0, 1)");
        }
        if (c.cluster.g1_ghz && !(*c.cluster.g1_ghz > 0.0)) {
            s.at("g1_ghz").fail("must be positive");
        }
    }
    return c;
}

DeviceConfig load_device_config(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read config file " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_device_config(text.str());
    } catch (const ConfigError &e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string config_to_json(const DeviceConfig &c) {
    ordered_json doc;
    doc["qubit"] = qubit_json(c.qubit);
    auto qubits = ordered_json::array();
    for (const auto &q : c.qubits) {
        qubits.push_back(qubit_json(q));
    }
    doc["qubits"] = std::move(qubits);
    if (c.kind != TopologyKind::kCustom) {
        doc["topology"] = {{"kind", c.kind == TopologyKind::kChain ? "chain" : "grid"}, {"n", c.side}};
    }
    auto couplers = ordered_json::array();
    for (const auto &e : c.couplers) {
        ordered_json j;
        j["i"] = e.i;
        j["j"] = e.j;
        j["cc_ff"] = e.cc_ff;
        couplers.push_back(std::move(j));
    }
    doc["couplers"] = std::move(couplers);
    doc["noise"] = {{"dv_uv", c.noise.dv_uv}, {"dt_ns", c.noise.dt_ns}};
    ordered_json solver;
    solver["cutoff"] = c.solver.cutoff;
    if (c.solver.cutoff_tolerance_ghz) {
        solver["cutoff_tolerance_ghz"] = *c.solver.cutoff_tolerance_ghz;
    }
    doc["solver"] = std::move(solver);
    ordered_json sweeps;
    sweeps["alpha"] = grid_json(c.sweeps.alpha);
    sweeps["flux"] = grid_json(c.sweeps.flux);
    sweeps["voltage_uv"] = grid_json(c.sweeps.voltage_uv);
    sweeps["ve_uv"] = grid_json(c.sweeps.ve_uv);
    sweeps["cc_ff"] = grid_json(c.sweeps.cc_ff);
    sweeps["p"] = c.sweeps.p;
    sweeps["chain_sites"] = c.sweeps.chain_sites;
    sweeps["correlated_sites"] = c.sweeps.correlated_sites;
    sweeps["chain_ve_uv"] = c.sweeps.chain_ve_uv;
    doc["sweeps"] = std::move(sweeps);
    ordered_json cluster;
    cluster["cc_ff"] = c.cluster.cc_ff;
    cluster["ve_uv"] = c.cluster.ve_uv;
    if (c.cluster.ratio) {
        cluster["ratio"] = *c.cluster.ratio;
    }
    if (c.cluster.g1_ghz) {
        cluster["g1_ghz"] = *c.cluster.g1_ghz;
    }
    if (c.cluster.delta_ghz) {
        cluster["delta_ghz"] = *c.cluster.delta_ghz;
    }
    doc["cluster"] = std::move(cluster);
    return doc.dump(2) + "\n";
}

std::string config_hash(const DeviceConfig &config) {
    return hex64(fnv1a64(config_to_json(config)));
}

}  // namespace fluxq
