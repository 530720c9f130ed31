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

#include "run.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include "fluxq/eigen_cache.hpp"
#include "fluxq/format.hpp"

namespace fluxq::cli {

Json json_number(double value) {
    if (!std::isfinite(value)) {
        return nullptr;
    }
    return std::strtod(format_number(value).c_str(), nullptr);
}

Json json_numbers(const std::vector<double> &values) {
    Json out = Json::array();
    for (double v : values) {
        out.push_back(json_number(v));
    }
    return out;
}

Run::Run(std::string command, const Common &common)
    : command_(std::move(command)), common_(common), start_(std::chrono::steady_clock::now()) {
    std::error_code ec;
    std::filesystem::create_directories(common_.out_dir, ec);
    if (ec) {
        throw UsageError("cannot create output directory " + common_.out_dir.string() + ": " + ec.message());
    }
}

void Run::set_grid(const std::string &name, const std::vector<double> &values) {
    grid_[name] = json_numbers(values);
}

void Run::point(const std::string &label, const std::string &status) {
    if (status != "ok") {
        partial_ = true;
    }
    points_.push_back({{"point", label}, {"status", status}});
}

void Run::write(const std::string &name, const std::string &content) {
    auto path = common_.out_dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) {
        throw UsageError("cannot write " + path.string());
    }
    outputs_.push_back({{"file", name}, {"fnv1a64", hex64(fnv1a64(content))}});
}

void Run::write_json(const std::string &name, const Json &doc) {
    write(name, doc.dump(2) + "\n");
}

int Run::finish() {
    Json manifest;
    manifest["command"] = command_;
    manifest["parameters"] = parameters_;
    std::string inputs = config_to_json(common_.config) + parameters_.dump();
    manifest["config_hash"] = hex64(fnv1a64(inputs));
    manifest["grid"] = grid_;
    manifest["outputs"] = outputs_;
    manifest["points"] = points_;
    manifest["status"] = partial_ ? "partial" : "ok";
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    manifest["runtime"] = {{"wall_clock_s", json_number(seconds)}, {"threads", common_.threads}};
    auto path = common_.out_dir / "manifest.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << manifest.dump(2) << '\n';
    if (!out) {
        throw UsageError("cannot write " + path.string());
    }
    return partial_ ? kExitPartial : kExitOk;
}

}  // namespace fluxq::cli
