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

#ifndef FLUXQ_TOOLS_RUN_HPP
#define FLUXQ_TOOLS_RUN_HPP

#include <chrono>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "fluxq/config.hpp"
#include "fluxq/solve.hpp"
#include "json.hpp"

namespace fluxq::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPartial = 2;

/// Bad flags or flag combinations; reported with exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Number rounded to the output precision; null when not finite.
Json json_number(double value);
Json json_numbers(const std::vector<double> &values);

/// Settings shared by every subcommand.
struct Common {
    DeviceConfig config;
    std::filesystem::path out_dir;
    int threads = 1;
    SolveSettings settings;
};

/// Collects the outputs and per-point status of one invocation and writes
/// manifest.json. Everything except the "runtime" object is deterministic.
class Run {
   public:
    Run(std::string command, const Common &common);

    Json &parameters() {
        return parameters_;
    }
    void set_grid(const std::string &name, const std::vector<double> &values);
    void point(const std::string &label, const std::string &status);
    /// Writes `content` to out_dir/name and records it.
    void write(const std::string &name, const std::string &content);
    void write_json(const std::string &name, const Json &doc);

    /// Writes the manifest; exit code 0, or 2 if any point failed.
    int finish();

   private:
    std::string command_;
    const Common &common_;
    Json parameters_ = Json::object();
    Json grid_ = Json::object();
    Json outputs_ = Json::array();
    Json points_ = Json::array();
    bool partial_ = false;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace fluxq::cli

#endif  // FLUXQ_TOOLS_RUN_HPP
