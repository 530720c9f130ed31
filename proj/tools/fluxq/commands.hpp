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

#ifndef FLUXQ_TOOLS_COMMANDS_HPP
#define FLUXQ_TOOLS_COMMANDS_HPP

#include <optional>
#include <string>
#include <vector>

#include "run.hpp"

namespace fluxq::cli {

struct SpectrumOptions {
    std::string axis;
};

struct CouplingOptions {
    std::string mode;
    std::optional<double> cc_ff;
    int oracle_states = kOracleStatesPerQubit;  // 0 disables the exact column
};

struct ErrorsOptions {
    bool local = false;
    bool correlated = false;
    std::optional<double> cc_ff;
    std::vector<int> p;
};

struct ClusterOptions {
    std::string dim;
    int n = 0;
    bool simulate = false;
    bool nonlocal = false;
    bool echo_demo = false;
    std::string report;  // empty: out_dir/cluster_report.json
};

int run_spectrum(const Common &common, const SpectrumOptions &options);
int run_coupling(const Common &common, const CouplingOptions &options);
int run_errors(const Common &common, const ErrorsOptions &options);
int run_cluster(const Common &common, const ClusterOptions &options);

}  // namespace fluxq::cli

#endif  // FLUXQ_TOOLS_COMMANDS_HPP
