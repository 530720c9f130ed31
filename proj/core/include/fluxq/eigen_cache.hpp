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

#ifndef FLUXQ_EIGEN_CACHE_HPP
#define FLUXQ_EIGEN_CACHE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "fluxq/circuit.hpp"
#include "fluxq/eigensolver.hpp"

namespace fluxq {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

/// Content-addressed on-disk store of eigensolves.
///
/// File `<dir>/<key>.fqeig`:
///   bytes 0..7    magic "FQEIG001"
///   bytes 8..15   header length L, uint64 little-endian
///   next L bytes  UTF-8 JSON header {"key", "dimension", "levels", "cutoff", "norm_scale"}
///   then float64 little-endian: energies[levels], residuals[levels],
///   vectors[levels][dimension][2] (column by column, real then imaginary).
///
/// A cache only saves time: every value is stored bit-exactly, so a hit is
/// indistinguishable from a fresh solve.
class EigenCache {
   public:
    explicit EigenCache(std::filesystem::path directory);

    const std::filesystem::path &directory() const {
        return directory_;
    }

    /// Key covering every numeric input of the solve.
    static std::string key_for(const QubitCircuit &circuit, int cutoff, int levels);

    std::optional<EigenPairs> load(const std::string &key) const;
    /// Writes through a temporary file and renames, so concurrent readers
    /// never observe a partial entry.
    void store(const std::string &key, int cutoff, const EigenPairs &pairs) const;

   private:
    std::filesystem::path path_for(const std::string &key) const;
    std::filesystem::path directory_;
};

}  // namespace fluxq

#endif  // FLUXQ_EIGEN_CACHE_HPP
