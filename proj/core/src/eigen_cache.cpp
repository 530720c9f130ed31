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

#include "fluxq/eigen_cache.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <thread>
#include <vector>

#include "json.hpp"

namespace fluxq {

namespace {

constexpr std::string_view kMagic = "FQEIG001";

void put_u64(std::string &out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
    }
}

std::uint64_t get_u64(std::string_view in, std::size_t offset) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[offset + static_cast<std::size_t>(i)]))
             << (8 * i);
    }
    return v;
}

void put_f64(std::string &out, double v) {
    put_u64(out, std::bit_cast<std::uint64_t>(v));
}

double get_f64(std::string_view in, std::size_t offset) {
    return std::bit_cast<double>(get_u64(in, offset));
}

void append_hex_double(std::ostringstream &out, double v) {
    out << hex64(std::bit_cast<std::uint64_t>(v)) << ';';
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    std::array<char, 17> buf{};
    std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(value));
    return std::string(buf.data(), 16);
}

EigenCache::EigenCache(std::filesystem::path directory) : directory_(std::move(directory)) {
    std::filesystem::create_directories(directory_);
}

std::string EigenCache::key_for(const QubitCircuit &circuit, int cutoff, int levels) {
    std::ostringstream canon;
    canon << "fluxq-eig-v1;" << cutoff << ';' << levels << ';';
    for (const auto &j : circuit.junctions) {
        append_hex_double(canon, j.ej_ghz);
        append_hex_double(canon, j.cj_ff);
    }
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            append_hex_double(canon, circuit.charging_ghz(r, c));
        }
    }
    append_hex_double(canon, circuit.cg_ff);
    append_hex_double(canon, circuit.ve_uv);
    append_hex_double(canon, circuit.flux);
    std::string s = canon.str();
    // Two independent 64-bit digests make accidental collisions negligible.
    return hex64(fnv1a64(s)) + hex64(fnv1a64(s, 0x84222325cbf29ce4ULL));
}

std::filesystem::path EigenCache::path_for(const std::string &key) const {
    return directory_ / (key + ".fqeig");
}

std::optional<EigenPairs> EigenCache::load(const std::string &key) const {
    std::ifstream in(path_for(key), std::ios::binary);
    if (!in) {
        return std::nullopt;
    }
    std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (blob.size() < 16 || std::string_view(blob).substr(0, 8) != kMagic) {
        return std::nullopt;
    }
    std::uint64_t header_len = get_u64(blob, 8);
    if (blob.size() < 16 + header_len) {
        return std::nullopt;
    }
    auto header = nlohmann::json::parse(blob.substr(16, header_len), nullptr, false);
    if (header.is_discarded() || header.value("key", std::string{}) != key) {
        return std::nullopt;
    }
    auto dim = header.at("dimension").get<std::int64_t>();
    auto levels = header.at("levels").get<std::int64_t>();
    std::size_t need = 16 + header_len + 8 * static_cast<std::size_t>(2 * levels + 2 * levels * dim);
    if (blob.size() != need) {
        return std::nullopt;
    }
    EigenPairs out;
    out.norm_scale = header.at("norm_scale").get<double>();
    out.iterative = header.value("iterative", false);
    out.restarts = header.value("restarts", 0);
    out.energies.resize(levels);
    out.residuals.resize(levels);
    out.vectors.resize(dim, levels);
    std::size_t at = 16 + header_len;
    for (Eigen::Index i = 0; i < levels; ++i, at += 8) {
        out.energies(i) = get_f64(blob, at);
    }
    for (Eigen::Index i = 0; i < levels; ++i, at += 8) {
        out.residuals(i) = get_f64(blob, at);
    }
    for (Eigen::Index c = 0; c < levels; ++c) {
        for (Eigen::Index r = 0; r < dim; ++r, at += 16) {
            out.vectors(r, c) = Complex(get_f64(blob, at), get_f64(blob, at + 8));
        }
    }
    return out;
}

void EigenCache::store(const std::string &key, int cutoff, const EigenPairs &pairs) const {
    nlohmann::ordered_json header;
    header["key"] = key;
    header["dimension"] = pairs.vectors.rows();
    header["levels"] = pairs.count();
    header["cutoff"] = cutoff;
    header["norm_scale"] = pairs.norm_scale;
    header["iterative"] = pairs.iterative;
    header["restarts"] = pairs.restarts;
    std::string header_text = header.dump();

    std::string blob(kMagic);
    put_u64(blob, header_text.size());
    blob += header_text;
    for (Eigen::Index i = 0; i < pairs.energies.size(); ++i) {
        put_f64(blob, pairs.energies(i));
    }
    for (Eigen::Index i = 0; i < pairs.residuals.size(); ++i) {
        put_f64(blob, pairs.residuals(i));
    }
    for (Eigen::Index c = 0; c < pairs.vectors.cols(); ++c) {
        for (Eigen::Index r = 0; r < pairs.vectors.rows(); ++r) {
            put_f64(blob, pairs.vectors(r, c).real());
            put_f64(blob, pairs.vectors(r, c).imag());
        }
    }

    std::ostringstream tmp_name;
    tmp_name << key << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id());
    auto tmp = directory_ / tmp_name.str();
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
        if (!out) {
            std::filesystem::remove(tmp);
            return;
        }
    }
    std::filesystem::rename(tmp, path_for(key));
}

}  // namespace fluxq
