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

#include <complex>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "fluxq/circuit.hpp"
#include "fluxq/eigen_cache.hpp"
#include "fluxq/eigensolver.hpp"
#include "fluxq/errors.hpp"

namespace fluxq {
namespace {

using Triplet = Eigen::Triplet<Complex, std::int64_t>;

// Random Hermitian operator with the 3D charge-lattice sparsity pattern.
SparseHermitianOperator random_stencil(int nc, std::uint64_t seed) {
    ChargeBasis basis(nc);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Triplet> t;
    const std::array<std::array<int, 3>, 4> moves = {{{1, 0, 0}, {-1, 1, 0}, {0, -1, 1}, {0, 0, 1}}};
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        auto q = basis.charges(i);
        auto ii = static_cast<std::int64_t>(i);
        t.emplace_back(ii, ii, Complex(10.0 * u(rng), 0.0));
        for (const auto &m : moves) {
            int a = q[0] + m[0], b = q[1] + m[1], c = q[2] + m[2];
            if (!basis.contains(a) || !basis.contains(b) || !basis.contains(c)) {
                continue;
            }
            auto jj = static_cast<std::int64_t>(basis.index(a, b, c));
            Complex z(u(rng), u(rng));
            t.emplace_back(jj, ii, z);
            t.emplace_back(ii, jj, std::conj(z));
        }
    }
    auto dim = static_cast<std::int64_t>(basis.dimension());
    SparseHermitianOperator::Storage m(dim, dim);
    m.setFromTriplets(t.begin(), t.end());
    return SparseHermitianOperator(std::move(m));
}

void expect_matches_dense(const SparseHermitianOperator &h, int k, double tol) {
    EigenSolverOptions opt;
    opt.force_iterative = true;
    auto it = lowest_eigenpairs(h, k, opt);
    auto dn = dense_lowest_eigenpairs(h.to_dense(), k);
    ASSERT_TRUE(it.iterative);
    ASSERT_EQ(it.count(), k);
    for (int i = 0; i < k; ++i) {
        EXPECT_NEAR(it.energies(i), dn.energies(i), tol * dn.norm_scale) << "level " << i;
        // Eigenvectors agree up to phase, which fix_phases pins.
        double overlap = std::abs(dn.vectors.col(i).dot(it.vectors.col(i)));
        EXPECT_NEAR(overlap, 1.0, 1e-7) << "level " << i;
        EXPECT_LT(it.residuals(i), 1e-8 * it.norm_scale);
    }
}

TEST(Lanczos, MatchesDenseOnRandomStencil) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        expect_matches_dense(random_stencil(2, seed), 6, 1e-10);
    }
}

TEST(Lanczos, MatchesDenseOnLargerStencil) {
    expect_matches_dense(random_stencil(4, 11), 8, 1e-10);
}

TEST(Lanczos, MatchesDenseOnQubitHamiltonian) {
    FluxQubitSpec s;
    s.cg_ff = 0.077;
    s.ve_uv = 1000.0;
    expect_matches_dense(build_hamiltonian(s, ChargeBasis(4)), 4, 1e-11);
}

TEST(Lanczos, IsDeterministic) {
    auto h = random_stencil(3, 5);
    EigenSolverOptions opt;
    opt.force_iterative = true;
    auto a = lowest_eigenpairs(h, 4, opt);
    auto b = lowest_eigenpairs(h, 4, opt);
    EXPECT_EQ(a.energies, b.energies);
    EXPECT_EQ(a.vectors, b.vectors);
}

TEST(Lanczos, RejectsBadLevelCount) {
    auto h = random_stencil(1, 1);
    EXPECT_THROW(lowest_eigenpairs(h, 0), DomainError);
    EXPECT_THROW(lowest_eigenpairs(h, 27), DomainError);
}

TEST(DenseSolver, DegenerateClusterIsOrthonormal) {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(6, 6);
    d.diagonal() << 1.0, 1.0, 1.0, 2.0, 3.0, 3.0;
    Eigen::MatrixXcd q = Eigen::MatrixXcd::Random(6, 6).householderQr().householderQ();
    Eigen::MatrixXcd h = q * d * q.adjoint();
    h = 0.5 * (h + h.adjoint()).eval();
    auto p = dense_lowest_eigenpairs(h, 5);
    EXPECT_NEAR(p.energies(0), 1.0, 1e-12);
    EXPECT_NEAR(p.energies(2), 1.0, 1e-12);
    EXPECT_NEAR(p.energies(4), 3.0, 1e-12);
    Eigen::MatrixXcd gram = p.vectors.adjoint() * p.vectors;
    EXPECT_TRUE(gram.isApprox(Eigen::MatrixXcd::Identity(5, 5), 1e-12));
    EXPECT_LT(p.residuals.maxCoeff(), 1e-12);
}

TEST(FixPhases, LargestComponentBecomesRealPositive) {
    Eigen::MatrixXcd v(3, 2);
    v << Complex(0.1, 0.2), Complex(0, -0.6), Complex(0, -0.9), Complex(0.6, 0), Complex(0.3, 0.1), Complex(0, 0.6);
    Eigen::MatrixXcd w = v;
    fix_phases(w);
    EXPECT_DOUBLE_EQ(w(1, 0).real(), 0.9);
    EXPECT_DOUBLE_EQ(w(1, 0).imag(), 0.0);
    // Tie between rows 0 and 1 resolves to row 0.
    EXPECT_NEAR(w(0, 1).real(), 0.6, 1e-15);
    EXPECT_DOUBLE_EQ(w(0, 1).imag(), 0.0);
    for (int c = 0; c < 2; ++c) {
        EXPECT_NEAR(std::abs(w.col(c).dot(v.col(c))), v.col(c).squaredNorm(), 1e-14);
    }
}

class CacheTest : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = std::filesystem::temp_directory_path() /
               ("fluxq_cache_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::remove_all(dir_);
    }
    void TearDown() override {
        std::filesystem::remove_all(dir_);
    }
    std::filesystem::path dir_;
};

TEST_F(CacheTest, StoreLoadIsBitExact) {
    EigenCache cache(dir_);
    FluxQubitSpec s;
    s.cg_ff = 0.077;
    s.ve_uv = 250.0;
    auto circuit = make_circuit(s);
    auto pairs = dense_lowest_eigenpairs(build_hamiltonian(circuit, ChargeBasis(3)).to_dense(), 4);
    auto key = EigenCache::key_for(circuit, 3, 4);
    EXPECT_FALSE(cache.load(key).has_value());
    cache.store(key, 3, pairs);
    auto back = cache.load(key);
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(back->energies, pairs.energies);
    EXPECT_EQ(back->vectors, pairs.vectors);
    EXPECT_EQ(back->residuals, pairs.residuals);
}

TEST_F(CacheTest, KeyCoversEveryInput) {
    FluxQubitSpec s;
    s.cg_ff = 0.077;
    auto c = make_circuit(s);
    auto base = EigenCache::key_for(c, 8, 4);
    EXPECT_EQ(base, EigenCache::key_for(c, 8, 4));
    EXPECT_NE(base, EigenCache::key_for(c.with_voltage(1e-9), 8, 4));
    EXPECT_NE(base, EigenCache::key_for(c.with_flux(0.5 + 1e-15), 8, 4));
    EXPECT_NE(base, EigenCache::key_for(c, 9, 4));
    EXPECT_NE(base, EigenCache::key_for(c, 8, 5));
}

TEST_F(CacheTest, CorruptEntryIsAMiss) {
    EigenCache cache(dir_);
    auto c = make_circuit(FluxQubitSpec{});
    auto pairs = dense_lowest_eigenpairs(build_hamiltonian(c, ChargeBasis(3)).to_dense(), 2);
    auto key = EigenCache::key_for(c, 3, 2);
    cache.store(key, 3, pairs);
    for (const auto &entry : std::filesystem::directory_iterator(dir_)) {
        auto size = std::filesystem::file_size(entry.path());
        std::filesystem::resize_file(entry.path(), size - 5);
    }
    EXPECT_FALSE(cache.load(key).has_value());
    for (const auto &entry : std::filesystem::directory_iterator(dir_)) {
        std::ofstream(entry.path(), std::ios::binary | std::ios::trunc) << "garbage";
    }
    EXPECT_FALSE(cache.load(key).has_value());
}

}  // namespace
}  // namespace fluxq
