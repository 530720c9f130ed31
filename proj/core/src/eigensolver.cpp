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

#include "fluxq/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "fluxq/errors.hpp"

namespace fluxq {

void fix_phases(Eigen::MatrixXcd &vectors) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        Eigen::Index best = 0;
        double best_mag = -1.0;
        for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
            double mag = std::abs(vectors(r, c));
            // Ties resolve to the lowest index so the choice is reproducible.
            if (mag > best_mag * (1.0 + 1e-12)) {
                best_mag = mag;
                best = r;
            }
        }
        if (best_mag > 0.0) {
            Complex rot = std::conj(vectors(best, c)) / best_mag;
            vectors.col(c) *= rot;
            vectors(best, c) = Complex(std::abs(vectors(best, c)), 0.0);
        }
    }
}

namespace {

void orthonormalize_clusters(const Eigen::VectorXd &energies, Eigen::MatrixXcd &vectors) {
    Eigen::Index start = 0;
    const Eigen::Index n = energies.size();
    while (start < n) {
        Eigen::Index end = start + 1;
        while (end < n && energies(end) - energies(end - 1) < kDegeneracyGap) {
            ++end;
        }
        if (end - start > 1) {
            Eigen::HouseholderQR<Eigen::MatrixXcd> qr(vectors.middleCols(start, end - start));
            Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(vectors.rows(), end - start);
            vectors.middleCols(start, end - start) = q;
        }
        start = end;
    }
}

Eigen::VectorXcd start_vector(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double re = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
        double im = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
        v(i) = Complex(re, im);
    }
    v.normalize();
    return v;
}

void finalize(EigenPairs &out) {
    orthonormalize_clusters(out.energies, out.vectors);
    fix_phases(out.vectors);
}

}  // namespace

EigenPairs dense_lowest_eigenpairs(const Eigen::MatrixXcd &h, int k) {
    if (k < 1 || k > h.rows()) {
        throw DomainError("dense_lowest_eigenpairs: k must lie in [1, dim]");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success) {
        throw SolverError("dense eigensolver failed", std::numeric_limits<double>::infinity());
    }
    EigenPairs out;
    out.energies = es.eigenvalues().head(k);
    out.vectors = es.eigenvectors().leftCols(k);
    out.norm_scale = h.cwiseAbs().rowwise().sum().maxCoeff();
    finalize(out);
    out.residuals.resize(k);
    for (int i = 0; i < k; ++i) {
        out.residuals(i) = (h * out.vectors.col(i) - out.energies(i) * out.vectors.col(i)).norm();
    }
    return out;
}

EigenPairs lowest_eigenpairs(const SparseHermitianOperator &h, int k, const EigenSolverOptions &options) {
    const auto n = static_cast<Eigen::Index>(h.dimension());
    if (k < 1 || k >= n) {
        throw DomainError("lowest_eigenpairs: k must lie in [1, dim), got k=" + std::to_string(k) +
                          " for dim=" + std::to_string(n));
    }
    if (!options.force_iterative && h.dimension() <= options.dense_threshold) {
        return dense_lowest_eigenpairs(h.to_dense(), k);
    }

    const double scale = std::max(h.norm_bound(), 1e-300);
    Eigen::Index m = options.krylov_dim > 0 ? options.krylov_dim : std::max<Eigen::Index>(2 * k + 24, 48);
    m = std::min(m, n);
    if (m <= k + 1) {
        return dense_lowest_eigenpairs(h.to_dense(), k);
    }
    const Eigen::Index keep = std::min<Eigen::Index>(m - 1, k + (m - k) / 2);

    Eigen::MatrixXcd basis(n, m);
    Eigen::MatrixXcd projected = Eigen::MatrixXcd::Zero(m, m);
    Eigen::VectorXcd w(n);
    Eigen::VectorXcd residual(n);
    double beta_last = 0.0;

    basis.col(0) = start_vector(n, options.seed);
    std::uint64_t reseed = options.seed;
    Eigen::Index j = 0;
    double worst_estimate = std::numeric_limits<double>::infinity();

    for (int restart = 0; restart <= options.max_restarts; ++restart) {
        for (; j < m; ++j) {
            h.apply(basis.col(j), w);
            auto active = basis.leftCols(j + 1);
            Eigen::VectorXcd coeff = active.adjoint() * w;
            w.noalias() -= active * coeff;
            Eigen::VectorXcd again = active.adjoint() * w;
            w.noalias() -= active * again;
            coeff += again;
            projected.col(j).head(j + 1) = coeff;
            projected.row(j).head(j + 1) = coeff.adjoint();
            projected(j, j) = Complex(coeff(j).real(), 0.0);
            double beta = w.norm();
            if (j + 1 < m) {
                if (beta < 1e-14 * scale) {
                    // Invariant subspace: continue from a fresh orthogonal direction.
                    Eigen::VectorXcd fresh = start_vector(n, ++reseed);
                    for (int pass = 0; pass < 2; ++pass) {
                        fresh -= active * (active.adjoint() * fresh);
                    }
                    basis.col(j + 1) = fresh.normalized();
                } else {
                    basis.col(j + 1) = w / beta;
                }
            } else {
                residual = w;
                beta_last = beta;
            }
        }

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(projected);
        const Eigen::VectorXd &theta = es.eigenvalues();
        const Eigen::MatrixXcd &s = es.eigenvectors();

        worst_estimate = 0.0;
        for (int i = 0; i < k; ++i) {
            worst_estimate = std::max(worst_estimate, beta_last * std::abs(s(m - 1, i)));
        }
        if (worst_estimate <= options.tolerance * scale) {
            EigenPairs out;
            out.iterative = true;
            out.restarts = restart;
            out.norm_scale = scale;
            out.energies = theta.head(k);
            out.vectors = basis * s.leftCols(k);
            for (int i = 0; i < k; ++i) {
                out.vectors.col(i).normalize();
            }
            finalize(out);
            out.residuals.resize(k);
            Eigen::VectorXcd hv(n);
            for (int i = 0; i < k; ++i) {
                h.apply(out.vectors.col(i), hv);
                out.residuals(i) = (hv - out.energies(i) * out.vectors.col(i)).norm();
            }
            double worst = out.residuals.maxCoeff();
            if (worst > options.acceptance * scale) {
                throw SolverError("Lanczos converged estimates but true residual " + std::to_string(worst) +
                                      " exceeds acceptance",
                                  worst);
            }
            return out;
        }

        // Thick restart: keep the lowest Ritz vectors, continue from the residual.
        Eigen::MatrixXcd kept = basis * s.leftCols(keep);
        basis.leftCols(keep) = kept;
        projected.setZero();
        for (Eigen::Index i = 0; i < keep; ++i) {
            projected(i, i) = theta(i);
        }
        if (beta_last < 1e-14 * scale) {
            Eigen::VectorXcd fresh = start_vector(n, ++reseed);
            auto active = basis.leftCols(keep);
            for (int pass = 0; pass < 2; ++pass) {
                fresh -= active * (active.adjoint() * fresh);
            }
            basis.col(keep) = fresh.normalized();
        } else {
            basis.col(keep) = residual / beta_last;
        }
        j = keep;
    }
    throw SolverError("Lanczos did not converge within " + std::to_string(options.max_restarts) +
                          " restarts; residual estimate " + std::to_string(worst_estimate),
                      worst_estimate);
}

}  // namespace fluxq
