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

#ifndef FLUXQ_CIRCUIT_HPP
#define FLUXQ_CIRCUIT_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace fluxq {

using Complex = std::complex<double>;

// Circuit nodes of one four-junction loop, ordered around the loop from
// ground: JJ1 | a | JJ2 | b (island) | JJ3 | c | JJ4 | ground.
enum Node : int { kNodeA = 0, kNodeIsland = 1, kNodeC = 2 };
inline constexpr int kNodesPerQubit = 3;

struct Junction {
    double ej_ghz;
    double cj_ff;
};

/// JJ1..JJ4 in loop order.
using JunctionSet = std::array<Junction, 4>;

/// JJ1 = JJ4 = (Ej1, C1) with Ej1 / Ec(C1) = ratio; JJ2 = JJ3 = (alpha Ej1, alpha C1).
JunctionSet junction_set_from_spec(double ej1_ghz, double alpha, double ej_ec_ratio);

/// Physical parameters of one four-junction flux qubit.
struct FluxQubitSpec {
    double ej1_ghz = 200.0;
    double alpha = 0.2;
    double ej_ec_ratio = 80.0;
    double cg_ff = 0.0;
    double flux = 0.5;  // fraction of the flux quantum, taken modulo 1
    double ve_uv = 0.0;
    double island_load_ff = 0.0;

    /// Throws DomainError naming the offending field.
    void validate() const;
    JunctionSet junctions() const {
        return junction_set_from_spec(ej1_ghz, alpha, ej_ec_ratio);
    }
    /// n_g = Cg Ve / 2e on the island.
    double offset_charge() const;

    bool operator==(const FluxQubitSpec &) const = default;
};

/// 3x3 node capacitance matrix (fF). Throws ModelError when it is not
/// positive definite.
Eigen::Matrix3d node_capacitance_matrix(const FluxQubitSpec &spec);

/// Everything needed to write down the single-loop Hamiltonian. The charging
/// matrix is (e^2/2h) C^-1 in GHz; for a qubit embedded in a network it is the
/// qubit's diagonal block of the full network inverse.
struct QubitCircuit {
    JunctionSet junctions{};
    Eigen::Matrix3d charging_ghz = Eigen::Matrix3d::Zero();
    double cg_ff = 0.0;
    double ve_uv = 0.0;
    double flux = 0.5;

    double offset_charge() const;
    QubitCircuit with_flux(double f) const;
    QubitCircuit with_voltage(double ve) const;
};

/// Standalone circuit for a spec: charging matrix from the inverse of
/// node_capacitance_matrix.
QubitCircuit make_circuit(const FluxQubitSpec &spec);

/// Product charge basis |n_a, n_b, n_c> with every n in [-cutoff, cutoff].
class ChargeBasis {
   public:
    static constexpr int kMinCutoff = 1;

    explicit ChargeBasis(int cutoff);

    int cutoff() const {
        return cutoff_;
    }
    int width() const {
        return 2 * cutoff_ + 1;
    }
    std::size_t dimension() const {
        auto w = static_cast<std::size_t>(width());
        return w * w * w;
    }
    std::size_t index(int na, int nb, int nc) const {
        auto w = static_cast<std::size_t>(width());
        return (static_cast<std::size_t>(na + cutoff_) * w + static_cast<std::size_t>(nb + cutoff_)) * w +
               static_cast<std::size_t>(nc + cutoff_);
    }
    std::array<int, 3> charges(std::size_t index) const;
    bool contains(int n) const {
        return n >= -cutoff_ && n <= cutoff_;
    }
    /// Diagonal of the charge-number operator of one node.
    Eigen::VectorXd node_charge(int node) const;

   private:
    int cutoff_;
};

/// Row-major sparse Hermitian matrix.
class SparseHermitianOperator {
   public:
    using Storage = Eigen::SparseMatrix<Complex, Eigen::RowMajor, std::int64_t>;

    SparseHermitianOperator() = default;
    explicit SparseHermitianOperator(Storage m);

    std::size_t dimension() const {
        return static_cast<std::size_t>(m_.rows());
    }
    const Storage &matrix() const {
        return m_;
    }
    /// out = H * in.
    void apply(const Eigen::Ref<const Eigen::VectorXcd> &in, Eigen::Ref<Eigen::VectorXcd> out) const;
    std::size_t nonzeros() const {
        return static_cast<std::size_t>(m_.nonZeros());
    }
    std::size_t max_row_nonzeros() const;
    /// max |H_ij - conj(H_ji)|.
    double hermiticity_defect() const;
    /// Gershgorin bound on the spectral radius.
    double norm_bound() const;
    Eigen::MatrixXcd to_dense() const;

   private:
    Storage m_;
};

/// H = 4 sum_ij Ec_ij (n_i - ng_i)(n_j - ng_j) + sum_k Ej_k (1 - cos phi_k),
/// with phi_1 = theta_a, phi_2 = theta_b - theta_a, phi_3 = theta_c - theta_b
/// and the whole external flux carried by JJ4: cos(theta_c + 2 pi f).
/// Requires cutoff >= 3 (BasisError otherwise).
SparseHermitianOperator build_hamiltonian(const QubitCircuit &circuit, const ChargeBasis &basis);
SparseHermitianOperator build_hamiltonian(const FluxQubitSpec &spec, const ChargeBasis &basis);

/// dH/df: only the JJ4 term depends on f.
SparseHermitianOperator flux_derivative(const QubitCircuit &circuit, const ChargeBasis &basis);

inline constexpr int kMinHamiltonianCutoff = 3;
inline constexpr int kMaxCutoff = 15;
inline constexpr int kDefaultCutoff = 10;

struct CutoffCertificate {
    int cutoff = 0;
    double tolerance_ghz = 0.0;
    int levels = 0;
    /// max_k |E_k(cutoff + 2) - E_k(cutoff)| at the chosen cutoff.
    double shift_ghz = 0.0;
};

/// Smallest cutoff in a doubling-then-bisect search over [3, 15] such that the
/// lowest `levels` energies move by less than tol when the cutoff grows by 2.
/// Throws ConvergenceError if no cutoff up to 15 qualifies.
CutoffCertificate converge_cutoff(const QubitCircuit &circuit, int levels, double tol_ghz);
CutoffCertificate converge_cutoff(const FluxQubitSpec &spec, int levels, double tol_ghz);

}  // namespace fluxq

#endif  // FLUXQ_CIRCUIT_HPP
