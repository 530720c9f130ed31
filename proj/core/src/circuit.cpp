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

#include "fluxq/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fluxq/errors.hpp"
#include "fluxq/units.hpp"

namespace fluxq {

JunctionSet junction_set_from_spec(double ej1_ghz, double alpha, double ej_ec_ratio) {
    if (!(ej1_ghz > 0.0)) {
        throw DomainError("ej1_ghz must be positive");
    }
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("alpha must lie in (0, 1]");
    }
    if (!(ej_ec_ratio > 0.0)) {
        throw DomainError("ej_ec_ratio must be positive");
    }
    double c1 = units::capacitance_for_charging_energy(ej1_ghz / ej_ec_ratio);
    Junction outer{ej1_ghz, c1};
    Junction inner{alpha * ej1_ghz, alpha * c1};
    return {outer, inner, inner, outer};
}

void FluxQubitSpec::validate() const {
    if (!(ej1_ghz > 0.0)) {
        throw DomainError("ej1_ghz must be positive");
    }
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("alpha must lie in (0, 1]");
    }
    if (!(ej_ec_ratio > 0.0)) {
        throw DomainError("ej_ec_ratio must be positive");
    }
    if (!(cg_ff >= 0.0)) {
        throw DomainError("cg_ff must be non-negative");
    }
    if (!(island_load_ff >= 0.0)) {
        throw DomainError("island_load_ff must be non-negative");
    }
    if (!std::isfinite(flux)) {
        throw DomainError("flux must be finite");
    }
    if (!std::isfinite(ve_uv)) {
        throw DomainError("ve_uv must be finite");
    }
}

double FluxQubitSpec::offset_charge() const {
    return units::offset_charge(cg_ff, ve_uv);
}

Eigen::Matrix3d node_capacitance_matrix(const FluxQubitSpec &spec) {
    spec.validate();
    JunctionSet jj = spec.junctions();
    Eigen::Matrix3d c = Eigen::Matrix3d::Zero();
    c(kNodeA, kNodeA) = jj[0].cj_ff + jj[1].cj_ff;
    c(kNodeIsland, kNodeIsland) = jj[1].cj_ff + jj[2].cj_ff + spec.cg_ff + spec.island_load_ff;
    c(kNodeC, kNodeC) = jj[2].cj_ff + jj[3].cj_ff;
    c(kNodeA, kNodeIsland) = c(kNodeIsland, kNodeA) = -jj[1].cj_ff;
    c(kNodeIsland, kNodeC) = c(kNodeC, kNodeIsland) = -jj[2].cj_ff;
    Eigen::LLT<Eigen::Matrix3d> llt(c);
    if (llt.info() != Eigen::Success) {
        throw ModelError("node capacitance matrix is not positive definite");
    }
    return c;
}

double QubitCircuit::offset_charge() const {
    return units::offset_charge(cg_ff, ve_uv);
}

QubitCircuit QubitCircuit::with_flux(double f) const {
    QubitCircuit out = *this;
    out.flux = f;
    return out;
}

QubitCircuit QubitCircuit::with_voltage(double ve) const {
    QubitCircuit out = *this;
    out.ve_uv = ve;
    return out;
}

QubitCircuit make_circuit(const FluxQubitSpec &spec) {
    Eigen::Matrix3d c = node_capacitance_matrix(spec);
    QubitCircuit out;
    out.junctions = spec.junctions();
    out.charging_ghz = units::kChargingEnergyOneFemtoFaradGHz * c.inverse();
    out.cg_ff = spec.cg_ff;
    out.ve_uv = spec.ve_uv;
    out.flux = spec.flux;
    return out;
}

ChargeBasis::ChargeBasis(int cutoff) : cutoff_(cutoff) {
    if (cutoff < kMinCutoff) {
        throw BasisError("charge cutoff must be at least " + std::to_string(kMinCutoff));
    }
}

std::array<int, 3> ChargeBasis::charges(std::size_t index) const {
    auto w = static_cast<std::size_t>(width());
    int nc = static_cast<int>(index % w) - cutoff_;
    index /= w;
    int nb = static_cast<int>(index % w) - cutoff_;
    index /= w;
    int na = static_cast<int>(index) - cutoff_;
    return {na, nb, nc};
}

Eigen::VectorXd ChargeBasis::node_charge(int node) const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(dimension()));
    for (std::size_t i = 0; i < dimension(); ++i) {
        out(static_cast<Eigen::Index>(i)) = charges(i)[static_cast<std::size_t>(node)];
    }
    return out;
}

SparseHermitianOperator::SparseHermitianOperator(Storage m) : m_(std::move(m)) {
    m_.makeCompressed();
}

void SparseHermitianOperator::apply(const Eigen::Ref<const Eigen::VectorXcd> &in,
                                    Eigen::Ref<Eigen::VectorXcd> out) const {
    out.noalias() = m_ * in;
}

std::size_t SparseHermitianOperator::max_row_nonzeros() const {
    std::size_t best = 0;
    for (Eigen::Index r = 0; r < m_.outerSize(); ++r) {
        auto n = static_cast<std::size_t>(m_.outerIndexPtr()[r + 1] - m_.outerIndexPtr()[r]);
        best = std::max(best, n);
    }
    return best;
}

double SparseHermitianOperator::hermiticity_defect() const {
    Storage adj = m_.adjoint();
    Storage diff = m_ - adj;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < diff.outerSize(); ++k) {
        for (Storage::InnerIterator it(diff, k); it; ++it) {
            worst = std::max(worst, std::abs(it.value()));
        }
    }
    return worst;
}

double SparseHermitianOperator::norm_bound() const {
    double worst = 0.0;
    for (Eigen::Index k = 0; k < m_.outerSize(); ++k) {
        double row = 0.0;
        for (Storage::InnerIterator it(m_, k); it; ++it) {
            row += std::abs(it.value());
        }
        worst = std::max(worst, row);
    }
    return worst;
}

Eigen::MatrixXcd SparseHermitianOperator::to_dense() const {
    return Eigen::MatrixXcd(m_);
}

namespace {

using Triplet = Eigen::Triplet<Complex, std::int64_t>;

// Adds -Ej/2 (phase * |n + shift><n| + h.c.) for every basis state where the
// shifted state stays inside the basis.
void add_tunneling(const ChargeBasis &basis, std::array<int, 3> shift, double ej, Complex phase,
                   std::vector<Triplet> &out) {
    const Complex amp = -0.5 * ej * phase;
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        auto n = basis.charges(i);
        std::array<int, 3> m{n[0] + shift[0], n[1] + shift[1], n[2] + shift[2]};
        if (!basis.contains(m[0]) || !basis.contains(m[1]) || !basis.contains(m[2])) {
            continue;
        }
        auto j = static_cast<std::int64_t>(basis.index(m[0], m[1], m[2]));
        auto ii = static_cast<std::int64_t>(i);
        out.emplace_back(j, ii, amp);
        out.emplace_back(ii, j, std::conj(amp));
    }
}

void require_cutoff(const ChargeBasis &basis) {
    if (basis.cutoff() < kMinHamiltonianCutoff) {
        throw BasisError("cutoff " + std::to_string(basis.cutoff()) +
                         " is too small for the junction shift operators (need >= " +
                         std::to_string(kMinHamiltonianCutoff) + ")");
    }
}

}  // namespace

SparseHermitianOperator build_hamiltonian(const QubitCircuit &circuit, const ChargeBasis &basis) {
    require_cutoff(basis);
    const auto &jj = circuit.junctions;
    const auto &ec = circuit.charging_ghz;
    const double ng = circuit.offset_charge();
    const double ej_total = jj[0].ej_ghz + jj[1].ej_ghz + jj[2].ej_ghz + jj[3].ej_ghz;

    std::vector<Triplet> triplets;
    triplets.reserve(basis.dimension() * 9);
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        auto n = basis.charges(i);
        double q[3] = {static_cast<double>(n[0]), static_cast<double>(n[1]) - ng, static_cast<double>(n[2])};
        double kinetic = 0.0;
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                kinetic += ec(a, b) * q[a] * q[b];
            }
        }
        auto ii = static_cast<std::int64_t>(i);
        triplets.emplace_back(ii, ii, Complex(4.0 * kinetic + ej_total, 0.0));
    }

    // e^{i theta} raises the conjugate charge by one.
    const double two_pi_f = units::kTwoPi * circuit.flux;
    add_tunneling(basis, {1, 0, 0}, jj[0].ej_ghz, 1.0, triplets);             // cos(theta_a)
    add_tunneling(basis, {-1, 1, 0}, jj[1].ej_ghz, 1.0, triplets);            // cos(theta_b - theta_a)
    add_tunneling(basis, {0, -1, 1}, jj[2].ej_ghz, 1.0, triplets);            // cos(theta_c - theta_b)
    add_tunneling(basis, {0, 0, 1}, jj[3].ej_ghz, std::polar(1.0, two_pi_f), triplets);  // cos(theta_c + 2 pi f)

    auto dim = static_cast<std::int64_t>(basis.dimension());
    SparseHermitianOperator::Storage m(dim, dim);
    m.setFromTriplets(triplets.begin(), triplets.end());
    return SparseHermitianOperator(std::move(m));
}

SparseHermitianOperator build_hamiltonian(const FluxQubitSpec &spec, const ChargeBasis &basis) {
    return build_hamiltonian(make_circuit(spec), basis);
}

SparseHermitianOperator flux_derivative(const QubitCircuit &circuit, const ChargeBasis &basis) {
    require_cutoff(basis);
    // d/df [-Ej4/2 (e^{i 2pi f} S+ + h.c.)] = -Ej4/2 (i 2pi e^{i 2pi f} S+ + h.c.)
    const double two_pi_f = units::kTwoPi * circuit.flux;
    const Complex phase = Complex(0.0, units::kTwoPi) * std::polar(1.0, two_pi_f);
    std::vector<Triplet> triplets;
    add_tunneling(basis, {0, 0, 1}, circuit.junctions[3].ej_ghz, phase, triplets);
    auto dim = static_cast<std::int64_t>(basis.dimension());
    SparseHermitianOperator::Storage m(dim, dim);
    m.setFromTriplets(triplets.begin(), triplets.end());
    return SparseHermitianOperator(std::move(m));
}

}  // namespace fluxq
