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

#ifndef FLUXQ_UNITS_HPP
#define FLUXQ_UNITS_HPP

#include <numbers>

// Unit conventions used throughout the library:
//
//   energy       GHz (frequency units, h = 1)
//   time         ns
//   capacitance  fF
//   voltage      uV
//   flux         fraction of the flux quantum h/2e
//
// An energy E held for a time t accumulates a phase 2*pi*E*t radians.

namespace fluxq::units {

// CODATA 2018 (exact SI definitions).
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kPlanck = 6.62607015e-34;             // J s
inline constexpr double kFluxQuantum = kPlanck / (2.0 * kElementaryCharge);  // Wb

inline constexpr double kFemtoFarad = 1e-15;
inline constexpr double kMicroVolt = 1e-6;
inline constexpr double kGigaHertz = 1e9;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// e^2 / (2 h * 1 fF) in GHz. Charging energy of a 1 fF capacitor.
inline constexpr double kChargingEnergyOneFemtoFaradGHz =
    kElementaryCharge * kElementaryCharge / (2.0 * kPlanck * kFemtoFarad) / kGigaHertz;

/// Ec = e^2 / (2 h C). Throws DomainError for C <= 0.
double charging_energy(double capacitance_ff);

/// Inverse of charging_energy. Throws DomainError for Ec <= 0.
double capacitance_for_charging_energy(double ec_ghz);

inline constexpr double ghz_to_joule(double e_ghz) {
    return e_ghz * kGigaHertz * kPlanck;
}
inline constexpr double joule_to_ghz(double e_joule) {
    return e_joule / (kPlanck * kGigaHertz);
}

/// Offset charge n_g = Cg * Ve / 2e (in Cooper pairs).
inline constexpr double offset_charge(double cg_ff, double ve_uv) {
    return cg_ff * kFemtoFarad * ve_uv * kMicroVolt / (2.0 * kElementaryCharge);
}

/// Gate voltage producing offset charge n_g through Cg. Throws DomainError for Cg <= 0.
double voltage_for_offset_charge(double cg_ff, double n_g);

/// Phase (radians) accumulated by energy E over time t.
inline constexpr double phase(double e_ghz, double t_ns) {
    return kTwoPi * e_ghz * t_ns;
}

/// Duration of a controlled-phase gate generated by g Z Z.
/// exp(-i 2 pi g t ZZ) equals CZ up to local Z rotations when 2 pi g t = pi/4.
inline constexpr double cz_gate_time(double g_ghz) {
    return 1.0 / (8.0 * g_ghz);
}

}  // namespace fluxq::units

#endif  // FLUXQ_UNITS_HPP
