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

#include "fluxq/units.hpp"

#include <string>

#include "fluxq/errors.hpp"

namespace fluxq::units {

double charging_energy(double capacitance_ff) {
    if (!(capacitance_ff > 0.0)) {
        throw DomainError("charging_energy: capacitance must be positive, got " +
                          std::to_string(capacitance_ff) + " fF");
    }
    return kChargingEnergyOneFemtoFaradGHz / capacitance_ff;
}

double capacitance_for_charging_energy(double ec_ghz) {
    if (!(ec_ghz > 0.0)) {
        throw DomainError("capacitance_for_charging_energy: energy must be positive, got " +
                          std::to_string(ec_ghz) + " GHz");
    }
    return kChargingEnergyOneFemtoFaradGHz / ec_ghz;
}

double voltage_for_offset_charge(double cg_ff, double n_g) {
    if (!(cg_ff > 0.0)) {
        throw DomainError("voltage_for_offset_charge: gate capacitance must be positive");
    }
    return n_g * 2.0 * kElementaryCharge / (cg_ff * kFemtoFarad) / kMicroVolt;
}

}  // namespace fluxq::units
