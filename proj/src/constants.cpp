#include "helium/constants.hpp"

#include <numbers>

#include <json.hpp>

namespace helium {

double PhysicalConstants::coulomb_K_nm() const {
  return electron_charge * electron_charge /
         (4.0 * std::numbers::pi * vacuum_permittivity * boltzmann) * 1e9;
}

double PhysicalConstants::hbar2_over_me_K_nm2() const {
  return reduced_planck * reduced_planck / (electron_mass * boltzmann) * 1e18;
}

double PhysicalConstants::kelvin_per_volt() const { return electron_charge / boltzmann; }

double PhysicalConstants::time_unit_s() const { return reduced_planck / boltzmann; }

std::string PhysicalConstants::to_json() const {
  nlohmann::ordered_json j;
  j["electron_charge_C"] = electron_charge;
  j["electron_mass_kg"] = electron_mass;
  j["vacuum_permittivity_F_per_m"] = vacuum_permittivity;
  j["reduced_planck_J_s"] = reduced_planck;
  j["boltzmann_J_per_K"] = boltzmann;
  j["source"] = "CODATA 2018";
  return j.dump(2);
}

}  // namespace helium
