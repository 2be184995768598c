#pragma once

#include <string>

namespace helium {

/// CODATA 2018 values in SI units. This is the only place physical constants
/// are spelled out; everything else derives from here.
struct PhysicalConstants {
  double electron_charge = 1.602176634e-19;       // C (exact)
  double electron_mass = 9.1093837015e-31;        // kg
  double vacuum_permittivity = 8.8541878128e-12;  // F/m
  double reduced_planck = 1.054571817e-34;        // J s
  double boltzmann = 1.380649e-23;                // J/K (exact)

  /// e^2 / (4 pi eps0 k_B), in K nm. Coulomb energy of two charges 1 nm apart.
  double coulomb_K_nm() const;
  /// hbar^2 / (m_e k_B), in K nm^2.
  double hbar2_over_me_K_nm2() const;
  /// e / k_B, in K per volt.
  double kelvin_per_volt() const;
  /// hbar / k_B, in seconds times Kelvin (one unit of time for energies in K).
  double time_unit_s() const;

  /// JSON object with the raw constants, for reproducibility manifests.
  std::string to_json() const;
};

inline const PhysicalConstants& constants() {
  static const PhysicalConstants c{};
  return c;
}

}  // namespace helium
