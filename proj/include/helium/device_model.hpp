#pragma once

// Electron-on-helium trap: from sphere/film geometry to the effective Ising
// parameters. Lengths are nm, energies are Kelvin (k_B = 1), fields V/m.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "helium/errors.hpp"

namespace helium {

struct DeviceGeometry {
  double sphere_radius_a = 10.0;       // nm
  double sphere_gap_d = 60.0;          // nm, edge-to-edge
  double film_height_h = 110.0;        // nm
  double site_spacing_lambda = 600.0;  // nm
  double helium_rel_permittivity = 1.06;
  double temperature = 0.1;            // K
  int n_sites = 100;

  /// Half-distance from the pair center to a sphere center: d/2 + a.
  double alpha() const { return 0.5 * sphere_gap_d + sphere_radius_a; }
  /// h^2 - a^2.
  double beta_squared() const { return film_height_h * film_height_h - sphere_radius_a * sphere_radius_a; }
  /// Center-to-center distance of neighbouring electrons along the chain.
  double chain_period() const { return site_spacing_lambda + sphere_gap_d + 4.0 * sphere_radius_a; }

  /// Throws InvalidArgument when an invariant is broken.
  void validate() const;
};

/// Named numbers with a note on where they came from.
using Provenance = std::map<std::string, std::string>;

struct TurningPoints {
  double inner;  // y0 > 0; the pair is (-y0, +y0)
  double outer;  // outer turning point on the same side
};

struct WellCharacterization {
  bool is_double_well = false;
  double y_min = 0.0;        // nm, position of the (positive-y) minimum
  double potential_min = 0.0;  // K, U(0, y_min)
  double barrier_U0 = 0.0;   // K, U(0,0) - U(0,y_min)
  double omega = 0.0;        // K, hbar*omega from the closed-form curvature
  double omega_numeric = 0.0;  // K, hbar*omega_y from the numerical curvature at y_min
  double omega_numeric_x = 0.0;  // K, same along x
  double ground_energy_E0 = 0.0;  // K, E0 = hbar*omega (closed form)
  double tunnel_level = 0.0;  // K above the well floor used for the WKB action
  std::optional<TurningPoints> turning_points;
  double tunnel_action = 0.0;  // integral |p| dy / hbar between inner turning points
  std::vector<double> stationary_points;  // y >= 0 at x = 0
  Provenance provenance;
};

/// Which energy above the well floor sets the WKB turning points.
enum class WkbLevel {
  ZeroPoint,     // hbar*omega_numeric / 2, the harmonic ground level
  FullQuantum,   // hbar*omega (closed form), E0 as written after the harmonic expansion
};

struct EffectiveIsingParams {
  double gamma_transverse = 0.0;    // K
  double coupling_J = 0.0;          // K
  double gamma_longitudinal = 0.0;  // K, coefficient of +gamma*sigma^z
  Provenance provenance;
};

struct HierarchyCheck {
  std::string relation;
  double ratio = 0.0;
  bool pass = false;
  bool warn = false;
};

struct HierarchyReport {
  std::vector<HierarchyCheck> checks;
  bool all_pass = false;
};

struct StabilityReport {
  double repulsion = 0.0;  // K, e^2 / (4 pi eps0 L)
  double binding = 0.0;    // K, |U_w| at the equilibrium position
  bool stable = false;     // binding > repulsion
  double thermal_scale = 0.0;  // K, min of the available Ising scales
  bool thermal_ok = false;     // temperature < thermal_scale
  std::string note;
};

/// Thrown by wkb_splitting; carries the well report that made it refuse.
class WkbRegimeError : public UnsupportedRegime {
 public:
  WkbRegimeError(const std::string& what, WellCharacterization w)
      : UnsupportedRegime(what), well(std::move(w)) {}
  WellCharacterization well;
};

/// Image potential of an electron above a pair of grounded spheres, in K.
double pair_potential(const DeviceGeometry& geom, double x, double y);

/// Same potential written as two separate grounded-sphere image terms.
double pair_potential_partial_fractions(const DeviceGeometry& geom, double x, double y);

WellCharacterization characterize_well(const DeviceGeometry& geom,
                                       WkbLevel level = WkbLevel::ZeroPoint);

/// Tunnel splitting E_A - E_S (K) from the WKB action between the inner
/// turning points of U(0, y).
double wkb_splitting(const DeviceGeometry& geom, const WellCharacterization& well);

/// One-dimensional WKB machinery for an arbitrary symmetric double well.
/// `potential` is measured from the well floor; `hbar_omega` in K sets the
/// prefactor and `level` (K above the floor) the turning points.
struct WkbResult {
  double splitting = 0.0;
  double action = 0.0;
  TurningPoints turning_points{};
};
WkbResult wkb_splitting_1d(const std::function<double(double)>& potential, double y_min,
                           double hbar_omega, double level);

double coupling_J(const DeviceGeometry& geom);

/// J recovered as the y_j*y_{j+1} Taylor coefficient of chain_coulomb_energy,
/// by finite differences. Validation path for coupling_J.
double coupling_J_from_taylor(const DeviceGeometry& geom);

/// Energy (K) of the chain configuration with electrons at j*L + y_j, i.e. the
/// exact nearest-neighbour Coulomb sum that coupling_J expands.
double chain_coulomb_energy(const DeviceGeometry& geom, const std::vector<double>& y);

/// gamma = e E (d/2 + a), in K, for a uniform field along the chain.
double longitudinal_gamma(const DeviceGeometry& geom, double field_V_per_m);

HierarchyReport validate_hierarchy(const DeviceGeometry& geom);

StabilityReport stability_report(const DeviceGeometry& geom, const WellCharacterization& well,
                                 std::optional<double> gamma_transverse = std::nullopt);

/// Full pipeline: Gamma from WKB (absent for single wells), J, gamma.
struct DeviceReport {
  WellCharacterization well;
  std::optional<double> gamma_transverse;
  std::string gamma_note;
  double coupling_J = 0.0;
  double gamma_longitudinal = 0.0;
  HierarchyReport hierarchy;
  StabilityReport stability;
};
DeviceReport derive_parameters(const DeviceGeometry& geom, double field_V_per_m);

/// Throws UnsupportedRegime when the report has no transverse field.
EffectiveIsingParams effective_params(const DeviceReport& rep);

}  // namespace helium
