#pragma once

// Electrode read-out: the biased sphere pair that applies the longitudinal
// field, and the voltage the chain's dipoles induce back on it.

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "helium/device_model.hpp"
#include "helium/ising/chain.hpp"

namespace helium::readout {

struct ElectrodeConfig {
  double sphere_radius_um = 100.0;
  double separation_mm = 1.0;  // center to center
  double applied_voltage_V = 1e-6;

  /// All positive and separation > 2R.
  void validate() const;
};

/// Field at the midpoint of two spheres held at +-V/2, each replaced by its
/// point charge 4 pi eps0 R (V/2) at the center. Returns V/m.
double electrode_field(const ElectrodeConfig& cfg);

/// The single geometric constant behind both directions of the coupling.
struct ElectrodeCoupling {
  double field_per_volt = 0.0;       // 1/m
  double lever_arm_nm = 0.0;         // dipole arm d/2 + a
  double capacitance_F = 0.0;        // 4 pi eps0 R
  double gamma_per_volt_K = 0.0;     // longitudinal field per applied volt
  double volts_per_spin = 0.0;       // induced voltage per unit <sz>
};

ElectrodeCoupling electrode_coupling(const DeviceGeometry& geom, const ElectrodeConfig& cfg);

struct ReadoutSignal {
  double field_at_chain = 0.0;        // V/m
  double gamma_induced = 0.0;         // K
  double mean_mz = 0.0;
  double voltage_shift = 0.0;         // V
  double fluctuation_variance = 0.0;  // V^2
  double correlator_sum = 0.0;
};

struct StaticResponse {
  std::vector<double> mz;
  double mean_mz = 0.0;
  double voltage_shift = 0.0;  // V, n * volts_per_spin * mean_mz
};

/// Ground state of the chain with gamma added to every gamma_z (chain sign
/// convention: positive gamma favours sz = +1).
StaticResponse static_response(const ising::IsingChain& chain, double gamma, const DeviceGeometry& geom,
                               const ElectrodeConfig& cfg);

struct Fluctuations {
  double variance = 0.0;  // V^2
  double correlator_sum = 0.0;
  double volts_per_spin = 0.0;
};

/// variance = volts_per_spin^2 * sum_ij <sz_i sz_j> in the ground state.
/// The proportionality is a modelling choice (see README).
Fluctuations fluctuation_variance(const ising::IsingChain& chain, const DeviceGeometry& geom,
                                  const ElectrodeConfig& cfg);
Fluctuations fluctuation_variance(const ising::DenseState& state, const DeviceGeometry& geom,
                                  const ElectrodeConfig& cfg);

/// sum_ij sz_i sz_j (diagonal included) for a sharp domain wall with
/// `up_sites` spins up followed by n - up_sites spins down; no wall gives n^2.
double kink_signal(int n, std::optional<int> up_sites);
/// Mean of kink_signal over the n + 1 wall positions; equals n(n+2)/3.
double average_kink_signal(int n);

using Drive = std::function<double(double)>;

struct DynamicResponseOptions {
  std::size_t intervals = 4000;  // drive sampled piecewise linearly on [0, t_max]
  bool keep_correlator = false;
};

struct DynamicResponse {
  std::vector<double> times;
  std::vector<double> baseline_mz;           // ground state, no drive
  std::vector<std::vector<double>> mz;       // [time][site], baseline + linear response
  std::vector<Eigen::MatrixXcd> correlator;  // <sz_i(t) sz_j(0)> per time, if kept
  double gap = 0.0;
};

/// Kubo linear response to H(t) = H - drive(t) sum_j sz_j, from the full
/// spectrum (n <= 10).
DynamicResponse dynamic_response(const ising::IsingChain& chain, const Drive& drive,
                                 const std::vector<double>& times, const DynamicResponseOptions& options = {});

}  // namespace helium::readout
