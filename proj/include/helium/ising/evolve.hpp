#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "helium/ising/chain.hpp"

namespace helium::ising {

/// Chain parameters as a function of time (units of hbar / K).
using ChainProfile = std::function<IsingChain(double t)>;

struct SweepSchedule {
  double duration = 0.0;
  ChainProfile profile;
  /// Accept once halving the step moves every reported observable by less than this.
  double tolerance = 1e-6;
  std::size_t initial_steps = 0;  // 0: chosen from the duration
  std::size_t max_steps = std::size_t{1} << 20;

  /// Every parameter interpolated linearly from `start` to `end`.
  static SweepSchedule linear(const IsingChain& start, const IsingChain& end, double duration);
  /// Transverse field ramped linearly from gamma_start to gamma_end at rate
  /// |dGamma/dt| = J / tau_q, with J the mean coupling of `base`.
  static SweepSchedule transverse_ramp(const IsingChain& base, double gamma_start, double gamma_end, double tau_q);
};

struct EvolveResult {
  DenseState state;
  std::size_t steps = 0;
  double step_change = 0.0;  // observable change between the last two step counts
};

/// Schrodinger evolution of a 2^n state under the schedule. Fourth-order
/// commutator-free Magnus steps, each exponential applied by Krylov projection.
EvolveResult evolve(const SweepSchedule& schedule, const DenseState& initial);

struct QuadraticEvolveResult {
  std::vector<double> bond_zz;  // <sz_j sz_{j+1}> at the end
  std::vector<double> mx;       // <sx_j> at the end
  double kink_density = 0.0;    // mean over bonds of (1 - <sz sz>)/2
  std::size_t steps = 0;
  double step_change = 0.0;
  Eigen::MatrixXd correlation;  // final Majorana correlation, if requested
};

struct QuadraticEvolveOptions {
  bool keep_correlation = false;
};

/// Heisenberg evolution of the 2n Majoranas starting from the ground state of
/// profile(0). Same Magnus scheme; exponentials by Chebyshev expansion.
QuadraticEvolveResult evolve_quadratic(const SweepSchedule& schedule, const QuadraticEvolveOptions& options = {});

}  // namespace helium::ising
