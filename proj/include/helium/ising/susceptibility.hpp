#pragma once

#include <vector>

#include "helium/ising/chain.hpp"

namespace helium::ising {

struct Susceptibility {
  std::vector<double> per_site;  // d<sz_j>/d gamma_z at gamma_z = 0, 1/K
  double mean = 0.0;
  double step = 0.0;            // finite-difference step delta (K)
  double from_above = 0.0;      // one-sided estimates of the mean
  double from_below = 0.0;
  /// The zero-field ground state is (nearly) degenerate on the scale of the
  /// probe field; the response is a step, not a slope.
  bool non_analytic = false;
};

/// Linear response of <sz> to a uniform longitudinal field, by central
/// differences at +-delta and +-2 delta combined by Richardson extrapolation.
/// delta = 1e-3 * min(positive mean Gamma, positive mean J). Needs gamma_z = 0.
Susceptibility susceptibility(const IsingChain& chain);

}  // namespace helium::ising
