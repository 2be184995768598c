#pragma once

#include <cstdint>

#include "helium/ising/chain.hpp"

namespace helium::ising {

/// Half-widths of the uniform perturbations added to each parameter.
struct DisorderAmplitudes {
  double gamma_x = 0.0;
  double coupling = 0.0;
  double gamma_z = 0.0;
};

/// Adds U(-w, w) to every entry. Values come from a counter-based generator
/// keyed on (seed, parameter kind, index), so site j gets the same draw
/// regardless of chain length or evaluation order.
IsingChain sample_disorder(const IsingChain& base, const DisorderAmplitudes& amplitudes, std::uint64_t seed);

}  // namespace helium::ising
