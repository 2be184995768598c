#include "helium/ising/disorder.hpp"

#include <cmath>

#include "helium/errors.hpp"
#include "helium/numerics/random.hpp"

namespace helium::ising {

namespace {

enum Stream : std::uint64_t { kGammaX = 1, kCoupling = 2, kGammaZ = 3 };

void perturb(std::vector<double>& values, double width, std::uint64_t seed, Stream stream) {
  if (width == 0.0) return;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double u = numerics::to_unit_interval(numerics::counter_hash(seed, stream, i));
    values[i] += width * (2.0 * u - 1.0);
  }
}

}  // namespace

IsingChain sample_disorder(const IsingChain& base, const DisorderAmplitudes& w, std::uint64_t seed) {
  base.validate();
  for (double a : {w.gamma_x, w.coupling, w.gamma_z}) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidArgument("disorder: amplitudes must be finite and >= 0");
  }
  IsingChain out = base;
  perturb(out.gamma_x, w.gamma_x, seed, kGammaX);
  perturb(out.coupling, w.coupling, seed, kCoupling);
  perturb(out.gamma_z, w.gamma_z, seed, kGammaZ);
  return out;
}

}  // namespace helium::ising
