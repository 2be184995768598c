#include "helium/ising/susceptibility.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "helium/errors.hpp"
#include "helium/ising/dense.hpp"

namespace helium::ising {

namespace {

std::vector<double> magnetization(const IsingChain& base, double field) {
  IsingChain c = base;
  std::fill(c.gamma_z.begin(), c.gamma_z.end(), field);
  GroundStateOptions opts;
  opts.tolerance = 1e-11;
  return observables(ground_state(c, opts).state, c.boundary).mz;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

}  // namespace

Susceptibility susceptibility(const IsingChain& chain) {
  chain.validate();
  if (chain.has_longitudinal_field()) throw InvalidArgument("susceptibility: base chain must have gamma_z = 0");
  const double g = std::abs(chain.mean_gamma_x());
  const double j = std::abs(chain.mean_coupling());
  double scale = std::numeric_limits<double>::infinity();
  if (g > 0.0) scale = std::min(scale, g);
  if (j > 0.0) scale = std::min(scale, j);
  if (!std::isfinite(scale)) throw InvalidArgument("susceptibility: chain has no energy scale");

  Susceptibility r;
  r.step = 1e-3 * scale;
  const double d = r.step;
  const auto levels = lowest_energies(chain, 2);
  r.non_analytic = (levels[1] - levels[0]) < chain.n * d;

  const auto p1 = magnetization(chain, d), m1 = magnetization(chain, -d);
  const auto p2 = magnetization(chain, 2 * d), m2 = magnetization(chain, -2 * d);
  r.per_site.resize(chain.n);
  for (int s = 0; s < chain.n; ++s) {
    const double near = (p1[s] - m1[s]) / (2 * d);
    const double far = (p2[s] - m2[s]) / (4 * d);
    r.per_site[s] = (4.0 * near - far) / 3.0;
  }
  r.mean = mean(r.per_site);
  r.from_above = (4.0 * mean(p1) / d - mean(p2) / (2 * d)) / 3.0;
  r.from_below = (4.0 * -mean(m1) / d - -mean(m2) / (2 * d)) / 3.0;
  return r;
}

}  // namespace helium::ising
