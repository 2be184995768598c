#include "helium/readout.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "helium/constants.hpp"
#include "helium/errors.hpp"
#include "helium/ising/dense.hpp"

namespace helium::readout {

using ising::DenseState;
using ising::IsingChain;

void ElectrodeConfig::validate() const {
  for (double v : {sphere_radius_um, separation_mm}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("electrodes: radius and separation must be positive");
  }
  if (!std::isfinite(applied_voltage_V) || applied_voltage_V < 0.0) {
    throw InvalidArgument("electrodes: applied voltage must be finite and >= 0");
  }
  if (separation_mm * 1e-3 <= 2.0 * sphere_radius_um * 1e-6) {
    throw InvalidArgument("electrodes: separation must exceed twice the sphere radius");
  }
}

namespace {

double field_per_volt(const ElectrodeConfig& cfg) {
  cfg.validate();
  const double r = cfg.sphere_radius_um * 1e-6;
  const double half = 0.5 * cfg.separation_mm * 1e-3;
  // Two charges +-4 pi eps0 R V/2, each a distance s/2 away: E = R V / (s/2)^2.
  return r / (half * half);
}

}  // namespace

double electrode_field(const ElectrodeConfig& cfg) { return field_per_volt(cfg) * cfg.applied_voltage_V; }

ElectrodeCoupling electrode_coupling(const DeviceGeometry& geom, const ElectrodeConfig& cfg) {
  geom.validate();
  const auto& k = constants();
  ElectrodeCoupling c;
  c.field_per_volt = field_per_volt(cfg);
  c.lever_arm_nm = geom.alpha();
  c.capacitance_F = 4.0 * std::numbers::pi * k.vacuum_permittivity * cfg.sphere_radius_um * 1e-6;
  c.gamma_per_volt_K = longitudinal_gamma(geom, c.field_per_volt);
  // Reciprocity: the energy a unit dipole gains per applied volt is the charge
  // it induces on the electrode, so the same number sets the read-out voltage.
  c.volts_per_spin = c.gamma_per_volt_K * k.boltzmann / c.capacitance_F;
  return c;
}

StaticResponse static_response(const IsingChain& chain, double gamma, const DeviceGeometry& geom,
                               const ElectrodeConfig& cfg) {
  if (!std::isfinite(gamma)) throw InvalidArgument("static_response: non-finite gamma");
  IsingChain c = chain;
  for (double& g : c.gamma_z) g += gamma;
  const auto gs = ising::ground_state(c);
  StaticResponse r;
  r.mz = ising::observables(gs.state, c.boundary).mz;
  for (double m : r.mz) r.mean_mz += m;
  r.mean_mz /= c.n;
  r.voltage_shift = c.n * electrode_coupling(geom, cfg).volts_per_spin * r.mean_mz;
  return r;
}

Fluctuations fluctuation_variance(const DenseState& state, const DeviceGeometry& geom, const ElectrodeConfig& cfg) {
  Fluctuations f;
  f.volts_per_spin = electrode_coupling(geom, cfg).volts_per_spin;
  f.correlator_sum = ising::observables(state, ising::Boundary::Open).correlator_sum;
  f.variance = f.volts_per_spin * f.volts_per_spin * f.correlator_sum;
  return f;
}

Fluctuations fluctuation_variance(const IsingChain& chain, const DeviceGeometry& geom, const ElectrodeConfig& cfg) {
  return fluctuation_variance(ising::ground_state(chain).state, geom, cfg);
}

double kink_signal(int n, std::optional<int> up_sites) {
  if (n < 1) throw InvalidArgument("kink_signal: n must be >= 1");
  if (!up_sites) return static_cast<double>(n) * n;
  const int k = *up_sites;
  if (k < 0 || k > n) throw InvalidArgument("kink_signal: wall position must be in [0, n]");
  const double m = 2.0 * k - n;
  return m * m;
}

double average_kink_signal(int n) {
  if (n < 1) throw InvalidArgument("average_kink_signal: n must be >= 1");
  double s = 0.0;
  for (int k = 0; k <= n; ++k) s += kink_signal(n, k);
  return s / (n + 1);
}

namespace {

// int_0^delta exp(z u) (g0 + slope u) du for z = -i omega.
std::complex<double> segment_integral(std::complex<double> z, double delta, double g0, double slope) {
  const std::complex<double> zd = z * delta;
  std::complex<double> e0, e1;
  if (std::abs(zd) < 1e-2) {
    std::complex<double> term = 1.0;
    double fact = 1.0;
    for (int k = 0; k < 8; ++k) {
      if (k > 0) {
        term *= zd;
        fact *= k;
      }
      e0 += term / (fact * (k + 1));
      e1 += term / (fact * (k + 2));
    }
    e0 *= delta;
    e1 *= delta * delta;
  } else {
    const std::complex<double> ez = std::exp(zd);
    e0 = (ez - 1.0) / z;
    e1 = (delta * ez - e0) / z;
  }
  return g0 * e0 + slope * e1;
}

}  // namespace

DynamicResponse dynamic_response(const IsingChain& chain, const Drive& drive, const std::vector<double>& times,
                                 const DynamicResponseOptions& options) {
  if (chain.n > 10) throw InvalidArgument("dynamic_response: needs the full spectrum, n <= 10");
  if (!drive) throw InvalidArgument("dynamic_response: no drive");
  if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0)) {
    throw InvalidArgument("dynamic_response: times must be sorted and >= 0");
  }
  if (options.intervals < 1) throw InvalidArgument("dynamic_response: need at least one interval");
  const int n = chain.n;
  const auto spec = ising::full_spectrum(chain);
  const Eigen::Index dim = spec.energies.size();

  DynamicResponse out;
  out.times = times;
  out.gap = spec.energies(1) - spec.energies(0);
  double scale = 0.0;
  for (double j : chain.coupling) scale += std::abs(j);
  scale = chain.coupling.empty() ? 0.0 : scale / chain.coupling.size();
  if (scale == 0.0) {
    for (double g : chain.gamma_x) scale += std::abs(g);
    scale /= n;
  }
  if (out.gap < 1e-6 * scale) {
    throw IllConditionedResponse("dynamic_response: ground state gap " + std::to_string(out.gap) +
                                 " K is below 1e-6 of the coupling scale");
  }

  // a(j, m) = <m| sz_j |0>.
  const Eigen::VectorXd ground = spec.vectors.col(0);
  Eigen::MatrixXd a(n, dim);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd v(dim);
    for (Eigen::Index s = 0; s < dim; ++s) v(s) = ising::spin_z(s, j, n) * ground(s);
    a.row(j) = (spec.vectors.transpose() * v).transpose();
  }
  out.baseline_mz.resize(n);
  for (int j = 0; j < n; ++j) out.baseline_mz[j] = a(j, 0);
  const Eigen::VectorXd total = a.colwise().sum().transpose();
  Eigen::VectorXd omega = spec.energies.array() - spec.energies(0);

  // C_m(t) = int_0^t exp(-i omega_m s) drive(s) ds on a piecewise-linear drive.
  const double t_max = times.empty() ? 0.0 : times.back();
  std::vector<double> grid;
  for (std::size_t i = 0; i <= options.intervals; ++i) grid.push_back(t_max * i / options.intervals);
  grid.insert(grid.end(), times.begin(), times.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<std::complex<double>> acc(dim, 0.0);
  std::size_t next_time = 0;
  double prev_t = 0.0, prev_g = drive(0.0);
  auto emit = [&](double t) {
    std::vector<double> resp(n, 0.0);
    for (Eigen::Index m = 1; m < dim; ++m) {
      if (omega(m) <= 0.0) continue;
      const double integral = (std::exp(std::complex<double>(0.0, omega(m) * t)) * acc[m]).imag();
      const double weight = 2.0 * total(m) * integral;
      for (int j = 0; j < n; ++j) resp[j] += a(j, m) * weight;
    }
    for (int j = 0; j < n; ++j) resp[j] += out.baseline_mz[j];
    out.mz.push_back(std::move(resp));
    if (options.keep_correlator) {
      Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
      for (Eigen::Index m = 0; m < dim; ++m) {
        const auto phase = std::exp(std::complex<double>(0.0, -omega(m) * t));
        c += phase * (a.col(m) * a.col(m).transpose()).cast<std::complex<double>>();
      }
      out.correlator.push_back(std::move(c));
    }
  };
  while (next_time < times.size() && times[next_time] == 0.0) {
    emit(0.0);
    ++next_time;
  }
  for (double t : grid) {
    if (t <= prev_t) continue;
    const double g = drive(t);
    if (!std::isfinite(g)) throw InvalidArgument("dynamic_response: drive returned a non-finite value");
    const double delta = t - prev_t;
    const double slope = (g - prev_g) / delta;
    for (Eigen::Index m = 1; m < dim; ++m) {
      const std::complex<double> z(0.0, -omega(m));
      acc[m] += std::exp(z * prev_t) * segment_integral(z, delta, prev_g, slope);
    }
    prev_t = t;
    prev_g = g;
    while (next_time < times.size() && times[next_time] == t) {
      emit(t);
      ++next_time;
    }
  }
  return out;
}

}  // namespace helium::readout
