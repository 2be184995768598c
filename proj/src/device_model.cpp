#include "helium/device_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "helium/constants.hpp"

namespace helium {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// a e^2 / (4 pi eps) in K nm^2, with eps = eps_r * eps0.
double image_strength(const DeviceGeometry& g) {
  return g.sphere_radius_a * constants().coulomb_K_nm() / g.helium_rel_permittivity;
}

double second_derivative(const std::function<double(double)>& f, double x, double h) {
  auto d2 = [&](double s) { return (f(x + s) - 2.0 * f(x) + f(x - s)) / (s * s); };
  return (4.0 * d2(0.5 * h) - d2(h)) / 3.0;
}

constexpr int kScanPoints = 10000;

}  // namespace

void DeviceGeometry::validate() const {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(sphere_radius_a) || !positive(sphere_gap_d) || !positive(film_height_h) ||
      !positive(site_spacing_lambda)) {
    throw InvalidArgument("device geometry: all lengths must be finite and positive");
  }
  if (!positive(helium_rel_permittivity)) throw InvalidArgument("device geometry: eps_r must be positive");
  if (!std::isfinite(temperature) || temperature < 0.0) {
    throw InvalidArgument("device geometry: temperature must be non-negative");
  }
  if (film_height_h <= sphere_radius_a) {
    throw InvalidArgument("device geometry: film height must exceed the sphere radius (h > a)");
  }
  if (n_sites < 2) throw InvalidArgument("device geometry: need at least two sites");
}

double pair_potential(const DeviceGeometry& geom, double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) throw InvalidArgument("pair_potential: non-finite coordinate");
  const double al = geom.alpha();
  const double s = x * x + y * y + al * al + geom.beta_squared();
  return -image_strength(geom) * s / (s * s - 4.0 * al * al * y * y);
}

double pair_potential_partial_fractions(const DeviceGeometry& geom, double x, double y) {
  const double al = geom.alpha();
  const double b2 = geom.beta_squared();
  const double left = x * x + (y - al) * (y - al) + b2;
  const double right = x * x + (y + al) * (y + al) + b2;
  return -0.5 * image_strength(geom) * (1.0 / left + 1.0 / right);
}

WkbResult wkb_splitting_1d(const std::function<double(double)>& potential, double y_min,
                           double hbar_omega, double level) {
  if (!(y_min > 0.0)) throw UnsupportedRegime("wkb: no separated minima");
  const double barrier = potential(0.0);
  if (!(level > 0.0) || level >= barrier) {
    throw UnsupportedRegime("wkb: level " + fmt(level) + " K is not below the barrier " + fmt(barrier) + " K");
  }
  const auto excess = [&](double y) { return potential(y) - level; };
  boost::math::tools::eps_tolerance<double> tol(40);
  auto inner = boost::math::tools::bisect(excess, 0.0, y_min, tol);
  const double y0 = 0.5 * (inner.first + inner.second);

  // Outer turning point: walk outward until the potential climbs past the level.
  double step = std::max(y_min - y0, 1e-3 * y_min);
  double hi = y_min + step;
  int guard = 0;
  while (excess(hi) < 0.0 && guard++ < 200) {
    hi += step;
    step *= 1.5;
  }
  double outer = std::numeric_limits<double>::infinity();
  if (excess(hi) >= 0.0) {
    auto r = boost::math::tools::bisect(excess, y_min, hi, tol);
    outer = 0.5 * (r.first + r.second);
  }

  const double h2m = constants().hbar2_over_me_K_nm2();
  // |p|/hbar in 1/nm; y = y0 sin(theta) removes the square-root endpoint.
  const auto integrand = [&](double theta) {
    const double y = y0 * std::sin(theta);
    const double v = std::max(excess(y), 0.0);
    return std::sqrt(2.0 * v / h2m) * y0 * std::cos(theta);
  };
  double err = 0.0;
  const double half = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, 0.0, 0.5 * std::numbers::pi, 20, 1e-8, &err);

  WkbResult r;
  r.action = 2.0 * half;
  r.splitting = hbar_omega / std::numbers::pi * std::exp(-r.action);
  r.turning_points = {y0, outer};
  return r;
}

WellCharacterization characterize_well(const DeviceGeometry& geom, WkbLevel level) {
  geom.validate();
  WellCharacterization w;
  const double al = geom.alpha();
  const double b2 = geom.beta_squared();
  const double beta = std::sqrt(b2);
  const auto u = [&](double y) { return pair_potential(geom, 0.0, y); };

  // Uniform scan over the symmetric window, then bracketed refinement.
  const double half_width = al + 3.0 * beta;
  std::vector<double> ys(kScanPoints + 1), us(kScanPoints + 1);
  for (int i = 0; i <= kScanPoints; ++i) {
    ys[i] = -half_width + 2.0 * half_width * i / kScanPoints;
    us[i] = u(ys[i]);
  }
  const int bits = std::numeric_limits<double>::digits / 2;
  std::vector<double> minima;
  for (int i = 1; i < kScanPoints; ++i) {
    const bool is_min = us[i] <= us[i - 1] && us[i] <= us[i + 1];
    const bool is_max = us[i] >= us[i - 1] && us[i] >= us[i + 1];
    if (!is_min && !is_max) continue;
    const double sign = is_min ? 1.0 : -1.0;
    auto r = boost::math::tools::brent_find_minima([&](double y) { return sign * u(y); }, ys[i - 1],
                                                   ys[i + 1], bits);
    double y = r.first;
    if (std::abs(y) < 1e-6 * beta) y = 0.0;
    if (y < 0.0) continue;
    const bool seen = std::any_of(w.stationary_points.begin(), w.stationary_points.end(),
                                  [&](double s) { return std::abs(s - y) < 1e-6 * beta; });
    if (!seen) {
      w.stationary_points.push_back(y);
      if (is_min) minima.push_back(y);
    }
  }
  std::sort(w.stationary_points.begin(), w.stationary_points.end());

  w.y_min = 0.0;
  for (double y : minima) {
    if (y > 0.0 && (w.y_min == 0.0 || u(y) < u(w.y_min))) w.y_min = y;
  }
  w.is_double_well = w.y_min > 0.0;
  w.potential_min = u(w.y_min);
  w.barrier_U0 = w.is_double_well ? u(0.0) - w.potential_min : 0.0;

  const double h2m = constants().hbar2_over_me_K_nm2();
  const double k_closed = image_strength(geom) / (b2 * b2);
  w.omega = std::sqrt(2.0 * h2m * k_closed);
  w.ground_energy_E0 = w.omega;

  const double fd_step = 1e-2 * beta;
  const double curv_y = second_derivative(u, w.y_min, fd_step);
  const double curv_x = second_derivative([&](double x) { return pair_potential(geom, x, w.y_min); }, 0.0, fd_step);
  w.omega_numeric = curv_y > 0.0 ? std::sqrt(h2m * curv_y) : 0.0;
  w.omega_numeric_x = curv_x > 0.0 ? std::sqrt(h2m * curv_x) : 0.0;

  w.tunnel_level = level == WkbLevel::ZeroPoint ? 0.5 * w.omega_numeric : w.omega;
  const double prefactor = level == WkbLevel::ZeroPoint ? w.omega_numeric : w.omega;

  w.provenance["omega"] = "closed form sqrt(2 (hbar^2/m) a e^2 / (4 pi eps beta^4))";
  w.provenance["omega_numeric"] = "Richardson central difference of U(0,y) at y_min, step " + fmt(fd_step) + " nm";
  w.provenance["ground_energy_E0"] = "E0 = hbar*omega (closed form)";
  w.provenance["double_well_criterion"] =
      std::string("3 alpha^2 > beta^2 is ") + (3.0 * al * al > b2 ? "true" : "false") +
      "; scan found " + std::to_string(minima.size()) + " minima on y >= 0";
  w.provenance["scan"] = std::to_string(kScanPoints + 1) + " points on [-(alpha+3beta), alpha+3beta]";
  w.provenance["tunnel_level"] = level == WkbLevel::ZeroPoint ? "hbar*omega_numeric/2 above the floor"
                                                              : "hbar*omega (closed form) above the floor";

  if (w.is_double_well && w.tunnel_level < w.barrier_U0 && w.tunnel_level > 0.0) {
    const double floor = w.potential_min;
    auto r = wkb_splitting_1d([&](double y) { return u(y) - floor; }, w.y_min, prefactor, w.tunnel_level);
    w.turning_points = r.turning_points;
    w.tunnel_action = r.action;
  }
  return w;
}

double wkb_splitting(const DeviceGeometry& geom, const WellCharacterization& well) {
  if (!well.is_double_well) {
    throw WkbRegimeError("wkb_splitting: geometry has a single well at y = 0 (3 alpha^2 <= beta^2)", well);
  }
  if (!(well.tunnel_level < well.barrier_U0)) {
    throw WkbRegimeError("wkb_splitting: tunnel level " + fmt(well.tunnel_level) +
                             " K is not below the barrier U0 = " + fmt(well.barrier_U0) + " K",
                         well);
  }
  const bool zero_point = std::abs(well.tunnel_level - 0.5 * well.omega_numeric) <=
                          1e-12 * std::max(1.0, well.tunnel_level);
  const double prefactor = zero_point ? well.omega_numeric : well.omega;
  const double floor = well.potential_min;
  auto r = wkb_splitting_1d([&](double y) { return pair_potential(geom, 0.0, y) - floor; }, well.y_min,
                            prefactor, well.tunnel_level);
  return r.splitting;
}

double coupling_J(const DeviceGeometry& geom) {
  const double L = geom.chain_period();
  const double w = geom.sphere_gap_d + 2.0 * geom.sphere_radius_a;
  return constants().coulomb_K_nm() * w * w / (2.0 * L * L * L);
}

double chain_coulomb_energy(const DeviceGeometry& geom, const std::vector<double>& y) {
  const double L = geom.chain_period();
  double e = 0.0;
  for (std::size_t j = 0; j + 1 < y.size(); ++j) {
    e += constants().coulomb_K_nm() / std::abs(L + y[j + 1] - y[j]);
  }
  return e;
}

double longitudinal_gamma(const DeviceGeometry& geom, double field_V_per_m) {
  if (!std::isfinite(field_V_per_m)) throw InvalidArgument("longitudinal_gamma: non-finite field");
  return constants().kelvin_per_volt() * field_V_per_m * geom.alpha() * 1e-9;
}

HierarchyReport validate_hierarchy(const DeviceGeometry& geom) {
  HierarchyReport rep;
  const auto much = [](std::string rel, double ratio) {
    return HierarchyCheck{std::move(rel), ratio, ratio >= 5.0, ratio >= 3.0 && ratio < 5.0};
  };
  rep.checks.push_back(much("lambda >> h", geom.site_spacing_lambda / geom.film_height_h));
  const double hd = geom.film_height_h / geom.sphere_gap_d;
  rep.checks.push_back(HierarchyCheck{"h > d", hd, hd > 1.0, false});
  rep.checks.push_back(much("d >> a", geom.sphere_gap_d / geom.sphere_radius_a));
  rep.all_pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const auto& c) { return c.pass; });
  return rep;
}

StabilityReport stability_report(const DeviceGeometry& geom, const WellCharacterization& well,
                                 std::optional<double> gamma_transverse) {
  StabilityReport s;
  s.repulsion = constants().coulomb_K_nm() / geom.chain_period();
  s.binding = std::abs(pair_potential(geom, 0.0, well.y_min));
  s.stable = s.binding > s.repulsion;
  const double j = coupling_J(geom);
  s.thermal_scale = gamma_transverse ? std::min(*gamma_transverse, j) : j;
  s.thermal_ok = geom.temperature < s.thermal_scale;
  if (!gamma_transverse) s.note = "transverse field unavailable; thermal check uses J only";
  return s;
}

DeviceReport derive_parameters(const DeviceGeometry& geom, double field_V_per_m) {
  DeviceReport rep;
  rep.well = characterize_well(geom);
  try {
    rep.gamma_transverse = wkb_splitting(geom, rep.well);
  } catch (const WkbRegimeError& e) {
    rep.gamma_note = e.what();
  }
  rep.coupling_J = coupling_J(geom);
  rep.gamma_longitudinal = longitudinal_gamma(geom, field_V_per_m);
  rep.hierarchy = validate_hierarchy(geom);
  rep.stability = stability_report(geom, rep.well, rep.gamma_transverse);
  return rep;
}

EffectiveIsingParams effective_params(const DeviceReport& rep) {
  if (!rep.gamma_transverse) throw UnsupportedRegime("no transverse field: " + rep.gamma_note);
  EffectiveIsingParams p;
  p.gamma_transverse = *rep.gamma_transverse;
  p.coupling_J = rep.coupling_J;
  p.gamma_longitudinal = rep.gamma_longitudinal;
  p.provenance["gamma_transverse"] = "WKB splitting at level " + fmt(rep.well.tunnel_level) + " K";
  p.provenance["coupling_J"] = "e^2 (d+2a)^2 / (8 pi eps0 (lambda+d+4a)^3), collinear chain";
  p.provenance["gamma_longitudinal"] = "e E (d/2 + a)";
  return p;
}

double coupling_J_from_taylor(const DeviceGeometry& geom) {
  // Mixed partial d^2 E / dy_0 dy_1 of a two-electron chain at y = 0, by
  // central differences with one Richardson step.
  const double L = geom.chain_period();
  const auto mixed = [&](double h) {
    auto e = [&](double a, double b) { return chain_coulomb_energy(geom, {a, b}); };
    return (e(h, h) - e(h, -h) - e(-h, h) + e(-h, -h)) / (4.0 * h * h);
  };
  const double h = 1e-2 * L;
  const double coef = (4.0 * mixed(0.5 * h) - mixed(h)) / 3.0;
  const double al = geom.alpha();
  return -coef * al * al;
}

}  // namespace helium
