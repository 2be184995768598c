#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "helium/constants.hpp"
#include "helium/device_model.hpp"

using namespace helium;

namespace {

DeviceGeometry reference_geometry() { return DeviceGeometry{}; }

DeviceGeometry canonical_double_well() {
  DeviceGeometry g;
  g.film_height_h = 50.0;
  return g;
}

// Reference values computed offline with an independent script (SciPy
// constants, bounded Brent minimization, adaptive quadrature).
constexpr double kCoulombKnm = 16710.09467850522;
constexpr double kHbar2OverMe = 884.2601289903315;

}  // namespace

TEST_CASE("constants in working units") {
  CHECK(constants().coulomb_K_nm() == doctest::Approx(kCoulombKnm).epsilon(1e-9));
  CHECK(constants().hbar2_over_me_K_nm2() == doctest::Approx(kHbar2OverMe).epsilon(1e-9));
  CHECK(constants().kelvin_per_volt() == doctest::Approx(11604.518).epsilon(1e-6));
}

TEST_CASE("pair potential: closed form, partial fractions and symmetry") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> len(5.0, 200.0), pos(-300.0, 300.0);
  for (int t = 0; t < 200; ++t) {
    DeviceGeometry g;
    g.sphere_radius_a = len(rng) * 0.2;
    g.sphere_gap_d = len(rng);
    g.film_height_h = g.sphere_radius_a + len(rng);
    const double x = pos(rng), y = pos(rng);
    const double u = pair_potential(g, x, y);
    CHECK(u == doctest::Approx(pair_potential_partial_fractions(g, x, y)).epsilon(1e-12));
    CHECK(u == doctest::Approx(pair_potential(g, -x, y)).epsilon(1e-14));
    CHECK(u == doctest::Approx(pair_potential(g, x, -y)).epsilon(1e-14));
    CHECK(u < 0.0);
  }
  const auto g = reference_geometry();
  const double s = g.alpha() * g.alpha() + g.beta_squared();
  CHECK(pair_potential(g, 0.0, 0.0) == doctest::Approx(-g.sphere_radius_a * kCoulombKnm / 1.06 / s).epsilon(1e-9));
  CHECK(pair_potential(g, 0.0, 0.0) == doctest::Approx(-11.591353134368214).epsilon(1e-8));
  CHECK_THROWS_AS(pair_potential(g, std::nan(""), 0.0), InvalidArgument);
}

TEST_CASE("geometry validation") {
  DeviceGeometry g;
  CHECK_NOTHROW(g.validate());
  g.film_height_h = g.sphere_radius_a;
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
  g = DeviceGeometry{};
  g.sphere_gap_d = -1.0;
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
  g = DeviceGeometry{};
  g.helium_rel_permittivity = 0.0;
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
  g = DeviceGeometry{};
  g.n_sites = 1;
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
}

TEST_CASE("reference geometry is a single well with the quoted ground energy") {
  const auto g = reference_geometry();
  const auto w = characterize_well(g);
  CHECK_FALSE(w.is_double_well);
  CHECK(3.0 * g.alpha() * g.alpha() <= g.beta_squared());
  CHECK(w.y_min == 0.0);
  CHECK(w.barrier_U0 == 0.0);
  REQUIRE(w.stationary_points.size() == 1);
  CHECK(w.stationary_points[0] == 0.0);
  CHECK(w.ground_energy_E0 == doctest::Approx(1.3914265824927534).epsilon(1e-8));
  CHECK(std::abs(w.ground_energy_E0 / 1.4 - 1.0) < 0.15);
  CHECK(w.omega_numeric == doctest::Approx(0.8933033289520258).epsilon(1e-5));
  CHECK_FALSE(w.turning_points.has_value());
  CHECK(w.provenance.count("double_well_criterion") == 1);

  try {
    (void)wkb_splitting(g, w);
    FAIL("single well must be refused");
  } catch (const WkbRegimeError& e) {
    CHECK_FALSE(e.well.is_double_well);
    CHECK(std::string(e.what()).find("single well") != std::string::npos);
  }
}

TEST_CASE("canonical double well: minimum, barrier and curvature") {
  const auto g = canonical_double_well();
  const auto w = characterize_well(g);
  REQUIRE(w.is_double_well);
  CHECK(w.y_min == doctest::Approx(32.55217791303957).epsilon(1e-7));
  CHECK(w.barrier_U0 == doctest::Approx(2.9744958732905573).epsilon(1e-8));
  CHECK(w.omega == doctest::Approx(6.957132912463767).epsilon(1e-8));
  CHECK(w.omega_numeric == doctest::Approx(4.108957451781241).epsilon(1e-5));
  REQUIRE(w.stationary_points.size() == 2);
  CHECK(w.stationary_points[0] == 0.0);
  REQUIRE(w.turning_points.has_value());
  CHECK(w.turning_points->inner < w.y_min);
  CHECK(w.turning_points->outer > w.y_min);
  const double floor = w.potential_min;
  CHECK(pair_potential(g, 0.0, w.turning_points->inner) - floor == doctest::Approx(w.tunnel_level).epsilon(1e-9));
  CHECK(pair_potential(g, 0.0, w.turning_points->outer) - floor == doctest::Approx(w.tunnel_level).epsilon(1e-9));
  CHECK(w.tunnel_action == doctest::Approx(0.9247276582560159).epsilon(1e-6));
  CHECK(wkb_splitting(g, w) == doctest::Approx(0.5187733433909285).epsilon(1e-5));
}

TEST_CASE("full-quantum level is refused when it exceeds the barrier") {
  const auto g = canonical_double_well();
  const auto w = characterize_well(g, WkbLevel::FullQuantum);
  CHECK(w.tunnel_level == doctest::Approx(w.omega));
  CHECK(w.tunnel_level > w.barrier_U0);
  CHECK_THROWS_AS((void)wkb_splitting(g, w), WkbRegimeError);
}

TEST_CASE("smaller spheres tunnel more") {
  auto g9 = canonical_double_well();
  g9.sphere_radius_a = 9.0;
  const auto w9 = characterize_well(g9);
  REQUIRE(w9.is_double_well);
  CHECK(w9.y_min == doctest::Approx(30.919486998451664).epsilon(1e-7));
  CHECK(w9.barrier_U0 == doctest::Approx(2.252729708882569).epsilon(1e-8));
  const double g_small = wkb_splitting(g9, w9);
  CHECK(g_small == doctest::Approx(0.810963281570071).epsilon(1e-5));
  const auto g10 = canonical_double_well();
  CHECK(g_small > wkb_splitting(g10, characterize_well(g10)));
}

TEST_CASE("one-dimensional WKB on a quartic well") {
  // V = V0 (y^2/y0^2 - 1)^2: harmonic frequency and the zero-point action
  // have closed forms in the deep limit.
  const double v0 = 200.0, y0 = 60.0;
  const auto v = [&](double y) {
    const double t = y * y / (y0 * y0) - 1.0;
    return v0 * t * t;
  };
  const double hw = std::sqrt(kHbar2OverMe * 8.0 * v0 / (y0 * y0));
  const auto r = wkb_splitting_1d(v, y0, hw, 0.5 * hw);
  // Action at the level hw/2 equals the full instanton action minus a
  // logarithmic correction; it must lie below S0 = 16 V0 / (3 hw).
  const double s0 = 16.0 / 3.0 * v0 / hw;
  CHECK(r.action < s0);
  CHECK(r.action > s0 - 5.0);
  CHECK(r.splitting == doctest::Approx(hw / std::numbers::pi * std::exp(-r.action)).epsilon(1e-12));
  CHECK(v(r.turning_points.inner) == doctest::Approx(0.5 * hw).epsilon(1e-9));
  CHECK(v(r.turning_points.outer) == doctest::Approx(0.5 * hw).epsilon(1e-9));
  // Instanton splitting with its first loop correction.
  const double instanton = 2.0 * hw * std::sqrt(6.0 * s0 / std::numbers::pi) * std::exp(-s0) * (1.0 - 71.0 / (72.0 * s0));
  CHECK(r.splitting / instanton > 0.5);
  CHECK(r.splitting / instanton < 2.0);

  CHECK_THROWS_AS(wkb_splitting_1d(v, y0, hw, 2.0 * v0), UnsupportedRegime);
  CHECK_THROWS_AS(wkb_splitting_1d(v, 0.0, hw, 0.5 * hw), UnsupportedRegime);
}

TEST_CASE("nearest-neighbour coupling matches the Coulomb expansion") {
  for (const auto& g : {reference_geometry(), canonical_double_well()}) {
    const double j = coupling_J(g);
    CHECK(j == doctest::Approx(0.1558959270297863).epsilon(1e-9));
    CHECK(std::abs(j / coupling_J_from_taylor(g) - 1.0) < 1e-4);
  }
  DeviceGeometry g;
  g.sphere_radius_a = 9.0;
  CHECK(coupling_J(g) == doctest::Approx(0.15076842620453157).epsilon(1e-9));
  CHECK(std::abs(coupling_J(g) / coupling_J_from_taylor(g) - 1.0) < 1e-4);
  const double L = g.chain_period();
  CHECK(chain_coulomb_energy(g, {0.0, 0.0}) == doctest::Approx(kCoulombKnm / L).epsilon(1e-9));
}

TEST_CASE("longitudinal field term") {
  const auto g = reference_geometry();
  CHECK(longitudinal_gamma(g, 4e-4) == doctest::Approx(1.8567228994480131e-07).epsilon(1e-8));
  CHECK(longitudinal_gamma(g, -4e-4) == doctest::Approx(-1.8567228994480131e-07).epsilon(1e-8));
  CHECK(longitudinal_gamma(g, 0.0) == 0.0);
  CHECK_THROWS_AS(longitudinal_gamma(g, std::numeric_limits<double>::infinity()), InvalidArgument);
}

TEST_CASE("hierarchy and stability reports") {
  const auto g = reference_geometry();
  const auto h = validate_hierarchy(g);
  REQUIRE(h.checks.size() == 3);
  CHECK(h.checks[0].ratio == doctest::Approx(600.0 / 110.0));
  CHECK(h.checks[0].pass);
  CHECK(h.checks[1].ratio == doctest::Approx(110.0 / 60.0));
  CHECK(h.checks[2].ratio == doctest::Approx(6.0));
  CHECK(h.all_pass);

  DeviceGeometry tight = g;
  tight.site_spacing_lambda = 400.0;
  const auto ht = validate_hierarchy(tight);
  CHECK_FALSE(ht.all_pass);
  CHECK(ht.checks[0].warn);

  const auto s = stability_report(g, characterize_well(g));
  CHECK(s.repulsion == doctest::Approx(23.871563826436027).epsilon(1e-9));
  CHECK(s.binding == doctest::Approx(11.591353134368214).epsilon(1e-9));
  CHECK_FALSE(s.stable);
  CHECK_FALSE(s.note.empty());

  const auto c = canonical_double_well();
  const auto sc = stability_report(c, characterize_well(c), 0.5);
  CHECK(sc.binding == doctest::Approx(42.38509653014249).epsilon(1e-8));
  CHECK(sc.stable);
  CHECK(sc.thermal_scale == doctest::Approx(0.1558959270297863).epsilon(1e-9));
  CHECK(sc.thermal_ok);
}

TEST_CASE("derived parameters") {
  const auto single = derive_parameters(reference_geometry(), 4e-4);
  CHECK_FALSE(single.gamma_transverse.has_value());
  CHECK_FALSE(single.gamma_note.empty());
  CHECK_THROWS_AS(effective_params(single), UnsupportedRegime);

  const auto dw = derive_parameters(canonical_double_well(), 4e-4);
  REQUIRE(dw.gamma_transverse.has_value());
  const auto p = effective_params(dw);
  CHECK(p.gamma_transverse == doctest::Approx(0.5187733433909285).epsilon(1e-5));
  CHECK(p.coupling_J == doctest::Approx(0.1558959270297863).epsilon(1e-9));
  CHECK(p.gamma_longitudinal == doctest::Approx(1.8567228994480131e-07).epsilon(1e-8));
  CHECK(p.provenance.size() == 3);
}

TEST_CASE("partial-fraction identity at a million points") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> len(5.0, 200.0), pos(-500.0, 500.0);
  double worst = 0.0;
  for (int geom = 0; geom < 100; ++geom) {
    DeviceGeometry g;
    g.sphere_radius_a = len(rng) * 0.2;
    g.sphere_gap_d = len(rng);
    g.film_height_h = g.sphere_radius_a + len(rng);
    for (int p = 0; p < 10000; ++p) {
      const double x = pos(rng), y = pos(rng);
      const double u = pair_potential(g, x, y);
      worst = std::max(worst, std::abs(u / pair_potential_partial_fractions(g, x, y) - 1.0));
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("double-well criterion against a brute-force scan") {
  // Place beta^2 on either side of 3 alpha^2 and look for a minimum off the axis.
  for (double a : {5.0, 10.0, 20.0}) {
    for (double d : {30.0, 60.0, 120.0}) {
      for (double factor : {0.5, 0.9, 0.99, 1.01, 1.1, 2.0}) {
        DeviceGeometry g;
        g.sphere_radius_a = a;
        g.sphere_gap_d = d;
        const double alpha = g.alpha();
        const double beta2 = factor * 3.0 * alpha * alpha;
        g.film_height_h = std::sqrt(beta2 + a * a);
        const double top = alpha + 3.0 * std::sqrt(beta2);
        const double u0 = pair_potential(g, 0.0, 0.0);
        double lowest = u0;
        for (int i = 1; i <= 20000; ++i) lowest = std::min(lowest, pair_potential(g, 0.0, top * i / 20000.0));
        const bool scanned = lowest < u0 - 1e-12 * std::abs(u0);
        CAPTURE(a);
        CAPTURE(d);
        CAPTURE(factor);
        CHECK(characterize_well(g).is_double_well == scanned);
        CHECK(scanned == (factor < 1.0));
      }
    }
  }
}

TEST_CASE("stationary points have vanishing gradient") {
  const auto g = canonical_double_well();
  const auto w = characterize_well(g);
  const double beta = std::sqrt(g.beta_squared());
  for (double y : w.stationary_points) {
    const double step = 1e-3;
    const double slope = (pair_potential(g, 0.0, y + step) - pair_potential(g, 0.0, y - step)) / (2.0 * step);
    const double curvature =
        (pair_potential(g, 0.0, y + step) - 2.0 * pair_potential(g, 0.0, y) + pair_potential(g, 0.0, y - step)) /
        (step * step);
    CAPTURE(y);
    CHECK(std::abs(slope) < 1e-8 * std::abs(curvature) * beta + 1e-9);
    CHECK(pair_potential(g, step, y) == doctest::Approx(pair_potential(g, -step, y)).epsilon(1e-14));
  }
}

TEST_CASE("tunnelling falls as the film gets thinner") {
  // Fixed a, d, lambda; smaller h deepens the wells and lengthens the action.
  double previous_gamma = 0.0, previous_action = std::numeric_limits<double>::infinity();
  for (double h : {20.0, 30.0, 40.0, 45.0, 50.0}) {
    DeviceGeometry g;
    g.film_height_h = h;
    const auto w = characterize_well(g);
    REQUIRE(w.is_double_well);
    const double gamma = wkb_splitting(g, w);
    CAPTURE(h);
    CHECK(gamma > 0.0);
    CHECK(gamma > previous_gamma);
    CHECK(w.tunnel_action < previous_action);
    previous_gamma = gamma;
    previous_action = w.tunnel_action;
  }
}

TEST_CASE("WKB against the finite-difference splitting of the canonical well") {
  const auto g = canonical_double_well();
  const double wkb = wkb_splitting(g, characterize_well(g));
  // Three-point finite differences on U(0, y), from the oracle test suite.
  const double exact = 0.35066936160063733;
  CHECK(wkb / exact < 3.0);
  CHECK(wkb / exact > 1.0 / 3.0);
}

TEST_CASE("Gamma depends on h far more strongly than J") {
  const double h = 50.0, dh = 0.5;
  auto at = [&](double height) {
    DeviceGeometry g;
    g.film_height_h = height;
    return std::make_pair(wkb_splitting(g, characterize_well(g)), coupling_J(g));
  };
  const auto [g_lo, j_lo] = at(h - dh);
  const auto [g_hi, j_hi] = at(h + dh);
  const double dln = std::log((h + dh) / (h - dh));
  const double gamma_slope = std::abs(std::log(g_hi / g_lo) / dln);
  const double j_slope = std::abs(std::log(j_hi / j_lo) / dln);
  CHECK(gamma_slope > 1.0);
  CHECK(gamma_slope > 10.0 * j_slope);
}

TEST_CASE("coupling and repulsion vanish for distant sites") {
  DeviceGeometry g;
  double previous = 0.0;
  for (double lambda : {1e4, 1e5, 1e6}) {
    g.site_spacing_lambda = lambda;
    const double l = g.chain_period();
    const double scaled = coupling_J(g) * l * l * l;
    if (previous != 0.0) CHECK(scaled == doctest::Approx(previous).epsilon(1e-2));
    previous = scaled;
    CHECK(stability_report(g, characterize_well(g)).repulsion == doctest::Approx(kCoulombKnm / l).epsilon(1e-9));
  }
  g.site_spacing_lambda = 1e9;
  CHECK(coupling_J(g) < 1e-18);
  CHECK(stability_report(g, characterize_well(g)).repulsion < 1e-4);
}

TEST_CASE("first-order Coulomb terms cancel in the chain interior") {
  const auto g = reference_geometry();
  const double l = g.chain_period();
  const int n = 6;
  const double step = 1e-2;
  for (int j = 0; j < n; ++j) {
    std::vector<double> plus(n, 0.0), minus(n, 0.0);
    plus[j] = step;
    minus[j] = -step;
    const double force = (chain_coulomb_energy(g, plus) - chain_coulomb_energy(g, minus)) / (2.0 * step);
    CAPTURE(j);
    if (j == 0) {
      CHECK(force == doctest::Approx(kCoulombKnm / (l * l)).epsilon(1e-6));
    } else if (j == n - 1) {
      CHECK(force == doctest::Approx(-kCoulombKnm / (l * l)).epsilon(1e-6));
    } else {
      CHECK(std::abs(force) < 1e-9 * kCoulombKnm / (l * l));
    }
  }
}

TEST_CASE("longitudinal term is linear in the field") {
  const auto g = reference_geometry();
  for (double e : {1e-6, 4e-4, 3.0}) CHECK(longitudinal_gamma(g, 2.0 * e) == doctest::Approx(2.0 * longitudinal_gamma(g, e)).epsilon(1e-14));
  CHECK(longitudinal_gamma(g, 4e-4) / 1e-7 > 1.0 / 3.0);
  CHECK(longitudinal_gamma(g, 4e-4) / 1e-7 < 3.0);
}

TEST_CASE("hierarchy failures") {
  DeviceGeometry big_spheres;
  big_spheres.sphere_radius_a = 50.0;
  const auto hb = validate_hierarchy(big_spheres);
  CHECK(hb.checks[2].ratio == doctest::Approx(1.2));
  CHECK_FALSE(hb.checks[2].pass);
  CHECK_FALSE(hb.all_pass);

  DeviceGeometry level;
  level.film_height_h = level.sphere_gap_d;
  const auto hl = validate_hierarchy(level);
  CHECK(hl.checks[1].ratio == doctest::Approx(1.0));
  CHECK_FALSE(hl.checks[1].pass);
  CHECK_FALSE(hl.all_pass);
}

TEST_CASE("binding and repulsion against the quoted magnitudes") {
  const auto g = reference_geometry();
  const auto s = stability_report(g, characterize_well(g));
  CHECK(s.binding / 13.0 > 0.5);
  CHECK(s.binding / 13.0 < 2.0);
  CHECK(s.repulsion / 11.0 > 1.0 / 3.0);
  CHECK(s.repulsion / 11.0 < 3.0);
}
