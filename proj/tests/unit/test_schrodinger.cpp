#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "helium/constants.hpp"
#include "helium/device_model.hpp"
#include "helium/errors.hpp"
#include "helium/schrodinger.hpp"

using namespace helium;
using namespace helium::oracle;

namespace {

double h2m() { return constants().hbar2_over_me_K_nm2(); }

// Harmonic potential with quantum hw (K).
Potential1D harmonic(double hw) {
  const double k = hw * hw / h2m();
  return [k](double y) { return 0.5 * k * y * y; };
}

Potential1D quartic(double v0, double y0) {
  return [=](double y) {
    const double t = y * y / (y0 * y0) - 1.0;
    return v0 * t * t;
  };
}

double instanton_splitting(double v0, double y0) {
  const double hw = std::sqrt(h2m() * 8.0 * v0 / (y0 * y0));
  const double s0 = 16.0 / 3.0 * v0 / hw;
  return 2.0 * hw * std::sqrt(6.0 * s0 / std::numbers::pi) * std::exp(-s0) * (1.0 - 71.0 / (72.0 * s0));
}

double rel(double a, double b) { return std::abs(a / b - 1.0); }

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(GridSpec::line(10.0, 64).validate(), InvalidArgument);
  CHECK_THROWS_AS(GridSpec::line(10.0, 63).validate(), InvalidArgument);
  CHECK_THROWS_AS(GridSpec::line(-1.0, 65).validate(), InvalidArgument);
  CHECK_NOTHROW(GridSpec::line(10.0, 65).validate());
  CHECK(GridSpec::line(10.0, 65).spacing(0) == doctest::Approx(20.0 / 64.0));
  CHECK_THROWS_AS(solve_1d(harmonic(1.0), GridSpec::line(100.0, 65), 1), InvalidArgument);
  CHECK_THROWS_AS(solve_1d(harmonic(1.0), GridSpec::plane(100.0, 100.0, 65, 65), 2), InvalidArgument);
  SolveOptions bad;
  bad.stencil_order = 3;
  CHECK_THROWS_AS(solve_1d(harmonic(1.0), GridSpec::line(100.0, 65), 2, bad), InvalidArgument);
}

TEST_CASE("harmonic oscillator ladder") {
  const double hw = 2.0;
  for (int order : {2, 4}) {
    SolveOptions o;
    o.stencil_order = order;
    const auto r = solve_1d(harmonic(hw), GridSpec::line(150.0, 129), 4, o);
    REQUIRE(r.energies.size() == 4);
    for (int n = 0; n < 4; ++n) {
      CAPTURE(order);
      CAPTURE(n);
      CHECK(rel(r.energies[n], hw * (n + 0.5)) < 1e-3);
      CHECK(r.parities[n] == (n % 2 == 0 ? Parity::Even : Parity::Odd));
      CHECK(r.residuals[n] < 1e-8);
    }
    CHECK_FALSE(r.provenance.empty());
    CHECK(r.history.size() == static_cast<std::size_t>(r.doublings + 1));
  }
}

TEST_CASE("particle in a box") {
  const double half = 50.0, width = 2.0 * half;
  SolveOptions o;
  o.max_box_growths = 0;
  const auto r = solve_1d([](double) { return 0.0; }, GridSpec::line(half, 257), 4, o);
  for (int n = 1; n <= 4; ++n) {
    const double exact = n * n * std::numbers::pi * std::numbers::pi * h2m() / (2.0 * width * width);
    CAPTURE(n);
    CHECK(rel(r.energies[n - 1], exact) < 5e-3);
  }
  CHECK(r.box_growths == 0);
}

TEST_CASE("box grows until the states vanish at the edge") {
  const auto r = solve_1d(harmonic(2.0), GridSpec::line(40.0, 65), 2);
  CHECK(r.box_growths > 0);
  CHECK(r.grid.extent[0] > 40.0);
  CHECK(rel(r.energies[0], 1.0) < 1e-3);
}

TEST_CASE("moderate quartic well against an independent tridiagonal solve") {
  // Lowest three levels of V = 3 K (y^2/30^2 - 1)^2, from a SciPy
  // tridiagonal eigensolve on 8193 points over [-100, 100] nm.
  const auto r = solve_1d(quartic(3.0, 30.0), GridSpec::line(100.0, 257), 3);
  CHECK(rel(r.energies[0], 1.86098694) < 2e-3);
  CHECK(rel(r.energies[1], 2.41629854) < 2e-3);
  CHECK(rel(r.energies[2], 5.16769691) < 2e-3);
  const auto s = splitting_and_parity(r);
  CHECK(rel(s.splitting, 0.5553116041734674) < 1e-2);
  REQUIRE(s.next_gap.has_value());
  CHECK(*s.next_gap == doctest::Approx(r.energies[2] - r.energies[1]));
}

TEST_CASE("deep quartic splitting: two stencils and the instanton formula") {
  for (double v0 : {50.0, 100.0, 200.0}) {
    CAPTURE(v0);
    const double y0 = 60.0;
    SolveOptions second, fourth;
    fourth.stencil_order = 4;
    const auto r2 = solve_1d(quartic(v0, y0), GridSpec::line(2.0 * y0, 1025), 2, second);
    const auto r4 = solve_1d(quartic(v0, y0), GridSpec::line(2.0 * y0, 1025), 2, fourth);
    REQUIRE(r2.doublet_splitting.has_value());
    REQUIRE(r4.doublet_splitting.has_value());
    const double s2 = splitting_and_parity(r2).splitting;
    const double s4 = splitting_and_parity(r4).splitting;
    CHECK(s2 > 0.0);
    CHECK(rel(s2, s4) < 1e-2);
    CHECK(rel(s4, instanton_splitting(v0, y0)) < 1e-2);
    CHECK(splitting_and_parity(r4).wannier_localization > kTwoLevelLocalization);
  }
}

TEST_CASE("WKB against the oracle on the deep quartic") {
  const double v0 = 200.0, y0 = 60.0;
  const double hw = std::sqrt(h2m() * 8.0 * v0 / (y0 * y0));
  REQUIRE(v0 >= 10.0 * hw);
  SolveOptions o;
  o.stencil_order = 4;
  const auto r = solve_1d(quartic(v0, y0), GridSpec::line(2.0 * y0, 1025), 2, o);
  const double exact = splitting_and_parity(r).splitting;
  const double wkb = wkb_splitting_1d(quartic(v0, y0), y0, hw, 0.5 * hw).splitting;
  CHECK(wkb / exact > 0.5);
  CHECK(wkb / exact < 2.0);
}

TEST_CASE("harmonic well is flagged as not two-level") {
  const auto r = solve_1d(harmonic(2.0), GridSpec::line(150.0, 129), 3);
  const auto s = splitting_and_parity(r);
  CHECK(s.splitting == doctest::Approx(2.0).epsilon(2e-3));
  // Half-plane mass of (psi0 + psi1)/sqrt2 for the oscillator is 1/2 + 1/sqrt(2 pi).
  CHECK(s.wannier_localization == doctest::Approx(0.5 + 1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(2e-3));
  CHECK_FALSE(s.two_level);
}

TEST_CASE("canonical double well cut along the symmetry axis") {
  DeviceGeometry g;
  g.film_height_h = 50.0;
  const double beta = std::sqrt(g.beta_squared());
  const auto u = [&](double y) { return pair_potential(g, 0.0, y); };
  const auto r = solve_1d(u, GridSpec::line(g.alpha() + 3.0 * beta, 1025), 3);
  const auto s = splitting_and_parity(r);
  // SciPy tridiagonal reference on 8193 points.
  CHECK(rel(s.splitting, 0.35066936160063733) < 1e-2);
  CHECK(s.wannier_localization > kTwoLevelLocalization);
  CHECK(s.two_level);
}

TEST_CASE("reference geometry cut is not a tunnel doublet") {
  DeviceGeometry g;
  const double beta = std::sqrt(g.beta_squared());
  const auto u = [&](double y) { return pair_potential(g, 0.0, y); };
  const auto r = solve_1d(u, GridSpec::line(g.alpha() + 3.0 * beta, 1025), 3);
  const auto s = splitting_and_parity(r);
  CHECK(s.wannier_localization < kTwoLevelLocalization);
  CHECK_FALSE(s.two_level);
}

TEST_CASE("two-dimensional isotropic oscillator") {
  const double hw = 2.0;
  const double k = hw * hw / h2m();
  const auto v = [k](double x, double y) { return 0.5 * k * (x * x + y * y); };
  const auto r = solve_2d(v, GridSpec::plane(130.0, 130.0, 65, 65), 6);
  REQUIRE(r.energies.size() == 6);
  const double expected[] = {2.0, 4.0, 4.0, 6.0, 6.0, 6.0};
  for (int i = 0; i < 6; ++i) {
    CAPTURE(i);
    CHECK(rel(r.energies[i], expected[i]) < 5e-3);
  }
  CHECK(r.parities[0] == Parity::Even);
}

TEST_CASE("anisotropic well violates the doublet structure") {
  // Softer along x: the first excited state is odd in x and even in y.
  const double kx = 1.0 / h2m(), ky = 16.0 / h2m();
  const auto v = [=](double x, double y) { return 0.5 * (kx * x * x + ky * y * y); };
  SolveOptions o;
  o.refine = false;
  const auto r = solve_2d(v, GridSpec::plane(200.0, 80.0, 65, 65), 2, o);
  CHECK(r.parities[1] == Parity::Even);
  CHECK_THROWS_AS(splitting_and_parity(r), RegimeViolation);
  CHECK_THROWS_AS(solve_2d(v, GridSpec::plane(200.0, 80.0, 65, 65), 2, SolveOptions{.stencil_order = 4}),
                  InvalidArgument);
}

TEST_CASE("separable plane problem composes from line problems") {
  const auto vx = harmonic(2.0);
  const auto vy = quartic(3.0, 30.0);
  const auto rx = solve_1d(vx, GridSpec::line(130.0, 257), 3);
  const auto ry = solve_1d(vy, GridSpec::line(100.0, 257), 3);
  std::vector<double> sums;
  for (double ex : rx.energies)
    for (double ey : ry.energies) sums.push_back(ex + ey);
  std::sort(sums.begin(), sums.end());

  const auto r = solve_2d([&](double x, double y) { return vx(x) + vy(y); }, GridSpec::plane(130.0, 100.0, 65, 65), 4);
  for (int i = 0; i < 4; ++i) {
    CAPTURE(i);
    CHECK(rel(r.energies[i], sums[i]) < 5e-3);
  }
  // The lowest pair is the y-doublet in the x ground state.
  const auto s = splitting_and_parity(r);
  CHECK(rel(s.splitting, ry.energies[1] - ry.energies[0]) < 1e-2);
}

TEST_CASE("canonical double well in the plane") {
  DeviceGeometry g;
  g.film_height_h = 50.0;
  const double beta = std::sqrt(g.beta_squared());
  const auto u = [&](double x, double y) { return pair_potential(g, x, y); };
  const auto r = solve_2d(u, GridSpec::plane(3.0 * beta, g.alpha() + 3.0 * beta, 65, 65), 3);
  REQUIRE(r.parities.size() == 3);
  CHECK(r.parities[0] == Parity::Even);
  CHECK(r.parities[1] == Parity::Odd);
  CHECK(r.energies[0] >= r.potential_min);
  for (double res : r.residuals) CHECK(res < 1e-8);
  const auto s = splitting_and_parity(r);
  CHECK(s.two_level);
  CHECK(s.splitting > 0.0);
}

TEST_CASE("three-point energies approach the limit from below") {
  // The three-point Laplacian underestimates the kinetic energy of smooth
  // states, so each refinement raises the levels.
  DeviceGeometry g;
  g.film_height_h = 50.0;
  const double beta = std::sqrt(g.beta_squared());
  const std::vector<std::pair<Potential1D, double>> cases = {
      {harmonic(2.0), 150.0},
      {quartic(3.0, 30.0), 100.0},
      {[&](double y) { return pair_potential(g, 0.0, y); }, g.alpha() + 3.0 * beta}};
  const auto rising = [](const std::vector<std::vector<double>>& levels) {
    for (std::size_t lvl = 1; lvl < levels.size(); ++lvl)
      for (int i = 0; i < 3; ++i)
        if (levels[lvl][i] < levels[lvl - 1][i] - 1e-12 * std::abs(levels[lvl][i])) return false;
    return true;
  };
  for (const auto& [v, half] : cases) {
    const auto automatic = solve_1d(v, GridSpec::line(half, 65), 3);
    CHECK(automatic.history.size() >= 2);
    CHECK(rising(automatic.history));

    SolveOptions fixed;
    fixed.refine = false;
    fixed.max_box_growths = 0;
    std::vector<std::vector<double>> levels;
    for (int points : {65, 129, 257, 513, 1025})
      levels.push_back(solve_1d(v, GridSpec::line(half, points), 3, fixed).energies);
    CHECK(rising(levels));
  }
}

TEST_CASE("refinement that cannot converge is reported") {
  SolveOptions o;
  o.max_doublings = 0;
  CHECK_THROWS_AS(solve_1d(harmonic(2.0), GridSpec::line(150.0, 65), 2, o), ConvergenceFailure);
  o.max_doublings = 1;
  o.refine_tolerance = 1e-14;
  CHECK_THROWS_AS(solve_1d(harmonic(2.0), GridSpec::line(150.0, 65), 2, o), ConvergenceFailure);
}
