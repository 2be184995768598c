#include "helium/ising/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include "helium/errors.hpp"
#include "helium/ising/dense.hpp"
#include "helium/ising/fermion.hpp"
#include "helium/numerics/lanczos.hpp"

namespace helium::ising {

namespace {

// Fourth-order commutator-free Magnus: two exponentials per step, built from
// the generator at the two Gauss points.
const double kRoot3 = std::sqrt(3.0);
const double kNodeEarly = 0.5 - kRoot3 / 6.0;
const double kNodeLate = 0.5 + kRoot3 / 6.0;
const double kWeightSmall = (3.0 - 2.0 * kRoot3) / 12.0;
const double kWeightLarge = (3.0 + 2.0 * kRoot3) / 12.0;

IsingChain blend(const IsingChain& a, const IsingChain& b, double wa, double wb) {
  if (a.n != b.n || a.boundary != b.boundary) throw InvalidArgument("schedule: chain shape changes during the sweep");
  IsingChain c = a;
  for (std::size_t i = 0; i < c.gamma_x.size(); ++i) c.gamma_x[i] = wa * a.gamma_x[i] + wb * b.gamma_x[i];
  for (std::size_t i = 0; i < c.gamma_z.size(); ++i) c.gamma_z[i] = wa * a.gamma_z[i] + wb * b.gamma_z[i];
  for (std::size_t i = 0; i < c.coupling.size(); ++i) c.coupling[i] = wa * a.coupling[i] + wb * b.coupling[i];
  return c;
}

// The two generators of the step starting at t, each scaled so that the
// exponent is (h/2) * generator.
std::pair<IsingChain, IsingChain> magnus_generators(const ChainProfile& profile, double t, double h) {
  const IsingChain early = profile(t + kNodeEarly * h);
  const IsingChain late = profile(t + kNodeLate * h);
  return {blend(early, late, 2.0 * kWeightLarge, 2.0 * kWeightSmall),
          blend(early, late, 2.0 * kWeightSmall, 2.0 * kWeightLarge)};
}

void check_schedule(const SweepSchedule& s) {
  if (!s.profile) throw InvalidArgument("schedule: no profile");
  if (!(s.duration >= 0.0) || !std::isfinite(s.duration)) throw InvalidArgument("schedule: duration must be >= 0");
  if (!(s.tolerance > 0.0)) throw InvalidArgument("schedule: tolerance must be > 0");
}

double max_abs_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

template <class Run, class Observe>
auto step_doubling(const SweepSchedule& schedule, std::size_t first, Run run, Observe observe) {
  std::size_t steps = std::max<std::size_t>(first, 1);
  auto previous = run(steps);
  auto previous_obs = observe(previous);
  double last_change = 0.0;
  while (true) {
    if (2 * steps > schedule.max_steps) {
      throw IntegrationFailure("time evolution: step doubling reached " + std::to_string(steps) +
                               " steps without meeting tolerance (last change " + std::to_string(last_change) + ")");
    }
    steps *= 2;
    auto current = run(steps);
    auto current_obs = observe(current);
    last_change = max_abs_difference(previous_obs, current_obs);
    if (last_change < schedule.tolerance) return std::make_tuple(std::move(current), steps, last_change);
    previous = std::move(current);
    previous_obs = std::move(current_obs);
  }
}

// ---- Majorana propagation -------------------------------------------------

struct MajoranaGenerator {
  std::vector<double> chain;  // A(p, p+1)
  double corner = 0.0;        // A(0, 2n-1)
  double bound = 0.0;         // spectral radius bound of A
};

MajoranaGenerator majorana_generator(const IsingChain& c, int parity) {
  if (c.has_longitudinal_field()) throw UnsupportedModel("quadratic evolution needs gamma_z = 0 throughout the sweep");
  const int n = c.n;
  MajoranaGenerator g;
  g.chain.assign(2 * n - 1, 0.0);
  for (int j = 0; j < n; ++j) {
    g.chain[2 * j] = 2.0 * c.gamma_x[j];
    if (j + 1 < n) g.chain[2 * j + 1] = 2.0 * c.coupling[j];
  }
  if (c.boundary == Boundary::Periodic) g.corner = 2.0 * parity * c.coupling[n - 1];
  const std::size_t dim = 2 * static_cast<std::size_t>(n);
  for (std::size_t p = 0; p < dim; ++p) {
    double row = 0.0;
    if (p + 1 < dim) row += std::abs(g.chain[p]);
    if (p > 0) row += std::abs(g.chain[p - 1]);
    if (p == 0 || p + 1 == dim) row += std::abs(g.corner);
    g.bound = std::max(g.bound, row);
  }
  return g;
}

// y = scale * A x (+ add) for one contiguous column of length dim.
inline void generator_column(const MajoranaGenerator& g, double scale, const double* x, const double* add, double* y,
                             std::size_t dim) {
  const double* a = g.chain.data();
  y[0] = scale * a[0] * x[1];
  for (std::size_t p = 1; p + 1 < dim; ++p) y[p] = scale * (a[p] * x[p + 1] - a[p - 1] * x[p - 1]);
  y[dim - 1] = -scale * a[dim - 2] * x[dim - 2];
  if (g.corner != 0.0) {
    y[0] += scale * g.corner * x[dim - 1];
    y[dim - 1] -= scale * g.corner * x[0];
  }
  if (add) {
    for (std::size_t p = 0; p < dim; ++p) y[p] += add[p];
  }
}

// x <- exp(h A) x. With Y = A / bound, exp(h A) = J_0(t) + 2 sum_k J_k(t) P_k(Y)
// where t = h * bound and P_{k+1} = 2 Y P_k + P_{k-1}: the real form of the
// Chebyshev expansion for an antisymmetric generator. Columns are independent,
// so the recursion runs on one cache-sized block of columns at a time.
void apply_exponential(const MajoranaGenerator& g, double h, Eigen::MatrixXd& x) {
  const double theta = h * g.bound;
  if (theta == 0.0) return;
  const double scale = 1.0 / g.bound;
  std::vector<double> coeff{std::cyl_bessel_j(0.0, theta)};
  for (int k = 1;; ++k) {
    const double c = std::cyl_bessel_j(static_cast<double>(k), theta);
    coeff.push_back(2.0 * c);
    if (k > theta && std::abs(c) < 1e-17) break;
  }

  const std::size_t dim = static_cast<std::size_t>(x.rows());
  std::vector<double> prev(dim), cur(dim), next(dim), sum(dim);
  for (Eigen::Index col = 0; col < x.cols(); ++col) {
    double* xc = x.col(col).data();
    std::copy(xc, xc + dim, prev.begin());
    generator_column(g, scale, prev.data(), nullptr, cur.data(), dim);
    for (std::size_t p = 0; p < dim; ++p) sum[p] = coeff[0] * prev[p] + coeff[1] * cur[p];
    for (std::size_t k = 2; k < coeff.size(); ++k) {
      generator_column(g, 2.0 * scale, cur.data(), prev.data(), next.data(), dim);
      const double c = coeff[k];
      for (std::size_t p = 0; p < dim; ++p) sum[p] += c * next[p];
      std::swap(prev, cur);
      std::swap(cur, next);
    }
    std::copy(sum.begin(), sum.end(), xc);
  }
}

struct MajoranaObservables {
  std::vector<double> bond_zz, mx;
};

// Entries of G = K G' K^T needed for bonds and transverse fields, O(n^2).
MajoranaObservables majorana_observables(const Eigen::MatrixXd& k, const std::vector<int>& occupation,
                                         Boundary boundary, int parity) {
  const Eigen::MatrixXd kt = k.transpose();
  const Eigen::Index dim = k.rows();
  const int n = static_cast<int>(dim / 2);
  auto entry = [&](Eigen::Index a, Eigen::Index b) {
    const double* ra = kt.col(a).data();
    const double* rb = kt.col(b).data();
    double s = 0.0;
    for (int m = 0; m < n; ++m) {
      const double g = occupation[m] ? 1.0 : -1.0;
      s += g * (ra[2 * m] * rb[2 * m + 1] - ra[2 * m + 1] * rb[2 * m]);
    }
    return s;
  };
  MajoranaObservables o;
  for (int j = 0; j + 1 < n; ++j) o.bond_zz.push_back(-entry(2 * j + 1, 2 * j + 2));
  if (boundary == Boundary::Periodic) o.bond_zz.push_back(parity * entry(dim - 1, 0));
  for (int j = 0; j < n; ++j) o.mx.push_back(-entry(2 * j, 2 * j + 1));
  return o;
}

}  // namespace

SweepSchedule SweepSchedule::linear(const IsingChain& start, const IsingChain& end, double duration) {
  start.validate();
  end.validate();
  if (start.n != end.n || start.boundary != end.boundary) throw InvalidArgument("linear schedule: chain shapes differ");
  if (!(duration > 0.0)) throw InvalidArgument("linear schedule: duration must be > 0");
  SweepSchedule s;
  s.duration = duration;
  s.profile = [start, end, duration](double t) {
    const double f = std::clamp(t / duration, 0.0, 1.0);
    return blend(start, end, 1.0 - f, f);
  };
  return s;
}

SweepSchedule SweepSchedule::transverse_ramp(const IsingChain& base, double gamma_start, double gamma_end,
                                             double tau_q) {
  base.validate();
  const double j = std::abs(base.mean_coupling());
  if (!(j > 0.0)) throw InvalidArgument("transverse ramp: needs a nonzero coupling to set the rate");
  if (!(tau_q > 0.0)) throw InvalidArgument("transverse ramp: tau_q must be > 0");
  if (gamma_start == gamma_end) throw InvalidArgument("transverse ramp: start and end fields coincide");
  IsingChain start = base, end = base;
  std::fill(start.gamma_x.begin(), start.gamma_x.end(), gamma_start);
  std::fill(end.gamma_x.begin(), end.gamma_x.end(), gamma_end);
  return linear(start, end, tau_q * std::abs(gamma_start - gamma_end) / j);
}

EvolveResult evolve(const SweepSchedule& schedule, const DenseState& initial) {
  check_schedule(schedule);
  const IsingChain first = schedule.profile(0.0);
  first.validate();
  if (first.n != initial.n) throw InvalidArgument("evolve: state and chain sizes differ");
  if (schedule.duration == 0.0) return {initial, 0, 0.0};

  auto run = [&](std::size_t steps) {
    DenseState psi = initial;
    const double h = schedule.duration / static_cast<double>(steps);
    std::span<std::complex<double>> view(psi.amplitudes);
    for (std::size_t s = 0; s < steps; ++s) {
      const auto [g1, g2] = magnus_generators(schedule.profile, s * h, h);
      for (const IsingChain* g : {&g1, &g2}) {
        const HamiltonianOperator op(*g);
        numerics::apply_propagator(
            [&op](std::span<const std::complex<double>> x, std::span<std::complex<double>> y) { op.apply(x, y); },
            view, 0.5 * h);
      }
    }
    return psi;
  };
  auto observe = [&](const DenseState& psi) {
    const auto r = observables(psi, first.boundary);
    std::vector<double> v = r.mz;
    v.insert(v.end(), r.mx.begin(), r.mx.end());
    const auto zz = bond_correlators(psi, first.boundary);
    v.insert(v.end(), zz.begin(), zz.end());
    return v;
  };
  const std::size_t first_steps =
      schedule.initial_steps ? schedule.initial_steps : std::max<std::size_t>(8, std::ceil(schedule.duration));
  auto [psi, steps, change] = step_doubling(schedule, first_steps, run, observe);
  return {std::move(psi), steps, change};
}

QuadraticEvolveResult evolve_quadratic(const SweepSchedule& schedule, const QuadraticEvolveOptions& options) {
  check_schedule(schedule);
  const IsingChain first = schedule.profile(0.0);
  const auto ground = free_fermion_solve(first, {.want_modes = true});
  const int parity = ground.ground_parity;
  const Boundary boundary = first.boundary;

  auto run = [&](std::size_t steps) {
    Eigen::MatrixXd k = ground.modes;
    if (schedule.duration == 0.0) return k;
    const double h = schedule.duration / static_cast<double>(steps);
    for (std::size_t s = 0; s < steps; ++s) {
      const auto [g1, g2] = magnus_generators(schedule.profile, s * h, h);
      apply_exponential(majorana_generator(g1, parity), 0.5 * h, k);
      apply_exponential(majorana_generator(g2, parity), 0.5 * h, k);
    }
    return k;
  };
  auto observe = [&](const Eigen::MatrixXd& k) {
    const auto o = majorana_observables(k, ground.occupation, boundary, parity);
    std::vector<double> v = o.bond_zz;
    v.insert(v.end(), o.mx.begin(), o.mx.end());
    return v;
  };

  Eigen::MatrixXd k;
  QuadraticEvolveResult out;
  if (schedule.duration == 0.0) {
    k = ground.modes;
  } else {
    const std::size_t first_steps = schedule.initial_steps
                                        ? schedule.initial_steps
                                        : std::max<std::size_t>(4, std::ceil(0.5 * schedule.duration));
    auto [kk, steps, change] = step_doubling(schedule, first_steps, run, observe);
    k = std::move(kk);
    out.steps = steps;
    out.step_change = change;
  }
  const auto o = majorana_observables(k, ground.occupation, boundary, parity);
  out.bond_zz = o.bond_zz;
  out.mx = o.mx;
  double kinks = 0.0;
  for (double c : out.bond_zz) kinks += 0.5 * (1.0 - c);
  out.kink_density = out.bond_zz.empty() ? 0.0 : kinks / static_cast<double>(out.bond_zz.size());
  if (options.keep_correlation) {
    Eigen::MatrixXd g0 = Eigen::MatrixXd::Zero(k.rows(), k.cols());
    for (int m = 0; m < first.n; ++m) {
      const double s = ground.occupation[m] ? 1.0 : -1.0;
      g0(2 * m, 2 * m + 1) = s;
      g0(2 * m + 1, 2 * m) = -s;
    }
    out.correlation = k * g0 * k.transpose();
  }
  return out;
}

}  // namespace helium::ising
