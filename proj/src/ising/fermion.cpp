#include "helium/ising/fermion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/SVD>

#include "helium/errors.hpp"

namespace helium::ising {

namespace {

void require_quadratic(const IsingChain& chain) {
  chain.validate();
  if (chain.has_longitudinal_field()) {
    throw UnsupportedModel("free-fermion solution needs gamma_z = 0 on every site");
  }
}

// Rows index the even Majoranas, columns the odd ones: A(2i, 2j+1) = M(i, j).
Eigen::MatrixXd coupling_block(const IsingChain& chain, int parity) {
  const int n = chain.n;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) m(j, j) = 2.0 * chain.gamma_x[j];
  for (int j = 0; j + 1 < n; ++j) m(j + 1, j) = -2.0 * chain.coupling[j];
  if (chain.boundary == Boundary::Periodic) m(0, n - 1) += 2.0 * parity * chain.coupling[n - 1];
  return m;
}

// Sign of the Pfaffian of A, which equals the fermion parity of the
// quasiparticle vacuum. Only two perfect matchings survive in a ring.
int vacuum_parity(const IsingChain& chain, int parity) {
  auto signed_log = [](const std::vector<double>& f, std::size_t count, double scale) {
    int sign = scale < 0 ? -1 : 1;
    double log_abs = std::log(std::abs(scale));
    for (std::size_t i = 0; i < count; ++i) {
      if (f[i] == 0.0) return std::pair<int, double>{0, -std::numeric_limits<double>::infinity()};
      if (f[i] < 0) sign = -sign;
      log_abs += std::log(std::abs(f[i]));
    }
    return std::pair<int, double>{sign, log_abs};
  };
  const auto [s1, l1] = signed_log(chain.gamma_x, chain.gamma_x.size(), 1.0);
  if (chain.boundary == Boundary::Open) return s1 < 0 ? -1 : 1;
  const auto [s2, l2] = signed_log(chain.coupling, chain.coupling.size(), static_cast<double>(parity));
  if (s1 == 0 && s2 == 0) return parity;
  if (s2 == 0 || (s1 != 0 && l1 > l2)) return s1;
  if (s1 == 0 || l2 > l1) return s2;
  // |term1| == |term2|: either they cancel (a zero mode, both parities are
  // degenerate) or they add.
  return s1 == s2 ? s1 : parity;
}

struct SectorSpectrum {
  std::vector<double> lambda;  // ascending
  Eigen::MatrixXd u, v;        // columns matched to lambda
};

SectorSpectrum sector_spectrum(const IsingChain& chain, int parity, bool vectors) {
  const Eigen::MatrixXd m = coupling_block(chain, parity);
  const unsigned flags = vectors ? (Eigen::ComputeFullU | Eigen::ComputeFullV) : 0u;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, flags);
  const auto& s = svd.singularValues();
  const int n = chain.n;
  SectorSpectrum out;
  out.lambda.resize(n);
  // Singular values come in descending order.
  for (int k = 0; k < n; ++k) out.lambda[k] = 0.5 * s(n - 1 - k);
  if (vectors) {
    out.u = svd.matrixU().rowwise().reverse();
    out.v = svd.matrixV().rowwise().reverse();
  }
  return out;
}

// Eigenvalues of the zero-diagonal tridiagonal with off-diagonal `e` come in
// +- pairs; the positive half, halved, is the open-chain mode spectrum.
std::vector<double> open_spectrum_bisection(const IsingChain& chain) {
  const int n = chain.n;
  const std::size_t dim = 2 * static_cast<std::size_t>(n);
  std::vector<double> e2(dim - 1);
  double bound = 0.0;
  for (int j = 0; j < n; ++j) {
    e2[2 * j] = 4.0 * chain.gamma_x[j] * chain.gamma_x[j];
    if (j + 1 < n) e2[2 * j + 1] = 4.0 * chain.coupling[j] * chain.coupling[j];
  }
  for (std::size_t i = 0; i < dim; ++i) {
    double row = 0.0;
    if (i > 0) row += std::sqrt(e2[i - 1]);
    if (i + 1 < dim) row += std::sqrt(e2[i]);
    bound = std::max(bound, row);
  }
  const double tiny = std::numeric_limits<double>::min();
  auto count_below = [&](double sigma) {
    std::size_t count = 0;
    double q = -sigma;
    for (std::size_t i = 0;; ++i) {
      if (q == 0.0) q = -tiny;
      if (q < 0.0) ++count;
      if (i + 1 == dim) break;
      q = -sigma - e2[i] / q;
    }
    return count;
  };
  std::vector<double> lambda(n);
  for (int k = 0; k < n; ++k) {
    const std::size_t index = static_cast<std::size_t>(n + k);
    double lo = 0.0, hi = bound * (1.0 + 1e-12) + tiny;
    for (int it = 0; it < 2000 && hi - lo > 2.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (count_below(mid) > index) hi = mid;
      else lo = mid;
    }
    lambda[k] = 0.25 * (lo + hi);
  }
  std::sort(lambda.begin(), lambda.end());
  return lambda;
}

Eigen::MatrixXd assemble_modes(const SectorSpectrum& s, int n) {
  Eigen::MatrixXd o = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      o(2 * j, 2 * k) = s.u(j, k);
      o(2 * j + 1, 2 * k + 1) = s.v(j, k);
    }
  return o;
}

}  // namespace

Eigen::MatrixXd majorana_matrix(const IsingChain& chain, int parity_sector) {
  require_quadratic(chain);
  if (parity_sector != 1 && parity_sector != -1) throw InvalidArgument("majorana_matrix: parity must be +1 or -1");
  const int n = chain.n;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    a(2 * j, 2 * j + 1) = 2.0 * chain.gamma_x[j];
    if (j + 1 < n) a(2 * j + 1, 2 * j + 2) = 2.0 * chain.coupling[j];
  }
  if (chain.boundary == Boundary::Periodic) a(0, 2 * n - 1) += 2.0 * parity_sector * chain.coupling[n - 1];
  return a - a.transpose();
}

Eigen::MatrixXd FermionSolution::ground_correlation() const {
  if (modes.size() == 0) throw InvalidArgument("ground_correlation: solution was computed without modes");
  Eigen::MatrixXd g0 = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    const double s = occupation[k] ? 1.0 : -1.0;
    g0(2 * k, 2 * k + 1) = s;
    g0(2 * k + 1, 2 * k) = -s;
  }
  return modes * g0 * modes.transpose();
}

FermionSolution free_fermion_solve(const IsingChain& chain, const FermionOptions& options) {
  require_quadratic(chain);
  const int n = chain.n;
  FermionSolution sol;
  sol.n = n;
  sol.boundary = chain.boundary;
  sol.occupation.assign(n, 0);

  if (chain.boundary == Boundary::Open) {
    if (options.want_modes) {
      const auto s = sector_spectrum(chain, 1, true);
      sol.mode_energies = s.lambda;
      sol.modes = assemble_modes(s, n);
    } else {
      sol.mode_energies = open_spectrum_bisection(chain);
    }
    sol.ground_parity = vacuum_parity(chain, 1);
    const auto& l = sol.mode_energies;
    sol.ground_energy = -std::accumulate(l.begin(), l.end(), 0.0);
    sol.gap = 2.0 * l[0];
    sol.sector_gap = n >= 2 ? 2.0 * (l[0] + l[1]) : std::numeric_limits<double>::infinity();
    return sol;
  }

  struct Sector {
    int parity;
    SectorSpectrum spec;
    bool matched;
    double lowest, next;
  };
  std::vector<Sector> sectors;
  for (int p : {1, -1}) {
    Sector s{p, sector_spectrum(chain, p, options.want_modes), vacuum_parity(chain, p) == p, 0.0, 0.0};
    const auto& l = s.spec.lambda;
    const double vac = -std::accumulate(l.begin(), l.end(), 0.0);
    if (s.matched) {
      s.lowest = vac;
      s.next = vac + 2.0 * (l[0] + l[1]);
    } else {
      s.lowest = vac + 2.0 * l[0];
      s.next = vac + 2.0 * l[1];
    }
    sectors.push_back(std::move(s));
  }
  const Sector& g = sectors[1].lowest < sectors[0].lowest ? sectors[1] : sectors[0];
  const Sector& other = &g == &sectors[0] ? sectors[1] : sectors[0];
  std::vector<double> levels{g.lowest, g.next, other.lowest, other.next};
  std::sort(levels.begin(), levels.end());
  sol.ground_parity = g.parity;
  sol.mode_energies = g.spec.lambda;
  sol.ground_energy = g.lowest;
  sol.gap = levels[1] - levels[0];
  sol.sector_gap = g.next - g.lowest;
  if (!g.matched) sol.occupation[0] = 1;
  if (options.want_modes) sol.modes = assemble_modes(g.spec, n);
  return sol;
}

std::vector<double> bond_correlators(const Eigen::MatrixXd& g, Boundary boundary, int parity) {
  const int n = static_cast<int>(g.rows() / 2);
  std::vector<double> out;
  for (int j = 0; j + 1 < n; ++j) out.push_back(-g(2 * j + 1, 2 * j + 2));
  if (boundary == Boundary::Periodic) out.push_back(parity * g(2 * n - 1, 0));
  return out;
}

std::vector<double> transverse_magnetization(const Eigen::MatrixXd& g) {
  const int n = static_cast<int>(g.rows() / 2);
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) out[j] = -g(2 * j, 2 * j + 1);
  return out;
}

}  // namespace helium::ising
