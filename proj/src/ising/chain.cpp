#include "helium/ising/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "helium/errors.hpp"

namespace helium::ising {

const char* to_string(Boundary b) { return b == Boundary::Open ? "open" : "periodic"; }

Boundary boundary_from_string(const std::string& s) {
  if (s == "open") return Boundary::Open;
  if (s == "periodic") return Boundary::Periodic;
  throw InvalidArgument("unknown boundary '" + s + "' (expected open or periodic)");
}

IsingChain IsingChain::uniform(int n, double gx, double j, double gz, Boundary boundary) {
  IsingChain c;
  c.n = n;
  c.boundary = boundary;
  c.gamma_x.assign(std::max(n, 0), gx);
  c.gamma_z.assign(std::max(n, 0), gz);
  c.coupling.assign(c.bond_count(), j);
  c.validate();
  return c;
}

std::size_t IsingChain::bond_count() const {
  if (n <= 1) return 0;
  return boundary == Boundary::Open ? static_cast<std::size_t>(n - 1) : static_cast<std::size_t>(n);
}

void IsingChain::validate() const {
  if (n < 1) throw InvalidArgument("chain: need at least one site");
  if (boundary == Boundary::Periodic && n < 3) throw InvalidArgument("chain: periodic chains need n >= 3");
  if (gamma_x.size() != static_cast<std::size_t>(n) || gamma_z.size() != static_cast<std::size_t>(n)) {
    throw InvalidArgument("chain: per-site field arrays must have n entries");
  }
  if (coupling.size() != bond_count()) throw InvalidArgument("chain: coupling array length does not match the boundary");
  const auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  if (!finite(gamma_x) || !finite(gamma_z) || !finite(coupling)) throw InvalidArgument("chain: non-finite entry");
}

bool IsingChain::is_uniform() const {
  const auto same = [](const std::vector<double>& v) {
    return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
  };
  return same(gamma_x) && same(coupling) && same(gamma_z);
}

bool IsingChain::has_longitudinal_field() const {
  return std::any_of(gamma_z.begin(), gamma_z.end(), [](double g) { return g != 0.0; });
}

double IsingChain::mean_gamma_x() const {
  return gamma_x.empty() ? 0.0 : std::accumulate(gamma_x.begin(), gamma_x.end(), 0.0) / gamma_x.size();
}

double IsingChain::mean_coupling() const {
  return coupling.empty() ? 0.0 : std::accumulate(coupling.begin(), coupling.end(), 0.0) / coupling.size();
}

DenseState DenseState::zero(int n) {
  if (n < 1 || n > kDenseCap) throw InvalidArgument("dense state: n must be in [1, " + std::to_string(kDenseCap) + "]");
  DenseState s;
  s.n = n;
  s.amplitudes.assign(std::size_t{1} << n, {0.0, 0.0});
  return s;
}

DenseState DenseState::product_z(const std::vector<int>& spins) {
  DenseState s = zero(static_cast<int>(spins.size()));
  std::uint64_t index = 0;
  for (int j = 0; j < s.n; ++j) {
    if (spins[j] != 1 && spins[j] != -1) throw InvalidArgument("product_z: spins must be +1 or -1");
    if (spins[j] == -1) index |= 1ULL << (s.n - 1 - j);
  }
  s.amplitudes[index] = 1.0;
  return s;
}

DenseState DenseState::x_polarized(int n) {
  DenseState s = zero(n);
  const double a = 1.0 / std::sqrt(static_cast<double>(s.amplitudes.size()));
  std::fill(s.amplitudes.begin(), s.amplitudes.end(), std::complex<double>(a, 0.0));
  return s;
}

double DenseState::norm() const {
  double s = 0.0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return std::sqrt(s);
}

void DenseState::normalize() {
  const double nrm = norm();
  if (nrm == 0.0) throw InvalidArgument("dense state: cannot normalize the zero vector");
  for (auto& a : amplitudes) a /= nrm;
}

std::vector<double> bond_correlators(const DenseState& state, Boundary boundary) {
  const int n = state.n;
  const std::size_t bonds = n <= 1 ? 0 : (boundary == Boundary::Open ? n - 1 : n);
  std::vector<double> out(bonds, 0.0);
  for (std::uint64_t s = 0; s < state.amplitudes.size(); ++s) {
    const double p = std::norm(state.amplitudes[s]);
    if (p == 0.0) continue;
    for (std::size_t b = 0; b < bonds; ++b) {
      const int i = static_cast<int>(b);
      const int j = (i + 1) % n;
      out[b] += p * spin_z(s, i, n) * spin_z(s, j, n);
    }
  }
  return out;
}

ObservableRecord observables(const DenseState& state, Boundary boundary, bool want_pair_correlators) {
  const int n = state.n;
  ObservableRecord r;
  r.mz.assign(n, 0.0);
  r.mx.assign(n, 0.0);
  if (want_pair_correlators) r.zz.assign(n, std::vector<double>(n, 0.0));
  for (std::uint64_t s = 0; s < state.amplitudes.size(); ++s) {
    const auto amp = state.amplitudes[s];
    const double p = std::norm(amp);
    int total = 0;
    for (int j = 0; j < n; ++j) {
      const int sz = spin_z(s, j, n);
      total += sz;
      r.mz[j] += p * sz;
      const std::uint64_t flipped = s ^ (1ULL << (n - 1 - j));
      r.mx[j] += (std::conj(amp) * state.amplitudes[flipped]).real();
    }
    r.correlator_sum += p * total * total;
    if (want_pair_correlators && p != 0.0) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r.zz[i][j] += p * spin_z(s, i, n) * spin_z(s, j, n);
    }
  }
  for (double c : bond_correlators(state, boundary)) r.kink_number += 0.5 * (1.0 - c);
  return r;
}

}  // namespace helium::ising
