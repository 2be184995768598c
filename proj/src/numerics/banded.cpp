#include "helium/numerics/banded.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "helium/errors.hpp"

namespace helium::numerics {

SymmetricBand::SymmetricBand(std::size_t n, int bandwidth)
    : n_(n), bandwidth_(bandwidth), band_(static_cast<std::size_t>(bandwidth) + 1) {
  if (n == 0 || bandwidth < 0) throw InvalidArgument("SymmetricBand: empty matrix");
  for (int k = 0; k <= bandwidth; ++k) band_[k].assign(n, 0.0);
}

double SymmetricBand::get(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  const auto k = j - i;
  if (k > static_cast<std::size_t>(bandwidth_)) return 0.0;
  return band_[k][i];
}

void SymmetricBand::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = band_[0][i] * x[i];
    for (int k = 1; k <= bandwidth_; ++k) {
      if (i + k < n_) acc += band_[k][i] * x[i + k];
      if (i >= static_cast<std::size_t>(k)) acc += band_[k][i - k] * x[i - k];
    }
    y[i] = acc;
  }
}

std::size_t SymmetricBand::count_below(double sigma) const {
  const int b = bandwidth_;
  const auto [lo, hi] = spectrum_bounds();
  const double tiny = std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi));
  // L is unit lower with bandwidth b; l[i][k] = L(i, i-k).
  std::vector<double> d(n_);
  std::vector<double> l(n_ * (b + 1), 0.0);
  auto L = [&](std::size_t row, std::size_t k) -> double& { return l[row * (b + 1) + k]; };
  std::size_t negatives = 0;
  for (std::size_t j = 0; j < n_; ++j) {
    double dj = band_[0][j] - sigma;
    for (int k = 1; k <= b && static_cast<std::size_t>(k) <= j; ++k) {
      dj -= L(j, k) * L(j, k) * d[j - k];
    }
    if (std::abs(dj) < tiny) dj = -tiny;
    d[j] = dj;
    if (dj < 0.0) ++negatives;
    for (int r = 1; r <= b && j + r < n_; ++r) {
      const std::size_t i = j + r;
      // A(i, j) minus contributions of earlier columns shared by rows i and j.
      double v = band_[r][j];
      for (int k = 1; k <= b; ++k) {
        if (static_cast<std::size_t>(k) > j) break;
        const std::size_t col = j - k;
        const std::size_t di = i - col;
        if (di > static_cast<std::size_t>(b)) continue;
        v -= L(i, di) * L(j, k) * d[col];
      }
      L(i, r) = v / dj;
    }
  }
  return negatives;
}

std::pair<double, double> SymmetricBand::spectrum_bounds() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n_; ++i) {
    double radius = 0.0;
    for (int k = 1; k <= bandwidth_; ++k) {
      if (i + k < n_) radius += std::abs(band_[k][i]);
      if (i >= static_cast<std::size_t>(k)) radius += std::abs(band_[k][i - k]);
    }
    lo = std::min(lo, band_[0][i] - radius);
    hi = std::max(hi, band_[0][i] + radius);
  }
  return {lo, hi};
}

namespace {

double bisect_eigenvalue(const SymmetricBand& a, std::size_t index, double lo, double hi) {
  // Invariant: count_below(lo) <= index < count_below(hi).
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (a.count_below(mid) > index) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Eigen::SparseMatrix<double> shifted_sparse(const SymmetricBand& a, double sigma) {
  std::vector<Eigen::Triplet<double>> trips;
  const auto n = a.size();
  trips.reserve(n * (2 * a.bandwidth() + 1));
  for (std::size_t i = 0; i < n; ++i) {
    trips.emplace_back(i, i, a.upper(i, 0) - sigma);
    for (int k = 1; k <= a.bandwidth() && i + k < n; ++k) {
      const double v = a.upper(i, k);
      if (v == 0.0) continue;
      trips.emplace_back(i, i + k, v);
      trips.emplace_back(i + k, i, v);
    }
  }
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return m;
}

}  // namespace

BandEigenpairs lowest_eigenpairs(const SymmetricBand& a, std::size_t k) {
  const auto n = a.size();
  if (k == 0 || k > n) throw InvalidArgument("lowest_eigenpairs: bad eigenpair count");
  auto [lo, hi] = a.spectrum_bounds();
  const double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
  lo -= 1e-12 * scale;
  hi += 1e-12 * scale;

  BandEigenpairs out;
  for (std::size_t idx = 0; idx < k; ++idx) {
    out.values.push_back(bisect_eigenvalue(a, idx, lo, hi));
  }

  Eigen::VectorXd x(n), y(n);
  std::vector<double> tmp(n);
  for (std::size_t idx = 0; idx < k; ++idx) {
    const double lambda = out.values[idx];
    const double shift = lambda - 1e-13 * scale;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::NaturalOrdering<int>> lu;
    lu.compute(shifted_sparse(a, shift));
    if (lu.info() != Eigen::Success) {
      lu.compute(shifted_sparse(a, lambda - 1e-10 * scale));
    }
    if (lu.info() != Eigen::Success) {
      throw ConvergenceFailure("inverse iteration: singular shifted matrix", lambda, lambda);
    }
    // Deterministic, non-symmetric start so no parity sector is missed.
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(1.0 + 0.37 * static_cast<double>(i));
    x.normalize();
    for (int it = 0; it < 4; ++it) {
      y = lu.solve(x);
      for (std::size_t prev = 0; prev < idx; ++prev) {
        if (std::abs(out.values[prev] - lambda) < 1e-9 * scale) {
          Eigen::Map<const Eigen::VectorXd> q(out.vectors[prev].data(), n);
          y -= q.dot(y) * q;
        }
      }
      x = y.normalized();
    }
    std::vector<double> v(x.data(), x.data() + n);
    a.multiply(v, tmp);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res += (tmp[i] - lambda * v[i]) * (tmp[i] - lambda * v[i]);
    out.residuals.push_back(std::sqrt(res));
    out.vectors.push_back(std::move(v));
  }
  return out;
}

}  // namespace helium::numerics
