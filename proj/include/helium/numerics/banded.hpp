#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace helium::numerics {

/// Real symmetric band matrix, stored by upper diagonals:
/// band_[k][i] holds A(i, i + k) for k = 0..bandwidth.
class SymmetricBand {
 public:
  SymmetricBand(std::size_t n, int bandwidth);

  std::size_t size() const { return n_; }
  int bandwidth() const { return bandwidth_; }

  /// A(i, i + k); k must be in [0, bandwidth].
  double& upper(std::size_t i, int k) { return band_[k][i]; }
  double upper(std::size_t i, int k) const { return band_[k][i]; }
  double get(std::size_t i, std::size_t j) const;

  void multiply(std::span<const double> x, std::span<double> y) const;

  /// Number of eigenvalues strictly below sigma, from the inertia of the
  /// LDL^T factorization of A - sigma I.
  std::size_t count_below(double sigma) const;

  /// Gershgorin interval containing the whole spectrum.
  std::pair<double, double> spectrum_bounds() const;

 private:
  std::size_t n_;
  int bandwidth_;
  std::vector<std::vector<double>> band_;
};

struct BandEigenpairs {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;  // unit 2-norm
  std::vector<double> residuals;             // ||A v - lambda v||
};

/// Lowest k eigenpairs: Sturm-count bisection for the values, then inverse
/// iteration with a pivoted sparse LU for the vectors.
BandEigenpairs lowest_eigenpairs(const SymmetricBand& a, std::size_t k);

}  // namespace helium::numerics
