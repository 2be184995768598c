#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "helium/ising/chain.hpp"

namespace helium::ising {

/// Matrix-free Hamiltonian: sx terms are bit flips, the rest is a cached
/// diagonal. Never stores a 2^n x 2^n matrix.
class HamiltonianOperator {
 public:
  explicit HamiltonianOperator(const IsingChain& chain);

  int sites() const { return n_; }
  std::size_t dimension() const { return diagonal_.size(); }

  void apply(std::span<const std::complex<double>> x, std::span<std::complex<double>> y) const;
  void apply(std::span<const double> x, std::span<double> y) const;

  const std::vector<double>& diagonal() const { return diagonal_; }

 private:
  int n_;
  std::vector<double> flip_field_;  // Gamma_j indexed by site
  std::vector<double> diagonal_;
};

/// H|psi>, unnormalized.
DenseState apply_hamiltonian(const IsingChain& chain, const DenseState& state);

struct GroundStateOptions {
  double tolerance = 1e-9;  // ||H psi - E psi|| <= tolerance * |E|
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
  std::size_t max_matvecs = 100000;
};

struct GroundState {
  double energy = 0.0;
  DenseState state;
  double residual = 0.0;
};

GroundState ground_state(const IsingChain& chain, const GroundStateOptions& options = {});

/// Lowest `count` energies by Lanczos (with a multiplicity check).
std::vector<double> lowest_energies(const IsingChain& chain, std::size_t count,
                                    const GroundStateOptions& options = {});

struct FullSpectrum {
  Eigen::VectorXd energies;
  Eigen::MatrixXd vectors;  // columns, real
};

/// Dense diagonalization; only for n <= kFullSpectrumCap.
FullSpectrum full_spectrum(const IsingChain& chain);

}  // namespace helium::ising
