#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace helium::numerics {

/// y = A x for a real symmetric operator that is never stored.
using LinearOperator = std::function<void(std::span<const double> x, std::span<double> y)>;

struct LanczosOptions {
  std::size_t wanted = 1;
  std::size_t basis_size = 0;  // 0: chosen from `wanted`
  /// Converged when ||A v - theta v|| <= tolerance * max(|theta|, floor).
  double tolerance = 1e-10;
  std::size_t max_matvecs = 200000;
  std::uint64_t seed = 0x5eed;
  /// After convergence, search the orthogonal complement for eigenvalues that
  /// single-vector Krylov missed (degenerate partners).
  bool verify_multiplicity = false;
};

struct LanczosResult {
  std::vector<double> values;                // ascending
  std::vector<std::vector<double>> vectors;  // unit norm
  std::vector<double> residuals;             // true ||A v - theta v||
  std::size_t matvecs = 0;
  bool converged = false;
};

/// Lowest eigenpairs by thick-restart Lanczos with full reorthogonalization.
/// Deterministic for a fixed seed.
LanczosResult lowest_eigenpairs(const LinearOperator& op, std::size_t dim,
                                const LanczosOptions& options);

/// y = H x for a real symmetric operator acting on complex vectors.
using ComplexOperator =
    std::function<void(std::span<const std::complex<double>> x, std::span<std::complex<double>> y)>;

struct KrylovExpOptions {
  std::size_t max_dim = 30;
  double tolerance = 1e-12;
};

/// psi <- exp(-i H dt) psi, by Lanczos projection with adaptive substeps.
/// Returns the number of operator applications.
std::size_t apply_propagator(const ComplexOperator& h, std::span<std::complex<double>> psi,
                             double dt, const KrylovExpOptions& options = {});

/// Deterministic unit vector in R^dim seeded by `seed`.
std::vector<double> seeded_unit_vector(std::size_t dim, std::uint64_t seed);

}  // namespace helium::numerics
