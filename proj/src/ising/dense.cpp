#include "helium/ising/dense.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "helium/errors.hpp"
#include "helium/numerics/lanczos.hpp"

namespace helium::ising {

HamiltonianOperator::HamiltonianOperator(const IsingChain& chain) : n_(chain.n), flip_field_(chain.gamma_x) {
  chain.validate();
  if (n_ > kDenseCap) {
    throw InvalidArgument("dense Hamiltonian: n = " + std::to_string(n_) + " exceeds the cap of " +
                          std::to_string(kDenseCap));
  }
  const std::size_t dim = std::size_t{1} << n_;
  const std::size_t bonds = chain.bond_count();
  diagonal_.assign(dim, 0.0);
  for (std::uint64_t s = 0; s < dim; ++s) {
    double e = 0.0;
    for (int j = 0; j < n_; ++j) e -= chain.gamma_z[j] * spin_z(s, j, n_);
    for (std::size_t b = 0; b < bonds; ++b) {
      const int i = static_cast<int>(b);
      e -= chain.coupling[b] * spin_z(s, i, n_) * spin_z(s, (i + 1) % n_, n_);
    }
    diagonal_[s] = e;
  }
}

template <class T>
static void apply_impl(int n, const std::vector<double>& flip, const std::vector<double>& diag,
                       std::span<const T> x, std::span<T> y) {
  const std::size_t dim = diag.size();
  for (std::size_t s = 0; s < dim; ++s) {
    T acc = diag[s] * x[s];
    for (int j = 0; j < n; ++j) acc -= flip[j] * x[s ^ (std::size_t{1} << (n - 1 - j))];
    y[s] = acc;
  }
}

void HamiltonianOperator::apply(std::span<const std::complex<double>> x, std::span<std::complex<double>> y) const {
  apply_impl(n_, flip_field_, diagonal_, x, y);
}

void HamiltonianOperator::apply(std::span<const double> x, std::span<double> y) const {
  apply_impl(n_, flip_field_, diagonal_, x, y);
}

DenseState apply_hamiltonian(const IsingChain& chain, const DenseState& state) {
  if (state.n != chain.n) throw InvalidArgument("apply_hamiltonian: state and chain sizes differ");
  const HamiltonianOperator h(chain);
  DenseState out = DenseState::zero(chain.n);
  h.apply(std::span<const std::complex<double>>(state.amplitudes), std::span<std::complex<double>>(out.amplitudes));
  return out;
}

static numerics::LanczosResult run_lanczos(const IsingChain& chain, std::size_t count,
                                           const GroundStateOptions& options, bool verify) {
  const HamiltonianOperator h(chain);
  numerics::LanczosOptions lo;
  lo.wanted = count;
  lo.tolerance = 0.1 * options.tolerance;
  lo.seed = options.seed;
  lo.max_matvecs = options.max_matvecs;
  lo.verify_multiplicity = verify;
  auto op = [&h](std::span<const double> x, std::span<double> y) { h.apply(x, y); };
  return numerics::lowest_eigenpairs(op, h.dimension(), lo);
}

GroundState ground_state(const IsingChain& chain, const GroundStateOptions& options) {
  const auto res = run_lanczos(chain, 1, options, false);
  GroundState g;
  g.energy = res.values.at(0);
  g.residual = res.residuals.at(0);
  if (!res.converged || g.residual > options.tolerance * std::max(std::abs(g.energy), 1e-300)) {
    throw ConvergenceFailure("ground_state: Lanczos residual " + std::to_string(g.residual) +
                                 " above tolerance after " + std::to_string(res.matvecs) + " products",
                             g.energy, g.energy);
  }
  g.state = DenseState::zero(chain.n);
  const auto& v = res.vectors[0];
  for (std::size_t i = 0; i < v.size(); ++i) g.state.amplitudes[i] = v[i];
  return g;
}

std::vector<double> lowest_energies(const IsingChain& chain, std::size_t count, const GroundStateOptions& options) {
  const std::size_t dim = std::size_t{1} << chain.n;
  if (count == 0 || count > dim) throw InvalidArgument("lowest_energies: count out of range");
  const auto res = run_lanczos(chain, count, options, true);
  if (!res.converged) {
    throw ConvergenceFailure("lowest_energies: Lanczos did not converge", res.values.front(), res.values.back());
  }
  return res.values;
}

FullSpectrum full_spectrum(const IsingChain& chain) {
  if (chain.n > kFullSpectrumCap) {
    throw InvalidArgument("full_spectrum: n = " + std::to_string(chain.n) + " exceeds " +
                          std::to_string(kFullSpectrumCap));
  }
  const HamiltonianOperator h(chain);
  const auto dim = static_cast<Eigen::Index>(h.dimension());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<double> e(dim, 0.0), col(dim, 0.0);
  for (Eigen::Index c = 0; c < dim; ++c) {
    e[c] = 1.0;
    h.apply(std::span<const double>(e), std::span<double>(col));
    e[c] = 0.0;
    for (Eigen::Index r = 0; r < dim; ++r) m(r, c) = col[r];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw ConvergenceFailure("full_spectrum: dense eigensolver failed", 0.0, 0.0);
  return {es.eigenvalues(), es.eigenvectors()};
}

}  // namespace helium::ising
