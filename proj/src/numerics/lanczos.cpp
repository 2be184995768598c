#include "helium/numerics/lanczos.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "helium/errors.hpp"
#include "helium/numerics/random.hpp"

namespace helium::numerics {

std::vector<double> seeded_unit_vector(std::size_t dim, std::uint64_t seed) {
  std::vector<double> v(dim);
  double norm2 = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    v[i] = to_unit_interval(counter_hash(seed, 1, i)) - 0.5;
    norm2 += v[i] * v[i];
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& x : v) x *= inv;
  return v;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Orthogonalize w against the first `cols` columns of v and the locked set;
// returns the projection coefficients on v (classical Gram-Schmidt, twice).
VectorXd orthogonalize(const MatrixXd& v, Eigen::Index cols, const MatrixXd& locked,
                       Eigen::Ref<VectorXd> w) {
  VectorXd h = VectorXd::Zero(cols);
  for (int pass = 0; pass < 2; ++pass) {
    if (locked.cols() > 0) w.noalias() -= locked * (locked.transpose() * w);
    if (cols > 0) {
      VectorXd c = v.leftCols(cols).transpose() * w;
      w.noalias() -= v.leftCols(cols) * c;
      h += c;
    }
  }
  return h;
}

struct RunResult {
  VectorXd values;
  MatrixXd vectors;
  std::size_t matvecs = 0;
  bool converged = false;
};

RunResult run_thick_restart(const LinearOperator& op, std::size_t dim, std::size_t wanted,
                            std::size_t basis, double tol, std::size_t max_matvecs,
                            std::uint64_t seed, const MatrixXd& locked) {
  const auto n = static_cast<Eigen::Index>(dim);
  const auto m = static_cast<Eigen::Index>(basis);
  const auto k = static_cast<Eigen::Index>(wanted);
  MatrixXd v(n, m + 1);
  MatrixXd t = MatrixXd::Zero(m, m);
  VectorXd w(n);

  {
    auto start = seeded_unit_vector(dim, seed);
    v.col(0) = Eigen::Map<VectorXd>(start.data(), n);
    orthogonalize(v, 0, locked, v.col(0));
    v.col(0).normalize();
  }

  RunResult out;
  Eigen::Index kept = 0;
  double anorm = 0.0;
  std::uint64_t restart_seed = seed;
  Eigen::SelfAdjointEigenSolver<MatrixXd> ritz;

  while (true) {
    double beta = 0.0;
    for (Eigen::Index j = kept; j < m; ++j) {
      op(std::span<const double>(v.col(j).data(), dim), std::span<double>(w.data(), dim));
      ++out.matvecs;
      VectorXd h = orthogonalize(v, j + 1, locked, w);
      for (Eigen::Index i = 0; i <= j; ++i) {
        t(i, j) = h[i];
        t(j, i) = h[i];
      }
      beta = w.norm();
      anorm = std::max(anorm, std::abs(t(j, j)) + beta);
      if (beta <= 1e-14 * std::max(anorm, 1e-300)) {
        // Invariant subspace: continue with a fresh direction.
        auto fresh = seeded_unit_vector(dim, ++restart_seed ^ 0xabcdefULL);
        w = Eigen::Map<VectorXd>(fresh.data(), n);
        orthogonalize(v, j + 1, locked, w);
        w.normalize();
        beta = 0.0;
        v.col(j + 1) = w;
      } else {
        v.col(j + 1) = w / beta;
      }
      if (j + 1 < m) {
        t(j + 1, j) = beta;
        t(j, j + 1) = beta;
      }
    }

    ritz.compute(t);
    const VectorXd& theta = ritz.eigenvalues();
    const MatrixXd& y = ritz.eigenvectors();
    for (Eigen::Index i = 0; i < m; ++i) anorm = std::max(anorm, std::abs(theta[i]));

    bool all = true;
    for (Eigen::Index i = 0; i < k; ++i) {
      const double res = std::abs(beta * y(m - 1, i));
      const double ref = std::max(std::abs(theta[i]), 1e-6 * anorm);
      if (res > tol * ref) {
        all = false;
        break;
      }
    }

    const bool out_of_budget = out.matvecs + static_cast<std::size_t>(m) > max_matvecs;
    if (all || out_of_budget) {
      out.values = theta.head(k);
      out.vectors = v.leftCols(m) * y.leftCols(k);
      out.converged = all;
      return out;
    }

    // Thick restart: keep the lowest Ritz vectors plus the residual direction.
    kept = std::min<Eigen::Index>(m - 1, k + std::max<Eigen::Index>(k, (m - k) / 2));
    MatrixXd kept_vectors = v.leftCols(m) * y.leftCols(kept);
    v.leftCols(kept) = kept_vectors;
    v.col(kept) = v.col(m);
    t.setZero();
    for (Eigen::Index i = 0; i < kept; ++i) {
      t(i, i) = theta[i];
      t(i, kept) = beta * y(m - 1, i);
      t(kept, i) = t(i, kept);
    }
  }
}

}  // namespace

LanczosResult lowest_eigenpairs(const LinearOperator& op, std::size_t dim,
                                const LanczosOptions& options) {
  if (dim == 0) throw InvalidArgument("lanczos: empty operator");
  std::size_t wanted = std::min(options.wanted, dim);
  if (wanted == 0) throw InvalidArgument("lanczos: wanted must be positive");

  LanczosResult result;
  if (dim <= 64) {
    // Small problems: project onto the whole space.
    result = [&] {
      MatrixXd a(dim, dim);
      std::vector<double> e(dim, 0.0), col(dim);
      for (std::size_t j = 0; j < dim; ++j) {
        std::fill(e.begin(), e.end(), 0.0);
        e[j] = 1.0;
        op(e, col);
        for (std::size_t i = 0; i < dim; ++i) a(i, j) = col[i];
      }
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (a + a.transpose()));
      LanczosResult r;
      r.matvecs = dim;
      r.converged = true;
      for (std::size_t i = 0; i < wanted; ++i) {
        r.values.push_back(es.eigenvalues()[i]);
        r.vectors.emplace_back(es.eigenvectors().col(i).data(),
                               es.eigenvectors().col(i).data() + dim);
      }
      return r;
    }();
  } else {
    std::size_t basis = options.basis_size;
    if (basis == 0) basis = std::max<std::size_t>(2 * wanted + 20, 40);
    basis = std::min(basis, dim - 1);
    basis = std::max(basis, wanted + 2);

    MatrixXd locked(static_cast<Eigen::Index>(dim), 0);
    RunResult run = run_thick_restart(op, dim, wanted, basis, options.tolerance,
                                      options.max_matvecs, options.seed, locked);
    result.matvecs = run.matvecs;
    result.converged = run.converged;
    std::vector<std::pair<double, VectorXd>> pairs;
    for (Eigen::Index i = 0; i < run.values.size(); ++i) pairs.emplace_back(run.values[i], run.vectors.col(i));

    if (options.verify_multiplicity && run.converged) {
      // Look for anything below the current top value in the complement.
      for (int round = 0; round < 8; ++round) {
        MatrixXd q(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(pairs.size()));
        for (std::size_t i = 0; i < pairs.size(); ++i) q.col(i) = pairs[i].second;
        const std::size_t probe_count = std::min<std::size_t>(wanted, dim - pairs.size());
        if (probe_count == 0) break;
        RunResult probe = run_thick_restart(op, dim, probe_count, basis, options.tolerance,
                                            options.max_matvecs, options.seed + 7919 * (round + 1), q);
        result.matvecs += probe.matvecs;
        const double top = pairs.back().first;
        const double slack = options.tolerance * std::max(1.0, std::abs(top)) * 10.0;
        bool inserted = false;
        for (Eigen::Index i = 0; i < probe.values.size(); ++i) {
          if (probe.values[i] < top - slack) {
            pairs.emplace_back(probe.values[i], probe.vectors.col(i));
            inserted = true;
          }
        }
        std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        pairs.resize(wanted);
        if (!inserted) break;
      }
    }
    for (auto& [value, vec] : pairs) {
      result.values.push_back(value);
      result.vectors.emplace_back(vec.data(), vec.data() + dim);
    }
  }

  // True residuals, measured after the fact.
  std::vector<double> av(dim);
  for (std::size_t i = 0; i < result.values.size(); ++i) {
    auto& vec = result.vectors[i];
    double nrm = 0.0;
    for (double x : vec) nrm += x * x;
    nrm = std::sqrt(nrm);
    for (double& x : vec) x /= nrm;
    op(vec, av);
    ++result.matvecs;
    double res = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double r = av[j] - result.values[i] * vec[j];
      res += r * r;
    }
    result.residuals.push_back(std::sqrt(res));
  }
  return result;
}

std::size_t apply_propagator(const ComplexOperator& h, std::span<std::complex<double>> psi,
                             double dt, const KrylovExpOptions& options) {
  using cplx = std::complex<double>;
  using CVector = Eigen::VectorXcd;
  const auto n = static_cast<Eigen::Index>(psi.size());
  Eigen::Map<CVector> state(psi.data(), n);
  const double norm0 = state.norm();
  if (norm0 == 0.0 || dt == 0.0) return 0;

  std::size_t applications = 0;
  double remaining = dt;
  double step = dt;
  const auto mmax = static_cast<Eigen::Index>(std::max<std::size_t>(2, std::min<std::size_t>(options.max_dim, psi.size())));
  Eigen::MatrixXcd basis(n, mmax + 1);
  CVector w(n);

  while (std::abs(remaining) > 0.0) {
    if (std::abs(step) > std::abs(remaining)) step = remaining;
    const double beta0 = state.norm();
    basis.col(0) = state / beta0;
    Eigen::VectorXd alpha(mmax), beta(mmax);
    Eigen::Index dimk = mmax;
    for (Eigen::Index j = 0; j < mmax; ++j) {
      h(std::span<const cplx>(basis.col(j).data(), psi.size()), std::span<cplx>(w.data(), psi.size()));
      ++applications;
      for (int pass = 0; pass < 2; ++pass) {
        CVector c = basis.leftCols(j + 1).adjoint() * w;
        w.noalias() -= basis.leftCols(j + 1) * c;
        if (pass == 0) alpha[j] = c[j].real();
      }
      beta[j] = w.norm();
      if (beta[j] < 1e-14 * std::max(1.0, std::abs(alpha[j]))) {
        dimk = j + 1;
        beta[j] = 0.0;
        break;
      }
      basis.col(j + 1) = w / beta[j];
    }
    // exp(-i T step) e_1 through the eigendecomposition of the small T.
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dimk, dimk);
    for (Eigen::Index j = 0; j < dimk; ++j) {
      t(j, j) = alpha[j];
      if (j + 1 < dimk) t(j, j + 1) = t(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    CVector phases(dimk);
    for (Eigen::Index j = 0; j < dimk; ++j) {
      phases[j] = std::exp(cplx(0.0, -es.eigenvalues()[j] * step)) * es.eigenvectors()(0, j);
    }
    CVector coeff = es.eigenvectors().cast<cplx>() * phases;
    const double err = dimk == mmax ? beta[dimk - 1] * std::abs(coeff[dimk - 1]) : 0.0;
    if (err > options.tolerance) {
      step *= 0.5;
      if (std::abs(step) < 1e-300) throw IntegrationFailure("krylov propagator: step underflow");
      continue;
    }
    state = beta0 * (basis.leftCols(dimk) * coeff);
    remaining -= step;
  }
  return applications;
}

}  // namespace helium::numerics
