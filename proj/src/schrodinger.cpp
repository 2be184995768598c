#include "helium/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "helium/constants.hpp"
#include "helium/errors.hpp"
#include "helium/numerics/banded.hpp"
#include "helium/numerics/lanczos.hpp"

namespace helium::oracle {

GridSpec GridSpec::line(double half_width, int points) {
  GridSpec g;
  g.dimension = 1;
  g.extent = {half_width, 0.0};
  g.points = {points, 0};
  return g;
}

GridSpec GridSpec::plane(double half_width_x, double half_width_y, int points_x, int points_y) {
  GridSpec g;
  g.dimension = 2;
  g.extent = {half_width_x, half_width_y};
  g.points = {points_x, points_y};
  return g;
}

void GridSpec::validate() const {
  if (dimension != 1 && dimension != 2) throw InvalidArgument("grid: dimension must be 1 or 2");
  for (int a = 0; a < dimension; ++a) {
    if (!(extent[a] > 0.0) || !std::isfinite(extent[a])) throw InvalidArgument("grid: extent must be positive");
    if (points[a] < 64 || points[a] % 2 == 0) throw InvalidArgument("grid: points must be odd and >= 64");
  }
}

const char* to_string(Parity p) {
  switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    case Parity::None: return "none";
  }
  return "none";
}

namespace {

constexpr double kParityOverlap = 0.999;

double kinetic_coefficient() { return 0.5 * constants().hbar2_over_me_K_nm2(); }

Parity classify(double overlap) {
  if (overlap > kParityOverlap) return Parity::Even;
  if (overlap < -kParityOverlap) return Parity::Odd;
  return Parity::None;
}

// ---------------------------------------------------------------------------
// 1D

struct Stencil {
  int bandwidth;
  std::array<double, 3> coeff;  // kinetic part of H(i, i+k), k = 0..2
};

Stencil make_stencil(int order, double h) {
  const double t = kinetic_coefficient() / (h * h);
  if (order == 2) return {1, {2.0 * t, -t, 0.0}};
  if (order == 4) return {2, {30.0 * t / 12.0, -16.0 * t / 12.0, t / 12.0}};
  throw InvalidArgument("solve_1d: stencil order must be 2 or 4");
}

struct Line {
  int n;       // total nodes
  double h;
  double y0;
  std::vector<double> v;  // potential at every node
  double y(int i) const { return y0 + h * i; }
};

// Matrix element of the interior operator between full-grid indices.
double element(const Line& line, const Stencil& s, int i, int j) {
  const int d = std::abs(i - j);
  if (d > s.bandwidth) return 0.0;
  if (i < 1 || j < 1 || i > line.n - 2 || j > line.n - 2) return 0.0;
  return d == 0 ? s.coeff[0] + line.v[i] : s.coeff[d];
}

struct Pair {
  double energy;
  std::vector<double> psi;  // full grid
  Parity parity;
};

void normalize(std::vector<double>& psi, double cell) {
  double norm2 = 0.0;
  for (double x : psi) norm2 += x * x;
  const double inv = 1.0 / std::sqrt(norm2 * cell);
  for (double& x : psi) x *= inv;
  // Fix the overall sign so runs are comparable.
  const auto it = std::max_element(psi.begin(), psi.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (*it < 0.0) for (double& x : psi) x = -x;
}

double line_residual(const Line& line, const Stencil& s, const std::vector<double>& psi, double e) {
  double num = 0.0, den = 0.0;
  for (int i = 1; i < line.n - 1; ++i) {
    double hpsi = 0.0;
    for (int j = std::max(1, i - s.bandwidth); j <= std::min(line.n - 2, i + s.bandwidth); ++j) {
      hpsi += element(line, s, i, j) * psi[j];
    }
    num += (hpsi - e * psi[i]) * (hpsi - e * psi[i]);
    den += hpsi * hpsi;
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

struct LineSolution {
  std::vector<Pair> pairs;
  std::optional<double> doublet;
  double potential_min;
};

LineSolution solve_line(const Potential1D& potential, const GridSpec& grid, int k, int order) {
  Line line;
  line.n = grid.points[0];
  line.h = grid.spacing(0);
  line.y0 = -grid.extent[0];
  line.v.resize(line.n);
  for (int i = 0; i < line.n; ++i) {
    line.v[i] = potential(line.y(i));
    if (!std::isfinite(line.v[i])) throw InvalidArgument("solve_1d: potential not finite on the grid");
  }
  const Stencil s = make_stencil(order, line.h);
  LineSolution out;
  out.potential_min = *std::min_element(line.v.begin(), line.v.end());

  double vscale = 0.0;
  for (double v : line.v) vscale = std::max(vscale, std::abs(v));
  bool symmetric = true;
  for (int i = 0; i < line.n; ++i) {
    if (std::abs(line.v[i] - line.v[line.n - 1 - i]) > 1e-12 * std::max(vscale, 1e-300)) {
      symmetric = false;
      break;
    }
  }

  const int c = (line.n - 1) / 2;
  if (symmetric) {
    const int half = c - 1;  // interior offsets 1..half on each side
    // Even sector: e_c and (e_{c+k} + e_{c-k})/sqrt2.
    numerics::SymmetricBand even(half + 1, s.bandwidth);
    numerics::SymmetricBand odd(half, s.bandwidth);
    for (int kk = 0; kk <= half; ++kk) {
      for (int d = 0; d <= s.bandwidth && kk + d <= half; ++d) {
        const int l = kk + d;
        double val;
        if (kk == 0 && l == 0) {
          val = element(line, s, c, c);
        } else if (kk == 0) {
          val = std::sqrt(2.0) * element(line, s, c, c + l);
        } else {
          val = element(line, s, c + kk, c + l) + element(line, s, c + kk, c - l);
        }
        even.upper(kk, d) = val;
        if (kk >= 1) {
          odd.upper(kk - 1, d) = element(line, s, c + kk, c + l) - element(line, s, c + kk, c - l);
        }
      }
    }
    const auto ne = static_cast<std::size_t>(std::min(k, half + 1));
    const auto no = static_cast<std::size_t>(std::min(k, half));
    auto ev = numerics::lowest_eigenpairs(even, ne);
    auto od = numerics::lowest_eigenpairs(odd, no);
    std::vector<Pair> all;
    const double r2 = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < ne; ++i) {
      std::vector<double> psi(line.n, 0.0);
      psi[c] = ev.vectors[i][0];
      for (int kk = 1; kk <= half; ++kk) psi[c + kk] = psi[c - kk] = r2 * ev.vectors[i][kk];
      all.push_back({ev.values[i], std::move(psi), Parity::Even});
    }
    for (std::size_t i = 0; i < no; ++i) {
      std::vector<double> psi(line.n, 0.0);
      for (int kk = 1; kk <= half; ++kk) {
        psi[c + kk] = r2 * od.vectors[i][kk - 1];
        psi[c - kk] = -psi[c + kk];
      }
      all.push_back({od.values[i], std::move(psi), Parity::Odd});
    }

    // Wronskian of the lowest even/odd pair across the symmetry point:
    // (E_o - E_e) <e|P|o> = <e|[P,H]|o>, P = projector on y > 0.
    {
      const auto& pe = all[0].psi;
      const auto& po = all[ne].psi;
      double num = 0.0, den = 0.0;
      for (int i = c + 1; i <= c + s.bandwidth; ++i) {
        for (int j = i - s.bandwidth; j <= c; ++j) {
          num += pe[i] * element(line, s, i, j) * po[j];
          num -= pe[j] * element(line, s, j, i) * po[i];
        }
      }
      for (int i = c + 1; i < line.n; ++i) den += pe[i] * po[i];
      if (den != 0.0) out.doublet = num / den;
    }

    std::sort(all.begin(), all.end(), [](const Pair& a, const Pair& b) { return a.energy < b.energy; });
    all.resize(static_cast<std::size_t>(k));
    out.pairs = std::move(all);
  } else {
    const int m = line.n - 2;
    numerics::SymmetricBand full(m, s.bandwidth);
    for (int i = 0; i < m; ++i) {
      for (int d = 0; d <= s.bandwidth && i + d < m; ++d) full.upper(i, d) = element(line, s, i + 1, i + 1 + d);
    }
    auto r = numerics::lowest_eigenpairs(full, static_cast<std::size_t>(std::min(k, m)));
    for (std::size_t i = 0; i < r.values.size(); ++i) {
      std::vector<double> psi(line.n, 0.0);
      for (int j = 0; j < m; ++j) psi[j + 1] = r.vectors[i][j];
      double overlap = 0.0, norm = 0.0;
      for (int j = 0; j < line.n; ++j) {
        overlap += psi[j] * psi[line.n - 1 - j];
        norm += psi[j] * psi[j];
      }
      out.pairs.push_back({r.values[i], std::move(psi), classify(overlap / norm)});
    }
  }

  for (auto& p : out.pairs) normalize(p.psi, line.h);
  // residuals need the stencil; stash them in a side pass by the caller
  return out;
}

double boundary_ratio_1d(const std::vector<double>& psi) {
  double peak = 0.0;
  for (double x : psi) peak = std::max(peak, std::abs(x));
  const std::size_t n = psi.size();
  const double edge = std::max({std::abs(psi[1]), std::abs(psi[2]), std::abs(psi[n - 2]), std::abs(psi[n - 3])});
  return peak > 0.0 ? edge / peak : 0.0;
}

int doubled(int points) { return 2 * points - 1; }

bool refinement_converged(const std::vector<double>& coarse, const std::vector<double>& fine, double floor,
                          std::optional<double> split_coarse, std::optional<double> split_fine, double tol,
                          double& worst_prev, double& worst_last) {
  double worst = 0.0;
  for (std::size_t i = 0; i < coarse.size() && i < fine.size(); ++i) {
    const double scale = std::max(std::abs(fine[i] - floor), 1e-300);
    const double change = std::abs(fine[i] - coarse[i]) / scale;
    if (change > worst) {
      worst = change;
      worst_prev = coarse[i];
      worst_last = fine[i];
    }
  }
  if (split_coarse && split_fine) {
    const double change = std::abs(*split_fine - *split_coarse) / std::max(std::abs(*split_fine), 1e-300);
    if (change > worst) {
      worst = change;
      worst_prev = *split_coarse;
      worst_last = *split_fine;
    }
  }
  return worst < tol;
}

// ---------------------------------------------------------------------------
// 2D

struct Plane {
  int nx, ny;  // nodes
  double hx, hy;
  double x0, y0;
  std::vector<double> v;  // interior potential, index (ix-1)*(ny-2) + (iy-1)
  int mx() const { return nx - 2; }
  int my() const { return ny - 2; }
};

Plane make_plane(const Potential2D& potential, const GridSpec& grid) {
  Plane p;
  p.nx = grid.points[0];
  p.ny = grid.points[1];
  p.hx = grid.spacing(0);
  p.hy = grid.spacing(1);
  p.x0 = -grid.extent[0];
  p.y0 = -grid.extent[1];
  p.v.resize(static_cast<std::size_t>(p.mx()) * p.my());
  for (int ix = 1; ix <= p.mx(); ++ix) {
    for (int iy = 1; iy <= p.my(); ++iy) {
      const double val = potential(p.x0 + ix * p.hx, p.y0 + iy * p.hy);
      if (!std::isfinite(val)) throw InvalidArgument("solve_2d: potential not finite on the grid");
      p.v[static_cast<std::size_t>(ix - 1) * p.my() + (iy - 1)] = val;
    }
  }
  return p;
}

void apply_plane(const Plane& p, std::span<const double> x, std::span<double> y) {
  const double tx = kinetic_coefficient() / (p.hx * p.hx);
  const double ty = kinetic_coefficient() / (p.hy * p.hy);
  const int mx = p.mx(), my = p.my();
  const double diag = 2.0 * tx + 2.0 * ty;
  for (int ix = 0; ix < mx; ++ix) {
    const std::size_t row = static_cast<std::size_t>(ix) * my;
    for (int iy = 0; iy < my; ++iy) {
      const std::size_t i = row + iy;
      double acc = (diag + p.v[i]) * x[i];
      if (iy > 0) acc -= ty * x[i - 1];
      if (iy + 1 < my) acc -= ty * x[i + 1];
      if (ix > 0) acc -= tx * x[i - my];
      if (ix + 1 < mx) acc -= tx * x[i + my];
      y[i] = acc;
    }
  }
}

double reflect_overlap_2d(const Plane& p, const std::vector<double>& a, const std::vector<double>& b) {
  const int mx = p.mx(), my = p.my();
  double s = 0.0;
  for (int ix = 0; ix < mx; ++ix) {
    const std::size_t row = static_cast<std::size_t>(ix) * my;
    for (int iy = 0; iy < my; ++iy) s += a[row + iy] * b[row + (my - 1 - iy)];
  }
  return s;
}

// Rotate near-degenerate clusters onto eigenvectors of the y-reflection so
// every state carries a definite parity when the potential allows it.
void parity_adapt(const Plane& p, std::vector<double>& energies, std::vector<std::vector<double>>& vecs) {
  const std::size_t k = energies.size();
  double scale = 0.0;
  for (double e : energies) scale = std::max(scale, std::abs(e));
  std::size_t start = 0;
  while (start < k) {
    std::size_t end = start + 1;
    while (end < k && std::abs(energies[end] - energies[start]) < 1e-6 * std::max(scale, 1.0)) ++end;
    const std::size_t m = end - start;
    if (m > 1) {
      Eigen::MatrixXd r(m, m);
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) r(a, b) = reflect_overlap_2d(p, vecs[start + a], vecs[start + b]);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (r + r.transpose()));
      std::vector<std::vector<double>> rotated(m, std::vector<double>(vecs[start].size(), 0.0));
      for (std::size_t a = 0; a < m; ++a) {
        // Descending reflection eigenvalue: even members first.
        const std::size_t col = m - 1 - a;
        for (std::size_t b = 0; b < m; ++b) {
          const double w = es.eigenvectors()(b, col);
          for (std::size_t i = 0; i < rotated[a].size(); ++i) rotated[a][i] += w * vecs[start + b][i];
        }
      }
      for (std::size_t a = 0; a < m; ++a) vecs[start + a] = std::move(rotated[a]);
    }
    start = end;
  }
}

struct PlaneSolution {
  std::vector<double> energies;
  std::vector<std::vector<double>> interior;  // unit 2-norm, interior unknowns
  std::vector<double> residuals;
  double potential_min;
  Plane plane;
};

PlaneSolution solve_plane(const Potential2D& potential, const GridSpec& grid, int k, double tol) {
  PlaneSolution out;
  out.plane = make_plane(potential, grid);
  const Plane& p = out.plane;
  out.potential_min = *std::min_element(p.v.begin(), p.v.end());
  const auto dim = static_cast<std::size_t>(p.mx()) * p.my();
  numerics::LanczosOptions opt;
  opt.wanted = static_cast<std::size_t>(k);
  opt.tolerance = tol;
  opt.basis_size = std::max<std::size_t>(2 * opt.wanted + 30, 60);
  opt.verify_multiplicity = true;
  opt.max_matvecs = 400000;
  auto r = numerics::lowest_eigenpairs(
      [&p](std::span<const double> x, std::span<double> y) { apply_plane(p, x, y); }, dim, opt);
  if (!r.converged) {
    throw ConvergenceFailure("solve_2d: Lanczos did not converge", r.values.empty() ? 0.0 : r.values.front(),
                             r.values.empty() ? 0.0 : r.values.back());
  }
  out.energies = r.values;
  out.interior = std::move(r.vectors);
  parity_adapt(p, out.energies, out.interior);
  std::vector<double> hx(dim);
  for (std::size_t i = 0; i < out.interior.size(); ++i) {
    apply_plane(p, out.interior[i], hx);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = hx[j] - out.energies[i] * out.interior[i][j];
      num += d * d;
      den += hx[j] * hx[j];
    }
    out.residuals.push_back(std::sqrt(num / std::max(den, 1e-300)));
  }
  return out;
}

double boundary_ratio_2d(const Plane& p, const std::vector<double>& psi) {
  const int mx = p.mx(), my = p.my();
  double peak = 0.0, edge = 0.0;
  for (int ix = 0; ix < mx; ++ix) {
    for (int iy = 0; iy < my; ++iy) {
      const double a = std::abs(psi[static_cast<std::size_t>(ix) * my + iy]);
      peak = std::max(peak, a);
      if (ix == 0 || iy == 0 || ix == mx - 1 || iy == my - 1) edge = std::max(edge, a);
    }
  }
  return peak > 0.0 ? edge / peak : 0.0;
}

std::string describe(const GridSpec& g, int order) {
  std::ostringstream os;
  os << g.dimension << "D finite differences, stencil order " << order << ", points";
  for (int a = 0; a < g.dimension; ++a) os << ' ' << g.points[a];
  os << ", half-widths (nm)";
  for (int a = 0; a < g.dimension; ++a) os << ' ' << g.extent[a];
  os << ", Dirichlet boundary";
  return os.str();
}

}  // namespace

EigenResult solve_1d(const Potential1D& potential, GridSpec grid, int k, const SolveOptions& options) {
  if (grid.dimension != 1) throw InvalidArgument("solve_1d: grid must be one-dimensional");
  grid.validate();
  if (k < 2) throw InvalidArgument("solve_1d: need at least two states");

  const auto run = [&](const GridSpec& g) {
    auto sol = solve_line(potential, g, k, options.stencil_order);
    return sol;
  };

  EigenResult result;
  LineSolution sol = run(grid);
  // Grow the box at fixed spacing until the wanted states vanish at its edge.
  while (result.box_growths < options.max_box_growths) {
    double worst = 0.0;
    for (const auto& p : sol.pairs) worst = std::max(worst, boundary_ratio_1d(p.psi));
    if (worst < options.boundary_tolerance) break;
    const double h = grid.spacing(0);
    int half = (grid.points[0] - 1) / 2;
    half = static_cast<int>(std::ceil(half * 1.5));
    grid.points[0] = 2 * half + 1;
    grid.extent[0] = half * h;
    sol = run(grid);
    ++result.box_growths;
  }

  const auto energies_of = [](const LineSolution& s) {
    std::vector<double> e;
    for (const auto& p : s.pairs) e.push_back(p.energy);
    return e;
  };
  const auto record = [&](const LineSolution& s) {
    auto row = energies_of(s);
    if (s.doublet) row.push_back(*s.doublet);
    result.history.push_back(std::move(row));
  };
  record(sol);

  if (options.refine) {
    bool converged = false;
    double prev = 0.0, last = 0.0;
    for (int d = 0; d < options.max_doublings; ++d) {
      GridSpec fine = grid;
      fine.points[0] = doubled(grid.points[0]);
      LineSolution next = run(fine);
      record(next);
      converged = refinement_converged(energies_of(sol), energies_of(next), next.potential_min, sol.doublet,
                                       next.doublet, options.refine_tolerance, prev, last);
      grid = fine;
      sol = std::move(next);
      ++result.doublings;
      if (converged) break;
    }
    if (!converged) throw ConvergenceFailure("solve_1d: not converged after grid refinement", prev, last);
  }

  const Stencil s = make_stencil(options.stencil_order, grid.spacing(0));
  Line line;
  line.n = grid.points[0];
  line.h = grid.spacing(0);
  line.y0 = -grid.extent[0];
  line.v.resize(line.n);
  for (int i = 0; i < line.n; ++i) line.v[i] = potential(line.y(i));

  for (auto& p : sol.pairs) {
    result.energies.push_back(p.energy);
    result.residuals.push_back(line_residual(line, s, p.psi, p.energy));
    result.parities.push_back(p.parity);
    result.wavefunctions.push_back(std::move(p.psi));
  }
  result.doublet_splitting = sol.doublet;
  result.grid = grid;
  result.potential_min = sol.potential_min;
  result.provenance = describe(grid, options.stencil_order);
  return result;
}

EigenResult solve_2d(const Potential2D& potential, GridSpec grid, int k, const SolveOptions& options) {
  if (grid.dimension != 2) throw InvalidArgument("solve_2d: grid must be two-dimensional");
  grid.validate();
  if (k < 2) throw InvalidArgument("solve_2d: need at least two states");
  if (options.stencil_order != 2) throw InvalidArgument("solve_2d: only the five-point Laplacian is available");

  EigenResult result;
  PlaneSolution sol = solve_plane(potential, grid, k, options.lanczos_tolerance);
  while (result.box_growths < options.max_box_growths) {
    double worst = 0.0;
    for (const auto& v : sol.interior) worst = std::max(worst, boundary_ratio_2d(sol.plane, v));
    if (worst < options.boundary_tolerance) break;
    for (int a = 0; a < 2; ++a) {
      const double h = grid.spacing(a);
      int half = (grid.points[a] - 1) / 2;
      half = static_cast<int>(std::ceil(half * 1.5));
      grid.points[a] = 2 * half + 1;
      grid.extent[a] = half * h;
    }
    sol = solve_plane(potential, grid, k, options.lanczos_tolerance);
    ++result.box_growths;
  }
  result.history.push_back(sol.energies);

  if (options.refine) {
    bool converged = false;
    double prev = 0.0, last = 0.0;
    for (int d = 0; d < options.max_doublings; ++d) {
      GridSpec fine = grid;
      fine.points = {doubled(grid.points[0]), doubled(grid.points[1])};
      PlaneSolution next = solve_plane(potential, fine, k, options.lanczos_tolerance);
      result.history.push_back(next.energies);
      const std::optional<double> sc = sol.energies[1] - sol.energies[0];
      const std::optional<double> sf = next.energies[1] - next.energies[0];
      converged = refinement_converged(sol.energies, next.energies, next.potential_min, sc, sf,
                                       options.refine_tolerance, prev, last);
      grid = fine;
      sol = std::move(next);
      ++result.doublings;
      if (converged) break;
    }
    if (!converged) throw ConvergenceFailure("solve_2d: not converged after grid refinement", prev, last);
  }

  const Plane& p = sol.plane;
  const double cell = p.hx * p.hy;
  for (std::size_t i = 0; i < sol.energies.size(); ++i) {
    std::vector<double> full(static_cast<std::size_t>(p.nx) * p.ny, 0.0);
    for (int ix = 0; ix < p.mx(); ++ix)
      for (int iy = 0; iy < p.my(); ++iy)
        full[static_cast<std::size_t>(ix + 1) * p.ny + (iy + 1)] = sol.interior[i][static_cast<std::size_t>(ix) * p.my() + iy];
    normalize(full, cell);
    const double overlap = reflect_overlap_2d(p, sol.interior[i], sol.interior[i]);
    result.energies.push_back(sol.energies[i]);
    result.parities.push_back(classify(overlap));
    result.wavefunctions.push_back(std::move(full));
  }
  result.residuals = sol.residuals;
  result.grid = grid;
  result.potential_min = sol.potential_min;
  result.provenance = describe(grid, 2) + ", thick-restart Lanczos";
  return result;
}

SplittingReport splitting_and_parity(const EigenResult& result) {
  if (result.energies.size() < 2) throw InvalidArgument("splitting_and_parity: need two states");
  if (result.parities[0] != Parity::Even || result.parities[1] != Parity::Odd) {
    throw RegimeViolation(std::string("lowest two states are ") + to_string(result.parities[0]) + "/" +
                          to_string(result.parities[1]) + ", not an even/odd doublet");
  }
  SplittingReport rep;
  rep.splitting = result.doublet_splitting.value_or(result.energies[1] - result.energies[0]);
  if (result.energies.size() >= 3) rep.next_gap = result.energies[2] - result.energies[1];

  const auto& s = result.wavefunctions[0];
  const auto& a = result.wavefunctions[1];
  const GridSpec& g = result.grid;
  // Mass of (psi_S + psi_A)/sqrt2 on the y > 0 side; the symmetry line counts half.
  double upper = 0.0, total = 0.0;
  const int ny = g.dimension == 1 ? g.points[0] : g.points[1];
  const int nx = g.dimension == 1 ? 1 : g.points[0];
  const int c = (ny - 1) / 2;
  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) {
      const std::size_t i = static_cast<std::size_t>(ix) * ny + iy;
      const double w = 0.5 * (s[i] + a[i]) * (s[i] + a[i]);
      total += w;
      if (iy > c) upper += w;
      if (iy == c) upper += 0.5 * w;
    }
  }
  const double frac = upper / total;
  rep.wannier_localization = std::max(frac, 1.0 - frac);
  rep.two_level = rep.wannier_localization >= kTwoLevelLocalization;
  return rep;
}

}  // namespace helium::oracle
