#pragma once

// Finite-difference single-particle eigensolver (electron mass, nm, Kelvin).
// It is the reference the WKB and harmonic estimates are checked against.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace helium::oracle {

struct GridSpec {
  int dimension = 1;
  std::array<double, 2> extent{0.0, 0.0};  // half-widths (nm): {y} in 1D, {x, y} in 2D
  std::array<int, 2> points{0, 0};         // nodes per axis, boundary nodes included

  static GridSpec line(double half_width, int points);
  static GridSpec plane(double half_width_x, double half_width_y, int points_x, int points_y);
  /// Throws InvalidArgument unless every axis has >= 64 odd points and a positive extent.
  void validate() const;
  double spacing(int axis) const { return 2.0 * extent[axis] / (points[axis] - 1); }
};

enum class Parity { Even, Odd, None };
const char* to_string(Parity p);

struct SolveOptions {
  /// 2: three-point Laplacian; 4: five-point fourth-order stencil (1D only).
  int stencil_order = 2;
  bool refine = true;
  int max_doublings = 4;
  double refine_tolerance = 0.01;
  double boundary_tolerance = 1e-6;
  int max_box_growths = 4;
  double lanczos_tolerance = 1e-10;
};

struct EigenResult {
  std::vector<double> energies;                    // K, ascending
  std::vector<std::vector<double>> wavefunctions;  // on the full grid, int |psi|^2 = 1
  std::vector<Parity> parities;                    // under y -> -y
  /// E(lowest odd) - E(lowest even) from the discrete Wronskian of the two
  /// parity sectors; stays accurate when the plain difference cancels.
  std::optional<double> doublet_splitting;
  std::vector<double> residuals;  // ||H psi - E psi|| / ||H psi||
  GridSpec grid;                  // grid of the returned states
  double potential_min = 0.0;     // smallest potential value on that grid
  int doublings = 0;
  int box_growths = 0;
  /// Energies (and splitting, last entry when available) per grid level.
  std::vector<std::vector<double>> history;
  std::string provenance;
};

using Potential1D = std::function<double(double)>;
using Potential2D = std::function<double(double, double)>;

EigenResult solve_1d(const Potential1D& potential, GridSpec grid, int k, const SolveOptions& options = {});
EigenResult solve_2d(const Potential2D& potential, GridSpec grid, int k, const SolveOptions& options = {});

/// Wannier-localization threshold separating a tunnel doublet from an
/// ordinary ladder. A harmonic well gives 0.899 (half-plane mass of
/// (psi_0 + psi_1)/sqrt 2), a deep double well approaches 1.
inline constexpr double kTwoLevelLocalization = 0.95;

struct SplittingReport {
  double splitting = 0.0;              // E_A - E_S (K)
  double wannier_localization = 0.0;   // half-plane mass of (psi_S + psi_A)/sqrt 2
  bool two_level = false;              // localization >= kTwoLevelLocalization
  std::optional<double> next_gap;      // E_2 - E_1 when a third state exists
};

/// Throws RegimeViolation unless the two lowest states are even then odd.
SplittingReport splitting_and_parity(const EigenResult& result);

}  // namespace helium::oracle
