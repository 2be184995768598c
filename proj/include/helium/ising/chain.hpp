#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace helium::ising {

enum class Boundary { Open, Periodic };
const char* to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

/// H = -sum_j { Gamma_j sx_j + J_j sz_j sz_{j+1} + gamma_j sz_j }.
/// Open chains have n-1 bonds; periodic chains have n, the last one wrapping.
struct IsingChain {
  int n = 0;
  std::vector<double> gamma_x;   // K, per site
  std::vector<double> coupling;  // K, per bond
  std::vector<double> gamma_z;   // K, per site
  Boundary boundary = Boundary::Open;

  static IsingChain uniform(int n, double gamma_x, double coupling, double gamma_z = 0.0,
                            Boundary boundary = Boundary::Open);

  std::size_t bond_count() const;
  /// Throws InvalidArgument on inconsistent lengths or non-finite entries.
  void validate() const;
  bool is_uniform() const;
  bool has_longitudinal_field() const;
  double mean_gamma_x() const;
  double mean_coupling() const;
};

/// Largest chain handled with 2^n amplitudes (16 MB of complex doubles at 20).
inline constexpr int kDenseCap = 20;
/// Largest chain for which a full dense spectrum is computed.
inline constexpr int kFullSpectrumCap = 12;

/// 2^n amplitudes over sz product states. Site 0 is the most significant bit
/// and a 0 bit means spin up (sz = +1).
struct DenseState {
  int n = 0;
  std::vector<std::complex<double>> amplitudes;

  static DenseState zero(int n);
  /// Product state from sz values (+1 / -1) per site.
  static DenseState product_z(const std::vector<int>& spins);
  /// All spins along +x.
  static DenseState x_polarized(int n);

  std::size_t dimension() const { return amplitudes.size(); }
  double norm() const;
  void normalize();
};

/// sz of `site` in basis state `index` for an n-site chain.
inline int spin_z(std::uint64_t index, int site, int n) {
  return ((index >> (n - 1 - site)) & 1ULL) ? -1 : 1;
}

struct ObservableRecord {
  std::vector<double> mz;
  std::vector<double> mx;
  std::vector<std::vector<double>> zz;  // filled only on request
  double correlator_sum = 0.0;          // sum over all i, j including i == j
  double kink_number = 0.0;             // sum over bonds of (1 - <sz sz>)/2
};

ObservableRecord observables(const DenseState& state, Boundary boundary, bool want_pair_correlators = false);

/// Nearest-neighbour <sz_j sz_{j+1}> for every bond of the given boundary.
std::vector<double> bond_correlators(const DenseState& state, Boundary boundary);

}  // namespace helium::ising
