#pragma once

#include <vector>

#include <Eigen/Dense>

#include "helium/ising/chain.hpp"

namespace helium::ising {

/// Majorana form of the transverse-field chain: H = (i/4) w^T A w with
/// w_{2j}, w_{2j+1} the two Majoranas of site j.
///   A(2j, 2j+1)   =  2 Gamma_j
///   A(2j+1, 2j+2) =  2 J_j
///   A(0, 2n-1)    =  2 p J_{n-1}   (periodic, fermion-parity sector p = +-1)
/// Longitudinal fields have no quadratic form and are rejected.
Eigen::MatrixXd majorana_matrix(const IsingChain& chain, int parity_sector = 1);

struct FermionOptions {
  /// Compute the 2n x 2n Bogoliubov rotation. Without it, open chains use
  /// Sturm bisection and scale to thousands of sites.
  bool want_modes = true;
};

struct FermionSolution {
  int n = 0;
  Boundary boundary = Boundary::Open;
  int ground_parity = 1;              // eigenvalue of prod_j sx_j
  std::vector<double> mode_energies;  // lambda_k >= 0 ascending, ground sector
  std::vector<int> occupation;        // modes occupied in the ground state (0/1)
  /// Orthogonal O with A = O D O^T, D = blocks [[0, 2 lambda_k], [-2 lambda_k, 0]].
  Eigen::MatrixXd modes;
  double ground_energy = 0.0;
  double gap = 0.0;         // E_1 - E_0 over the whole spectrum
  double sector_gap = 0.0;  // first excitation with the ground-state parity

  /// G(p, q) = <(i/2)[w_p, w_q]> in the ground state (needs modes).
  Eigen::MatrixXd ground_correlation() const;
};

/// Exact solution of a chain with no longitudinal field; throws
/// UnsupportedModel otherwise.
FermionSolution free_fermion_solve(const IsingChain& chain, const FermionOptions& options = {});

/// <sz_j sz_{j+1}> per bond from a Majorana correlation matrix.
std::vector<double> bond_correlators(const Eigen::MatrixXd& correlation, Boundary boundary, int parity);

/// <sx_j> per site from a Majorana correlation matrix.
std::vector<double> transverse_magnetization(const Eigen::MatrixXd& correlation);

}  // namespace helium::ising
