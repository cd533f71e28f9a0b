#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <utility>
#include <vector>

#include "ahm/correlation.hpp"
#include "ahm/model.hpp"

namespace ahm {

/// Occupation basis of an open chain restricted to fixed (N_up, N_dn).
/// Configurations are site-occupation bitmasks enumerated in increasing
/// numeric order; the basis index is i_up * (number of dn configs) + i_dn.
/// Mode ordering is site-major with up before down, matching the bond
/// Hamiltonian convention.
struct SectorBasis {
  int sites = 0;
  int n_up = 0;
  int n_dn = 0;
  std::vector<std::uint32_t> up_configs;
  std::vector<std::uint32_t> dn_configs;

  static SectorBasis build(int sites, int n_up, int n_dn);

  std::size_t dimension() const {
    return up_configs.size() * dn_configs.size();
  }
  int up_index(std::uint32_t mask) const;
  int dn_index(std::uint32_t mask) const;
};

Eigen::SparseMatrix<double> build_sector_hamiltonian(
    const HubbardParams& params, const SectorBasis& basis);

struct SectorGround {
  double energy = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
};

/// Lowest eigenpair of the sector Hamiltonian. Dense solve for small
/// sectors, restarted Lanczos with full reorthogonalization otherwise
/// (residual at most 1e-10). Refuses sites > 10.
SectorGround ed_sector_ground(const HubbardParams& params, int sites,
                              int n_up, int n_dn);

struct EDResult {
  int sites = 0;
  double energy = 0.0;
  int winner_up = 0;
  int winner_dn = 0;
  Eigen::VectorXd ground_vector;  // in the winning sector
  bool degenerate = false;
  std::vector<std::pair<int, int>> degenerate_sectors;  // within 1e-10
};

/// Scans all (sites+1)^2 particle-number sectors; the chemical potentials
/// inside H make the scan grand-canonical.
EDResult ed_grand_ground(const HubbardParams& params, int sites);

/// Correlators of the ground vector with the origin fixed at the chain
/// center; max_r must stay inside the chain. One-body correlators carry
/// the full fermionic sign bookkeeping.
CorrelationSeries ed_correlations(const EDResult& result,
                                  CorrelationKind kind, int max_r);

struct FreeFermionReference {
  double density = 0.0;
  double energy_density = 0.0;  // includes the -mu*n term
};

/// Exact filling and energy density of a single free species with
/// dispersion -2t cos k at chemical potential mu.
FreeFermionReference free_fermion_reference(double t, double mu);

}  // namespace ahm
