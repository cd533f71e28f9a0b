#pragma once

#include <Eigen/Dense>

namespace ahm {

/// Couplings of the two-species Hubbard chain
///   H = -sum_{<ij>,s} t_s c+_{si} c_{sj} + sum_i U n_up n_dn
///       - sum_i mu (n_up + n_dn) + sum_i dmu (n_dn - n_up).
/// t_up is the unit of energy; mu +/- dmu is the chemical potential of
/// the up/down species.
struct HubbardParams {
  double t_up = 1.0;
  double t_down = 1.0;
  double U = 0.0;
  double mu = 0.0;
  double dmu = 0.0;

  double mu_up() const { return mu + dmu; }
  double mu_dn() const { return mu - dmu; }

  /// Throws std::invalid_argument unless t_up > 0, t_down >= 0 and all
  /// couplings are finite.
  void validate() const;
};

/// Local Fock space: index 0=|vac>, 1=|up>, 2=|dn>, 3=|up,dn>, with the
/// up mode ordered before the down mode inside a site. All operators of
/// the model are real in this basis.
using SiteOperator = Eigen::Matrix4d;

/// Two-site operators, basis index = 4*s_left + s_right.
using BondOperator = Eigen::Matrix<double, 16, 16>;

constexpr int kLocalDim = 4;

/// Annihilators, number operators, site parity and the on-site pair
/// annihilator c_up * c_dn.
struct LocalOperators {
  SiteOperator c_up;
  SiteOperator c_dn;
  SiteOperator n_up;
  SiteOperator n_dn;
  SiteOperator parity;
  SiteOperator pair;
  SiteOperator identity;
};

/// The local matrices carry the fermionic signs of the up-before-down
/// mode ordering: c_dn |up,dn> = -|up>.
const LocalOperators& local_operators();

/// A (x) B on the two-site space.
BondOperator kron_site(const SiteOperator& a, const SiteOperator& b);

/// Controls the weight of the single-site terms on a bond: a bulk bond
/// carries half of each site's on-site term, an open edge restores full
/// weight (finite-chain mode).
struct EdgeFlags {
  bool left_open = false;
  bool right_open = false;

  bool operator==(const EdgeFlags&) const = default;
};

/// Nearest-neighbour bond Hamiltonian with Jordan-Wigner-correct hopping
/// signs for site-major mode ordering (up before down within a site).
BondOperator build_bond_hamiltonian(const HubbardParams& params,
                                    EdgeFlags edges = {});

/// exp(-tau * h) through the spectral decomposition of the symmetric bond
/// operator. tau may be negative (backward substeps of higher-order
/// splittings). Throws std::invalid_argument if h is not symmetric.
BondOperator build_gate(const BondOperator& h, double tau);

/// t_down implied by a mass ratio: t_down = t_up * m_up / m_dn.
double mass_ratio_to_hopping(double mass_up, double mass_dn,
                             double t_up = 1.0);

}  // namespace ahm
