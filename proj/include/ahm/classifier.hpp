#pragma once

#include <string>
#include <utility>

#include "ahm/correlation.hpp"

namespace ahm {

enum class PhaseLabel {
  Fflo,
  BalancedCdwDominant,
  BalancedSsDominant,
  NormalVacuum,
  NormalFull,
  NormalFullyPolarized,
  NormalBandInsulatorOneSpecies,
  Unclassified,
};

std::string label_name(PhaseLabel label);
int label_code(PhaseLabel label);
PhaseLabel label_from_name(const std::string& name);

struct ClassifierThresholds {
  double eps_density = 1e-3;
  double eps_polarization = 1e-3;
  double k_tolerance = 0.031415926535897934;  // pi / 100
  double min_prominence = 0.05;

  void validate() const;
};

struct PeakInfo {
  double k = 0.0;
  double height = 0.0;
  double prominence = 0.0;
};

/// Global maximum of the spectrum over the grid restricted to
/// k >= exclude_k_below; prominence is (height - highest bracketing
/// minimum) / max(|values|). Ties break toward the smallest k.
PeakInfo find_peak(const Spectrum& spectrum, double exclude_k_below = -1.0);

struct DipResult {
  bool found = false;
  double k = 0.0;
};

/// Local minimum of the heavy-species momentum distribution within
/// 3*k_tolerance of 2 k_up_F - k_dn_F (folded into [0, pi]). Not
/// applicable when the Fermi momenta coincide within k_tolerance.
DipResult detect_dip(const Spectrum& one_body_dn, double k_up_f,
                     double k_dn_f, double k_tolerance);

struct Evidence {
  double n_up = 0.0;
  double n_dn = 0.0;
  double k_p_predicted = 0.0;
  double k_p_measured = 0.0;
  double p_peak_height = 0.0;
  double p_prominence = 0.0;
  double d_peak_k = 0.0;
  double d_peak_height = 0.0;
};

struct Classification {
  PhaseLabel label = PhaseLabel::Unclassified;
  Evidence evidence;
};

/// Decision procedure over densities and the pairing / density spectra:
/// normal states by occupation, polarized states by the finite-momentum
/// pairing peak at pi*|n_up - n_dn|, balanced states by comparing the
/// normalized density peak at k > 0 against the pairing value at k = 0.
Classification classify(double n_up, double n_dn, const Spectrum& pairing_k,
                        const Spectrum& density_k,
                        const ClassifierThresholds& thresholds = {});

/// Coordinate maps of the Hamiltonian symmetries, used by property tests:
/// particle-hole sends (mu, dmu) to (U - mu, -dmu) with n -> 1 - n;
/// spin flip (valid at t_down = t_up) sends (mu, dmu) to (mu, -dmu) with
/// n_up <-> n_dn.
std::pair<double, double> particle_hole_map(double mu, double dmu, double U);
std::pair<double, double> spin_flip_map(double mu, double dmu);

}  // namespace ahm
