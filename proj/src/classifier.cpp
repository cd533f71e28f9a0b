#include "ahm/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ahm {

std::string label_name(PhaseLabel label) {
  switch (label) {
    case PhaseLabel::Fflo: return "FFLO";
    case PhaseLabel::BalancedCdwDominant: return "BALANCED_CDW_DOMINANT";
    case PhaseLabel::BalancedSsDominant: return "BALANCED_SS_DOMINANT";
    case PhaseLabel::NormalVacuum: return "NORMAL_VACUUM";
    case PhaseLabel::NormalFull: return "NORMAL_FULL";
    case PhaseLabel::NormalFullyPolarized: return "NORMAL_FULLY_POLARIZED";
    case PhaseLabel::NormalBandInsulatorOneSpecies:
      return "NORMAL_BAND_INSULATOR_ONE_SPECIES";
    case PhaseLabel::Unclassified: return "UNCLASSIFIED";
  }
  return "UNCLASSIFIED";
}

int label_code(PhaseLabel label) { return static_cast<int>(label); }

PhaseLabel label_from_name(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(PhaseLabel::Unclassified); ++i) {
    const auto label = static_cast<PhaseLabel>(i);
    if (label_name(label) == name) return label;
  }
  throw std::invalid_argument("unknown phase label: " + name);
}

void ClassifierThresholds::validate() const {
  if (!(eps_density > 0.0) || !(eps_polarization > 0.0) ||
      !(k_tolerance > 0.0) || !(min_prominence > 0.0))
    throw std::invalid_argument("classifier thresholds must be positive");
}

PeakInfo find_peak(const Spectrum& spectrum, double exclude_k_below) {
  if (spectrum.k.empty() || spectrum.k.size() != spectrum.values.size())
    throw std::invalid_argument("empty or inconsistent spectrum");

  int best = -1;
  for (std::size_t i = 0; i < spectrum.k.size(); ++i) {
    if (spectrum.k[i] < exclude_k_below) continue;
    if (best < 0 || spectrum.values[i] > spectrum.values[best])
      best = static_cast<int>(i);
  }
  if (best < 0) throw std::invalid_argument("exclusion removed every point");

  PeakInfo peak;
  peak.k = spectrum.k[best];
  peak.height = spectrum.values[best];

  double scale = 0.0;
  for (double v : spectrum.values) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) {
    peak.k = spectrum.k.front();
    return peak;  // all-zero spectrum: zero prominence at k = 0
  }

  double left_min = peak.height, right_min = peak.height;
  for (int i = best; i >= 0; --i)
    left_min = std::min(left_min, spectrum.values[i]);
  for (std::size_t i = best; i < spectrum.values.size(); ++i)
    right_min = std::min(right_min, spectrum.values[i]);
  const double surrounding = std::max(left_min, right_min);
  peak.prominence = (peak.height - surrounding) / scale;
  if (peak.prominence == 0.0) peak.k = spectrum.k.front();
  return peak;
}

DipResult detect_dip(const Spectrum& one_body_dn, double k_up_f, double k_dn_f,
                     double k_tolerance) {
  DipResult result;
  if (std::abs(k_up_f - k_dn_f) <= k_tolerance) return result;  // degenerate

  double target = 2.0 * k_up_f - k_dn_f;
  target = std::abs(target);
  if (target > std::numbers::pi)
    target = 2.0 * std::numbers::pi - target;  // cosine-transform fold

  const double window = 3.0 * k_tolerance;
  double best_depth = 0.0;
  for (std::size_t i = 1; i + 1 < one_body_dn.k.size(); ++i) {
    if (std::abs(one_body_dn.k[i] - target) > window) continue;
    const double v = one_body_dn.values[i];
    if (v < one_body_dn.values[i - 1] && v < one_body_dn.values[i + 1]) {
      const double depth = std::min(one_body_dn.values[i - 1] - v,
                                    one_body_dn.values[i + 1] - v);
      if (!result.found || depth > best_depth) {
        result.found = true;
        result.k = one_body_dn.k[i];
        best_depth = depth;
      }
    }
  }
  return result;
}

namespace {

double mean_abs(const Spectrum& s) {
  double acc = 0.0;
  for (double v : s.values) acc += std::abs(v);
  return acc / static_cast<double>(s.values.size());
}

double value_at_k(const Spectrum& s, double k) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.k.size(); ++i)
    if (std::abs(s.k[i] - k) < std::abs(s.k[best] - k)) best = i;
  return s.values[best];
}

}  // namespace

Classification classify(double n_up, double n_dn, const Spectrum& pairing_k,
                        const Spectrum& density_k,
                        const ClassifierThresholds& th) {
  th.validate();
  Classification out;
  out.evidence.n_up = n_up;
  out.evidence.n_dn = n_dn;
  const double eps = th.eps_density;

  const bool up_empty = n_up <= eps;
  const bool dn_empty = n_dn <= eps;
  const bool up_full = n_up >= 1.0 - eps;
  const bool dn_full = n_dn >= 1.0 - eps;

  if (up_empty && dn_empty) {
    out.label = PhaseLabel::NormalVacuum;
    return out;
  }
  if (up_full && dn_full) {
    out.label = PhaseLabel::NormalFull;
    return out;
  }
  const bool up_inside = !up_empty && !up_full;
  const bool dn_inside = !dn_empty && !dn_full;
  if ((up_empty && dn_inside) || (dn_empty && up_inside)) {
    out.label = PhaseLabel::NormalFullyPolarized;
    return out;
  }
  if ((up_full && dn_inside) || (dn_full && up_inside)) {
    out.label = PhaseLabel::NormalBandInsulatorOneSpecies;
    return out;
  }
  if (!up_inside || !dn_inside) {
    // only remaining pinned combination: one species empty, the other full
    out.label = PhaseLabel::NormalBandInsulatorOneSpecies;
    return out;
  }

  if (std::abs(n_up - n_dn) > th.eps_polarization) {
    const double k_p = std::numbers::pi * std::abs(n_up - n_dn);
    out.evidence.k_p_predicted = k_p;
    const PeakInfo peak = find_peak(pairing_k);
    out.evidence.k_p_measured = peak.k;
    out.evidence.p_peak_height = peak.height;
    out.evidence.p_prominence = peak.prominence;
    if (std::abs(peak.k - k_p) <= th.k_tolerance &&
        peak.prominence >= th.min_prominence) {
      out.label = PhaseLabel::Fflo;
    } else {
      out.label = PhaseLabel::Unclassified;
    }
    return out;
  }

  // balanced, both species partially filled: CDW vs SS dominance
  const PeakInfo d_peak = find_peak(density_k, th.k_tolerance);
  const double p_at_zero = value_at_k(pairing_k, 0.0);
  out.evidence.d_peak_k = d_peak.k;
  out.evidence.d_peak_height = d_peak.height;
  out.evidence.p_peak_height = p_at_zero;
  const double d_scale = mean_abs(density_k);
  const double p_scale = mean_abs(pairing_k);
  const double d_score = d_scale > 0.0 ? d_peak.height / d_scale : 0.0;
  const double p_score = p_scale > 0.0 ? p_at_zero / p_scale : 0.0;
  out.label = d_score > p_score ? PhaseLabel::BalancedCdwDominant
                                : PhaseLabel::BalancedSsDominant;
  return out;
}

std::pair<double, double> particle_hole_map(double mu, double dmu, double U) {
  return {U - mu, -dmu};
}

std::pair<double, double> spin_flip_map(double mu, double dmu) {
  return {mu, -dmu};
}

}  // namespace ahm
