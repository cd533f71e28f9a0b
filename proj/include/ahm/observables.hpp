#pragma once

#include <iosfwd>
#include <utility>

#include "ahm/correlation.hpp"
#include "ahm/finite_mps.hpp"
#include "ahm/imps.hpp"
#include "ahm/model.hpp"

namespace ahm {

enum class Species { Up, Dn };

/// Connected spin correlator S^m_r for m in {x, y, z}; the on-site spin
/// bilinears are parity-even, so no string operator is required.
CorrelationSeries spin_correlation(const CanonicalIMPS& state, char axis,
                                   int window = 100);

/// Connected density correlator D_r with n = n_up + n_dn.
CorrelationSeries density_correlation(const CanonicalIMPS& state,
                                      int window = 100);

/// Pair correlator P_r = <c_up(i) c_dn(i) c+_dn(i+r) c+_up(i+r)>, taken
/// literally (not connected).
CorrelationSeries pairing_correlation(const CanonicalIMPS& state,
                                      int window = 100);

/// <c+_s(i) c_s(i+r)> with the site-parity string on the intervening
/// sites; r = 0 equals the density of the species. Its transform is the
/// momentum distribution.
CorrelationSeries one_body_correlation(const CanonicalIMPS& state,
                                       Species sigma, int window = 100);

std::pair<double, double> densities(const CanonicalIMPS& state);

/// k_F = pi * n for each species.
std::pair<double, double> fermi_momenta(double n_up, double n_dn);

/// Finite-chain counterparts with the origin at the chain center,
/// matching the ED oracle's convention.
CorrelationSeries correlation_series(FiniteMPS& state, CorrelationKind kind,
                                     int max_r);

/// Delimited-text dumps: (r, X_r) or (k/pi, X_k) preceded by a header
/// naming the kind, couplings, chi and window.
void write_series(std::ostream& os, const CorrelationSeries& series,
                  const HubbardParams& params, int chi);
void write_spectrum(std::ostream& os, const Spectrum& spectrum,
                    const std::string& kind_label, const HubbardParams& params,
                    int chi, int window);

}  // namespace ahm
