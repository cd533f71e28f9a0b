#pragma once

#include <string>
#include <vector>

namespace ahm {

enum class CorrelationKind {
  SpinX,
  SpinY,
  SpinZ,
  Density,
  Pairing,
  OneBodyUp,
  OneBodyDn,
};

std::string kind_name(CorrelationKind kind);

/// Whether the kind subtracts the one-point product (spin and density do,
/// pairing and one-body do not).
bool kind_connected(CorrelationKind kind);

/// Real-space correlator X_r for r = 0..M.
struct CorrelationSeries {
  CorrelationKind kind;
  int window = 100;  // M
  bool connected = false;
  std::vector<double> values;  // size M+1
};

/// X_k = 1/sqrt(M) * sum_{r=0}^{M} X_r cos(k r), sampled on k_grid.
struct Spectrum {
  std::vector<double> k;
  std::vector<double> values;
};

/// 401 uniform momenta on [0, pi].
std::vector<double> default_k_grid();

Spectrum cosine_transform(const CorrelationSeries& series,
                          const std::vector<double>& k_grid);
Spectrum cosine_transform(const CorrelationSeries& series);

}  // namespace ahm
