#include "ahm/correlation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ahm {

std::string kind_name(CorrelationKind kind) {
  switch (kind) {
    case CorrelationKind::SpinX: return "spin_x";
    case CorrelationKind::SpinY: return "spin_y";
    case CorrelationKind::SpinZ: return "spin_z";
    case CorrelationKind::Density: return "density";
    case CorrelationKind::Pairing: return "pairing";
    case CorrelationKind::OneBodyUp: return "one_body_up";
    case CorrelationKind::OneBodyDn: return "one_body_dn";
  }
  return "unknown";
}

bool kind_connected(CorrelationKind kind) {
  switch (kind) {
    case CorrelationKind::SpinX:
    case CorrelationKind::SpinY:
    case CorrelationKind::SpinZ:
    case CorrelationKind::Density:
      return true;
    default:
      return false;
  }
}

std::vector<double> default_k_grid() {
  std::vector<double> k(401);
  for (int i = 0; i < 401; ++i) k[i] = std::numbers::pi * i / 400.0;
  return k;
}

Spectrum cosine_transform(const CorrelationSeries& series,
                          const std::vector<double>& k_grid) {
  if (series.values.size() != static_cast<std::size_t>(series.window) + 1)
    throw std::invalid_argument("series length must be M+1");
  Spectrum out;
  out.k = k_grid;
  out.values.resize(k_grid.size());
  const double norm = 1.0 / std::sqrt(static_cast<double>(series.window));
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    double acc = 0.0;
    for (std::size_t r = 0; r < series.values.size(); ++r)
      acc += series.values[r] * std::cos(k_grid[i] * static_cast<double>(r));
    out.values[i] = norm * acc;
  }
  return out;
}

Spectrum cosine_transform(const CorrelationSeries& series) {
  return cosine_transform(series, default_k_grid());
}

}  // namespace ahm
