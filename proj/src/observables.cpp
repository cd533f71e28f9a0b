#include "ahm/observables.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace ahm {
namespace {

struct SpinBilinears {
  SiteOperator sz;
  SiteOperator plus_sum;   // c+up c_dn + c+dn c_up
  SiteOperator plus_diff;  // c+up c_dn - c+dn c_up
};

const SpinBilinears& spin_bilinears() {
  static const SpinBilinears b = [] {
    const LocalOperators& op = local_operators();
    SpinBilinears s;
    s.sz = 0.5 * (op.n_up - op.n_dn);
    const SiteOperator raise = op.c_up.transpose() * op.c_dn;
    const SiteOperator lower = op.c_dn.transpose() * op.c_up;
    s.plus_sum = raise + lower;
    s.plus_diff = raise - lower;
    return s;
  }();
  return b;
}

// Connected correlator of a single parity-even site operator, with the
// one-point subtraction resolved per unit-cell origin.
double connected_pair(const CanonicalIMPS& state, const SiteOperator& op,
                      int r) {
  const SiteOperator id = local_operators().identity;
  double acc = 0.0;
  for (UnitCellSite origin : {UnitCellSite::A, UnitCellSite::B}) {
    const UnitCellSite other =
        (origin == UnitCellSite::A) == (r % 2 == 0) ? UnitCellSite::A
                                                    : UnitCellSite::B;
    acc += state.two_point_from(origin, op, op, id, r) -
           state.local_expectation(op, origin) *
               state.local_expectation(op, other);
  }
  return 0.5 * acc;
}

CorrelationSeries make_series(CorrelationKind kind, int window) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  CorrelationSeries s;
  s.kind = kind;
  s.window = window;
  s.connected = kind_connected(kind);
  s.values.resize(window + 1);
  return s;
}

}  // namespace

CorrelationSeries spin_correlation(const CanonicalIMPS& state, char axis,
                                   int window) {
  CorrelationKind kind;
  switch (axis) {
    case 'x': kind = CorrelationKind::SpinX; break;
    case 'y': kind = CorrelationKind::SpinY; break;
    case 'z': kind = CorrelationKind::SpinZ; break;
    default: throw std::invalid_argument("spin axis must be x, y or z");
  }
  CorrelationSeries series = make_series(kind, window);
  const SpinBilinears& b = spin_bilinears();
  for (int r = 0; r <= window; ++r) {
    switch (axis) {
      case 'z':
        series.values[r] = connected_pair(state, b.sz, r);
        break;
      case 'x':
        series.values[r] = 0.25 * connected_pair(state, b.plus_sum, r);
        break;
      case 'y':
        // s^y = -(i/2)(c+up c_dn - c+dn c_up); the i's cancel pairwise
        series.values[r] = -0.25 * connected_pair(state, b.plus_diff, r);
        break;
    }
  }
  return series;
}

CorrelationSeries density_correlation(const CanonicalIMPS& state,
                                      int window) {
  const LocalOperators& op = local_operators();
  const SiteOperator n = op.n_up + op.n_dn;
  CorrelationSeries series = make_series(CorrelationKind::Density, window);
  for (int r = 0; r <= window; ++r)
    series.values[r] = connected_pair(state, n, r);
  return series;
}

CorrelationSeries pairing_correlation(const CanonicalIMPS& state,
                                      int window) {
  const LocalOperators& op = local_operators();
  const SiteOperator creator = op.pair.transpose();
  CorrelationSeries series = make_series(CorrelationKind::Pairing, window);
  for (int r = 0; r <= window; ++r)
    series.values[r] = state.two_point(op.pair, creator, op.identity, r);
  return series;
}

CorrelationSeries one_body_correlation(const CanonicalIMPS& state,
                                       Species sigma, int window) {
  const LocalOperators& op = local_operators();
  const bool up = sigma == Species::Up;
  const SiteOperator& c = up ? op.c_up : op.c_dn;
  const SiteOperator& n = up ? op.n_up : op.n_dn;
  const SiteOperator head = c.transpose() * op.parity;

  CorrelationSeries series = make_series(
      up ? CorrelationKind::OneBodyUp : CorrelationKind::OneBodyDn, window);
  series.values[0] = state.local_expectation(n);
  for (int r = 1; r <= window; ++r)
    series.values[r] = state.two_point(head, c, op.parity, r);
  return series;
}

std::pair<double, double> densities(const CanonicalIMPS& state) {
  const LocalOperators& op = local_operators();
  return {state.local_expectation(op.n_up), state.local_expectation(op.n_dn)};
}

std::pair<double, double> fermi_momenta(double n_up, double n_dn) {
  return {std::numbers::pi * n_up, std::numbers::pi * n_dn};
}

CorrelationSeries correlation_series(FiniteMPS& state, CorrelationKind kind,
                                     int max_r) {
  const int origin = (state.size() - 1) / 2;
  if (max_r < 0 || origin + max_r >= state.size())
    throw std::domain_error("correlation range beyond chain end");

  const LocalOperators& op = local_operators();
  const SpinBilinears& b = spin_bilinears();
  CorrelationSeries series = make_series(kind, std::max(max_r, 1));
  series.window = max_r;
  series.values.resize(max_r + 1);

  auto connected = [&](const SiteOperator& o, int r) {
    return state.two_point(origin, o, o, op.identity, r) -
           state.local_expectation(origin, o) *
               state.local_expectation(origin + r, o);
  };

  for (int r = 0; r <= max_r; ++r) {
    switch (kind) {
      case CorrelationKind::SpinZ:
        series.values[r] = connected(b.sz, r);
        break;
      case CorrelationKind::SpinX:
        series.values[r] = 0.25 * connected(b.plus_sum, r);
        break;
      case CorrelationKind::SpinY:
        series.values[r] = -0.25 * connected(b.plus_diff, r);
        break;
      case CorrelationKind::Density:
        series.values[r] = connected(op.n_up + op.n_dn, r);
        break;
      case CorrelationKind::Pairing:
        series.values[r] = state.two_point(origin, op.pair,
                                           op.pair.transpose(),
                                           op.identity, r);
        break;
      case CorrelationKind::OneBodyUp:
        series.values[r] =
            r == 0 ? state.local_expectation(origin, op.n_up)
                   : state.two_point(origin, op.c_up.transpose() * op.parity,
                                     op.c_up, op.parity, r);
        break;
      case CorrelationKind::OneBodyDn:
        series.values[r] =
            r == 0 ? state.local_expectation(origin, op.n_dn)
                   : state.two_point(origin, op.c_dn.transpose() * op.parity,
                                     op.c_dn, op.parity, r);
        break;
    }
  }
  return series;
}

namespace {

void write_param_header(std::ostream& os, const std::string& kind_label,
                        const HubbardParams& p, int chi, int window) {
  os << " kind=" << kind_label << " t_up=" << p.t_up << " t_down=" << p.t_down
     << " U=" << p.U << " mu=" << p.mu << " dmu=" << p.dmu << " chi=" << chi
     << " M=" << window << '\n';
}

}  // namespace

void write_series(std::ostream& os, const CorrelationSeries& series,
                  const HubbardParams& params, int chi) {
  os << "# ahm.series.v1";
  write_param_header(os, kind_name(series.kind), params, chi, series.window);
  os << "r\tvalue\n";
  os.precision(15);
  for (std::size_t r = 0; r < series.values.size(); ++r)
    os << r << '\t' << series.values[r] << '\n';
}

void write_spectrum(std::ostream& os, const Spectrum& spectrum,
                    const std::string& kind_label, const HubbardParams& params,
                    int chi, int window) {
  os << "# ahm.spectrum.v1";
  write_param_header(os, kind_label, params, chi, window);
  os << "k_over_pi\tvalue\n";
  os.precision(15);
  for (std::size_t i = 0; i < spectrum.k.size(); ++i)
    os << spectrum.k[i] / std::numbers::pi << '\t' << spectrum.values[i]
       << '\n';
}

}  // namespace ahm
