#include "ahm/ed.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ahm {
namespace {

constexpr int kMaxSites = 10;
constexpr std::size_t kDenseLimit = 2000;
constexpr double kDegeneracyGap = 1e-10;
constexpr double kLanczosResidual = 1e-10;

std::vector<std::uint32_t> enumerate_masks(int sites, int particles) {
  std::vector<std::uint32_t> masks;
  for (std::uint32_t m = 0; m < (1u << sites); ++m)
    if (std::popcount(m) == particles) masks.push_back(m);
  return masks;
}

std::uint32_t low_bits(int n) {
  return n <= 0 ? 0u : (n >= 32 ? ~0u : ((1u << n) - 1u));
}

// Occupied modes strictly below mode (site, species) in site-major order,
// up before down within a site.
int modes_below(std::uint32_t up, std::uint32_t dn, int site, bool is_dn) {
  int count = std::popcount(up & low_bits(site)) +
              std::popcount(dn & low_bits(site));
  if (is_dn && ((up >> site) & 1u)) ++count;
  return count;
}

struct ModeOp {
  // Applies c (annihilate=true) or c+ at (site, species) to a configuration,
  // returning the Jordan-Wigner sign or 0 if the result vanishes.
  static int apply(std::uint32_t& up, std::uint32_t& dn, int site, bool is_dn,
                   bool annihilate) {
    std::uint32_t& mask = is_dn ? dn : up;
    const std::uint32_t bit = 1u << site;
    if (annihilate ? !(mask & bit) : (mask & bit)) return 0;
    const int below = modes_below(up, dn, site, is_dn);
    mask ^= bit;
    return (below % 2 == 0) ? 1 : -1;
  }
};

}  // namespace

SectorBasis SectorBasis::build(int sites, int n_up, int n_dn) {
  if (sites < 1 || sites > kMaxSites) {
    std::ostringstream msg;
    msg << "sector basis supports 1.." << kMaxSites << " sites, got " << sites;
    throw std::domain_error(msg.str());
  }
  if (n_up < 0 || n_up > sites || n_dn < 0 || n_dn > sites)
    throw std::domain_error("particle count outside [0, sites]");
  SectorBasis b;
  b.sites = sites;
  b.n_up = n_up;
  b.n_dn = n_dn;
  b.up_configs = enumerate_masks(sites, n_up);
  b.dn_configs = enumerate_masks(sites, n_dn);
  return b;
}

int SectorBasis::up_index(std::uint32_t mask) const {
  auto it = std::lower_bound(up_configs.begin(), up_configs.end(), mask);
  return (it != up_configs.end() && *it == mask)
             ? static_cast<int>(it - up_configs.begin())
             : -1;
}

int SectorBasis::dn_index(std::uint32_t mask) const {
  auto it = std::lower_bound(dn_configs.begin(), dn_configs.end(), mask);
  return (it != dn_configs.end() && *it == mask)
             ? static_cast<int>(it - dn_configs.begin())
             : -1;
}

Eigen::SparseMatrix<double> build_sector_hamiltonian(
    const HubbardParams& params, const SectorBasis& basis) {
  params.validate();
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  const auto n_dn_configs = static_cast<Eigen::Index>(basis.dn_configs.size());
  const double mu_up = params.mu_up();
  const double mu_dn = params.mu_dn();

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(dim) * (2 * basis.sites + 1));

  for (std::size_t iu = 0; iu < basis.up_configs.size(); ++iu) {
    const std::uint32_t up = basis.up_configs[iu];
    for (std::size_t id = 0; id < basis.dn_configs.size(); ++id) {
      const std::uint32_t dn = basis.dn_configs[id];
      const Eigen::Index row =
          static_cast<Eigen::Index>(iu) * n_dn_configs +
          static_cast<Eigen::Index>(id);

      const double diag = params.U * std::popcount(up & dn) -
                          mu_up * std::popcount(up) -
                          mu_dn * std::popcount(dn);
      if (diag != 0.0) triplets.emplace_back(row, row, diag);

      for (int site = 0; site + 1 < basis.sites; ++site) {
        // up hop: string crosses the dn mode of the left site
        const std::uint32_t pair_up = (1u << site) | (1u << (site + 1));
        if (std::popcount(up & pair_up) == 1) {
          const double sign = ((dn >> site) & 1u) ? -1.0 : 1.0;
          const int ju = basis.up_index(up ^ pair_up);
          const Eigen::Index col = static_cast<Eigen::Index>(ju) * n_dn_configs +
                                   static_cast<Eigen::Index>(id);
          triplets.emplace_back(row, col, -params.t_up * sign);
        }
        // dn hop: string crosses the up mode of the right site
        const std::uint32_t pair_dn = pair_up;
        if (std::popcount(dn & pair_dn) == 1) {
          const double sign = ((up >> (site + 1)) & 1u) ? -1.0 : 1.0;
          const int jd = basis.dn_index(dn ^ pair_dn);
          const Eigen::Index col = static_cast<Eigen::Index>(iu) * n_dn_configs +
                                   static_cast<Eigen::Index>(jd);
          triplets.emplace_back(row, col, -params.t_down * sign);
        }
      }
    }
  }

  Eigen::SparseMatrix<double> h(dim, dim);
  h.setFromTriplets(triplets.begin(), triplets.end());
  return h;
}

namespace {

SectorGround dense_lowest(const Eigen::SparseMatrix<double>& h) {
  Eigen::MatrixXd dense(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("dense eigensolver failed");
  SectorGround g;
  g.energy = es.eigenvalues()(0);
  g.vector = es.eigenvectors().col(0);
  g.residual = 0.0;
  return g;
}

SectorGround lanczos_lowest(const Eigen::SparseMatrix<double>& h) {
  const Eigen::Index dim = h.rows();
  const int m = static_cast<int>(std::min<Eigen::Index>(dim, 80));
  const int max_cycles = 400;

  std::mt19937_64 rng(0x1db5u);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v0(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v0[i] = dist(rng);
  v0.normalize();

  SectorGround g;
  for (int cycle = 0; cycle < max_cycles; ++cycle) {
    Eigen::MatrixXd basis(dim, m);
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(m);

    basis.col(0) = v0;
    int built = m;
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXd w = h * basis.col(j);
      alpha[j] = basis.col(j).dot(w);
      w -= alpha[j] * basis.col(j);
      if (j > 0) w -= beta[j - 1] * basis.col(j - 1);
      // full reorthogonalization
      w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
      const double nw = w.norm();
      if (j + 1 < m) {
        if (nw < 1e-14) {
          built = j + 1;
          break;
        }
        beta[j] = nw;
        basis.col(j + 1) = w / nw;
      }
    }

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(built, built);
    for (int j = 0; j < built; ++j) {
      tri(j, j) = alpha[j];
      if (j + 1 < built) tri(j, j + 1) = tri(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    Eigen::VectorXd ritz = basis.leftCols(built) * es.eigenvectors().col(0);
    ritz.normalize();
    g.energy = es.eigenvalues()(0);
    g.vector = ritz;
    g.residual = (h * ritz - g.energy * ritz).norm();
    if (g.residual <= kLanczosResidual) return g;
    v0 = ritz;
  }
  std::ostringstream msg;
  msg << "Lanczos did not reach residual " << kLanczosResidual
      << " (got " << g.residual << ", dim=" << dim << ")";
  throw std::runtime_error(msg.str());
}

}  // namespace

SectorGround ed_sector_ground(const HubbardParams& params, int sites,
                              int n_up, int n_dn) {
  const SectorBasis basis = SectorBasis::build(sites, n_up, n_dn);
  const Eigen::SparseMatrix<double> h = build_sector_hamiltonian(params, basis);
  if (basis.dimension() <= kDenseLimit) return dense_lowest(h);
  return lanczos_lowest(h);
}

EDResult ed_grand_ground(const HubbardParams& params, int sites) {
  EDResult result;
  result.sites = sites;
  bool first = true;
  std::vector<std::tuple<int, int, double, Eigen::VectorXd>> grounds;
  for (int nu = 0; nu <= sites; ++nu) {
    for (int nd = 0; nd <= sites; ++nd) {
      SectorGround g = ed_sector_ground(params, sites, nu, nd);
      grounds.emplace_back(nu, nd, g.energy, std::move(g.vector));
      if (first || g.energy < result.energy) {
        result.energy = g.energy;
        result.winner_up = nu;
        result.winner_dn = nd;
        first = false;
      }
    }
  }
  for (auto& [nu, nd, e, vec] : grounds) {
    if (e - result.energy < kDegeneracyGap) {
      result.degenerate_sectors.emplace_back(nu, nd);
      if (nu == result.winner_up && nd == result.winner_dn)
        result.ground_vector = std::move(vec);
    }
  }
  result.degenerate = result.degenerate_sectors.size() > 1;
  return result;
}

namespace {

// Ground-vector wrapper with mode-operator application between sectors.
struct SectorVector {
  SectorBasis basis;
  Eigen::VectorXd values;
};

SectorVector apply_mode_op(const SectorVector& in, int site, bool is_dn,
                           bool annihilate) {
  const int d_up = in.basis.n_up + (is_dn ? 0 : (annihilate ? -1 : 1));
  const int d_dn = in.basis.n_dn + (is_dn ? (annihilate ? -1 : 1) : 0);
  SectorVector out;
  if (d_up < 0 || d_up > in.basis.sites || d_dn < 0 || d_dn > in.basis.sites) {
    out.basis = in.basis;
    out.values = Eigen::VectorXd::Zero(0);
    return out;
  }
  out.basis = SectorBasis::build(in.basis.sites, d_up, d_dn);
  out.values = Eigen::VectorXd::Zero(
      static_cast<Eigen::Index>(out.basis.dimension()));
  const auto in_dn = static_cast<Eigen::Index>(in.basis.dn_configs.size());
  const auto out_dn = static_cast<Eigen::Index>(out.basis.dn_configs.size());
  for (std::size_t iu = 0; iu < in.basis.up_configs.size(); ++iu) {
    for (std::size_t id = 0; id < in.basis.dn_configs.size(); ++id) {
      const Eigen::Index row =
          static_cast<Eigen::Index>(iu) * in_dn + static_cast<Eigen::Index>(id);
      const double amp = in.values[row];
      if (amp == 0.0) continue;
      std::uint32_t up = in.basis.up_configs[iu];
      std::uint32_t dn = in.basis.dn_configs[id];
      const int sign = ModeOp::apply(up, dn, site, is_dn, annihilate);
      if (sign == 0) continue;
      const Eigen::Index col =
          static_cast<Eigen::Index>(out.basis.up_index(up)) * out_dn +
          static_cast<Eigen::Index>(out.basis.dn_index(dn));
      out.values[col] += sign * amp;
    }
  }
  return out;
}

double dot(const SectorVector& a, const SectorVector& b) {
  if (a.values.size() != b.values.size() || a.values.size() == 0) return 0.0;
  return a.values.dot(b.values);
}

double site_density(const SectorVector& psi, int site, bool is_dn) {
  double acc = 0.0;
  const auto dn_count = static_cast<Eigen::Index>(psi.basis.dn_configs.size());
  for (std::size_t iu = 0; iu < psi.basis.up_configs.size(); ++iu)
    for (std::size_t id = 0; id < psi.basis.dn_configs.size(); ++id) {
      const std::uint32_t mask =
          is_dn ? psi.basis.dn_configs[id] : psi.basis.up_configs[iu];
      if ((mask >> site) & 1u) {
        const Eigen::Index row =
            static_cast<Eigen::Index>(iu) * dn_count +
            static_cast<Eigen::Index>(id);
        acc += psi.values[row] * psi.values[row];
      }
    }
  return acc;
}

double density_product(const SectorVector& psi, int i, int j) {
  double acc = 0.0;
  const auto dn_count = static_cast<Eigen::Index>(psi.basis.dn_configs.size());
  for (std::size_t iu = 0; iu < psi.basis.up_configs.size(); ++iu)
    for (std::size_t id = 0; id < psi.basis.dn_configs.size(); ++id) {
      const std::uint32_t up = psi.basis.up_configs[iu];
      const std::uint32_t dn = psi.basis.dn_configs[id];
      const double ni = ((up >> i) & 1u) + ((dn >> i) & 1u);
      const double nj = ((up >> j) & 1u) + ((dn >> j) & 1u);
      if (ni != 0.0 && nj != 0.0) {
        const Eigen::Index row =
            static_cast<Eigen::Index>(iu) * dn_count +
            static_cast<Eigen::Index>(id);
        acc += ni * nj * psi.values[row] * psi.values[row];
      }
    }
  return acc;
}

double sz_product(const SectorVector& psi, int i, int j) {
  double acc = 0.0;
  const auto dn_count = static_cast<Eigen::Index>(psi.basis.dn_configs.size());
  for (std::size_t iu = 0; iu < psi.basis.up_configs.size(); ++iu)
    for (std::size_t id = 0; id < psi.basis.dn_configs.size(); ++id) {
      const std::uint32_t up = psi.basis.up_configs[iu];
      const std::uint32_t dn = psi.basis.dn_configs[id];
      const double szi = 0.5 * (((up >> i) & 1u) - ((dn >> i) & 1u));
      const double szj = 0.5 * (((up >> j) & 1u) - ((dn >> j) & 1u));
      if (szi != 0.0 && szj != 0.0) {
        const Eigen::Index row =
            static_cast<Eigen::Index>(iu) * dn_count +
            static_cast<Eigen::Index>(id);
        acc += szi * szj * psi.values[row] * psi.values[row];
      }
    }
  return acc;
}

// <(c+_up c_dn)_i psi | (c+_up c_dn)_j psi> and its mirror give the
// transverse spin correlators.
double transverse_spin(const SectorVector& psi, int i, int j) {
  auto raise_at = [&](int site) {
    SectorVector tmp = apply_mode_op(psi, site, true, true);  // c_dn
    return apply_mode_op(tmp, site, false, false);            // c+_up
  };
  auto lower_at = [&](int site) {
    SectorVector tmp = apply_mode_op(psi, site, false, true);  // c_up
    return apply_mode_op(tmp, site, true, false);              // c+_dn
  };
  const double plus_minus = dot(raise_at(i), raise_at(j));
  const double minus_plus = dot(lower_at(i), lower_at(j));
  return 0.25 * (plus_minus + minus_plus);
}

double pair_correlation(const SectorVector& psi, int i, int j) {
  auto create_pair = [&](int site) {
    SectorVector tmp = apply_mode_op(psi, site, false, false);  // c+_up
    return apply_mode_op(tmp, site, true, false);               // c+_dn
  };
  return dot(create_pair(i), create_pair(j));
}

double one_body(const SectorVector& psi, bool is_dn, int i, int j) {
  const SectorVector lhs = apply_mode_op(psi, i, is_dn, true);
  const SectorVector rhs = apply_mode_op(psi, j, is_dn, true);
  return dot(lhs, rhs);
}

}  // namespace

CorrelationSeries ed_correlations(const EDResult& result,
                                  CorrelationKind kind, int max_r) {
  const int origin = (result.sites - 1) / 2;
  if (max_r < 0 || origin + max_r >= result.sites)
    throw std::domain_error("correlation range beyond chain end");

  SectorVector psi;
  psi.basis =
      SectorBasis::build(result.sites, result.winner_up, result.winner_dn);
  psi.values = result.ground_vector;

  CorrelationSeries series;
  series.kind = kind;
  series.window = max_r;
  series.connected = kind_connected(kind);
  series.values.resize(max_r + 1);

  for (int r = 0; r <= max_r; ++r) {
    const int j = origin + r;
    double value = 0.0;
    switch (kind) {
      case CorrelationKind::SpinZ:
        value = sz_product(psi, origin, j) -
                0.5 * (site_density(psi, origin, false) -
                       site_density(psi, origin, true)) *
                    0.5 * (site_density(psi, j, false) -
                           site_density(psi, j, true));
        break;
      case CorrelationKind::SpinX:
      case CorrelationKind::SpinY:
        // one-point transverse magnetization vanishes in a number sector
        value = transverse_spin(psi, origin, j);
        break;
      case CorrelationKind::Density:
        value = density_product(psi, origin, j) -
                (site_density(psi, origin, false) +
                 site_density(psi, origin, true)) *
                    (site_density(psi, j, false) + site_density(psi, j, true));
        break;
      case CorrelationKind::Pairing:
        value = pair_correlation(psi, origin, j);
        break;
      case CorrelationKind::OneBodyUp:
        value = one_body(psi, false, origin, j);
        break;
      case CorrelationKind::OneBodyDn:
        value = one_body(psi, true, origin, j);
        break;
    }
    series.values[r] = value;
  }
  return series;
}

FreeFermionReference free_fermion_reference(double t, double mu) {
  if (!(t > 0.0)) throw std::domain_error("hopping must be positive");
  FreeFermionReference ref;
  if (mu <= -2.0 * t) {
    ref.density = 0.0;
    ref.energy_density = 0.0;
    return ref;
  }
  if (mu >= 2.0 * t) {
    ref.density = 1.0;
    ref.energy_density = -mu;
    return ref;
  }
  ref.density = std::acos(-mu / (2.0 * t)) / std::numbers::pi;
  ref.energy_density =
      -(2.0 * t / std::numbers::pi) * std::sin(std::numbers::pi * ref.density) -
      mu * ref.density;
  return ref;
}

}  // namespace ahm
