#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "ahm/ed.hpp"
#include "ahm/evolution.hpp"
#include "ahm/observables.hpp"

using namespace ahm;

namespace {

TrotterSchedule quick_schedule() {
  TrotterSchedule s;
  s.stages = {{0.1, 800, 1e-9, 1e-8},
              {0.05, 500, 1e-9, 1e-8},
              {0.02, 400, 1e-9, 1e-8}};
  return s;
}

TrotterSchedule tight_finite_schedule() {
  TrotterSchedule s;
  s.stages = {{0.1, 1500, 1e-11, 1e-10},
              {0.05, 800, 1e-11, 1e-10},
              {0.02, 600, 1e-12, 1e-11},
              {0.01, 400, 1e-12, 1e-11}};
  return s;
}

}  // namespace

TEST_CASE("cosine transform") {
  const int m = 100;
  SUBCASE("zero series") {
    CorrelationSeries zeros{CorrelationKind::Density, m, true,
                            std::vector<double>(m + 1, 0.0)};
    Spectrum s = cosine_transform(zeros);
    for (double v : s.values) CHECK(v == 0.0);
  }
  SUBCASE("delta at r=0 gives a flat spectrum") {
    std::vector<double> delta(m + 1, 0.0);
    delta[0] = 1.0;
    CorrelationSeries series{CorrelationKind::Density, m, true, delta};
    Spectrum s = cosine_transform(series);
    for (double v : s.values)
      CHECK(v == doctest::Approx(1.0 / std::sqrt(double(m))).epsilon(1e-12));
  }
  SUBCASE("pure cosine peaks at its own momentum") {
    const double q = 0.3 * std::numbers::pi;
    std::vector<double> vals(m + 1);
    for (int r = 0; r <= m; ++r) vals[r] = std::cos(q * r);
    CorrelationSeries series{CorrelationKind::Density, m, true, vals};
    Spectrum s = cosine_transform(series);
    std::size_t argmax = 0;
    for (std::size_t i = 1; i < s.values.size(); ++i)
      if (s.values[i] > s.values[argmax]) argmax = i;
    CHECK(std::abs(s.k[argmax] - q) <= std::numbers::pi / 400.0 + 1e-12);
  }
  SUBCASE("linearity") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> xa(m + 1), xb(m + 1), combo(m + 1);
    for (int r = 0; r <= m; ++r) {
      xa[r] = dist(rng);
      xb[r] = dist(rng);
      combo[r] = 2.5 * xa[r] - 1.25 * xb[r];
    }
    CorrelationSeries sa{CorrelationKind::Density, m, true, xa};
    CorrelationSeries sb{CorrelationKind::Density, m, true, xb};
    CorrelationSeries sc{CorrelationKind::Density, m, true, combo};
    Spectrum ta = cosine_transform(sa), tb = cosine_transform(sb),
             tc = cosine_transform(sc);
    for (std::size_t i = 0; i < tc.values.size(); ++i)
      CHECK(std::abs(tc.values[i] -
                     (2.5 * ta.values[i] - 1.25 * tb.values[i])) < 1e-12);
  }
  SUBCASE("length mismatch is rejected") {
    CorrelationSeries bad{CorrelationKind::Density, m, true,
                          std::vector<double>(m, 0.0)};
    CHECK_THROWS_AS(cosine_transform(bad), std::invalid_argument);
  }
}

TEST_CASE("product-state correlators") {
  const int m = 20;
  SUBCASE("vacuum") {
    CanonicalIMPS vac = CanonicalIMPS::product_state(4, 1, {{0.0, 0.0}});
    CorrelationSeries sz = spin_correlation(vac, 'z', m);
    for (double v : sz.values) CHECK(std::abs(v) < 1e-14);
    CorrelationSeries pair = pairing_correlation(vac, m);
    CHECK(pair.values[0] == doctest::Approx(1.0));
    for (int r = 1; r <= m; ++r) CHECK(std::abs(pair.values[r]) < 1e-14);
  }
  SUBCASE("fully occupied blocks pair creation") {
    CanonicalIMPS full = CanonicalIMPS::product_state(4, 1, {{1.0, 1.0}});
    CorrelationSeries pair = pairing_correlation(full, m);
    CHECK(std::abs(pair.values[0]) < 1e-14);
  }
  SUBCASE("polarized product state has no connected spin-z correlations") {
    CanonicalIMPS pol = CanonicalIMPS::product_state(4, 1, {{1.0, 0.0}});
    CorrelationSeries sz = spin_correlation(pol, 'z', m);
    for (int r = 1; r <= m; ++r) CHECK(std::abs(sz.values[r]) < 1e-13);
  }
}

TEST_CASE("invariants on a converged interacting state") {
  HubbardParams p{1.0, 0.5, -4.0, -2.0, 1.0};
  GroundStateResult gs = find_ground_state(p, quick_schedule(), 16, {});
  const int m = 30;

  SUBCASE("transverse spin components degenerate") {
    CorrelationSeries sx = spin_correlation(gs.state, 'x', m);
    CorrelationSeries sy = spin_correlation(gs.state, 'y', m);
    for (int r = 0; r <= m; ++r)
      CHECK(std::abs(sx.values[r] - sy.values[r]) <= 1e-6);
  }
  SUBCASE("density variance non-negative") {
    CorrelationSeries d = density_correlation(gs.state, m);
    CHECK(d.values[0] >= 0.0);
  }
  SUBCASE("one-body correlator at r=0 equals the density") {
    auto [n_up, n_dn] = densities(gs.state);
    CorrelationSeries up = one_body_correlation(gs.state, Species::Up, m);
    CorrelationSeries dn = one_body_correlation(gs.state, Species::Dn, m);
    CHECK(std::abs(up.values[0] - n_up) < 1e-8);
    CHECK(std::abs(dn.values[0] - n_dn) < 1e-8);
  }
}

TEST_CASE("free-fermion one-body correlator matches the analytic kernel") {
  HubbardParams p{1.0, 1.0, 0.0, -1.0, 0.0};
  GroundStateResult gs = find_ground_state(p, quick_schedule(), 24, {});
  CorrelationSeries up = one_body_correlation(gs.state, Species::Up, 30);

  const double k_f = std::numbers::pi / 3.0;  // filling 1/3
  for (int r = 1; r <= 10; ++r) {
    const double exact = std::sin(k_f * r) / (std::numbers::pi * r);
    CHECK(std::abs(up.values[r] - exact) < 1e-2);
  }

  // momentum distribution is maximal at k=0 and drops past k_F
  Spectrum n_k = cosine_transform(up);
  std::size_t argmax = 0;
  double max_drop = 0.0;
  std::size_t drop_at = 0;
  for (std::size_t i = 1; i < n_k.values.size(); ++i) {
    if (n_k.values[i] > n_k.values[argmax]) argmax = i;
    const double drop = n_k.values[i - 1] - n_k.values[i];
    if (drop > max_drop) {
      max_drop = drop;
      drop_at = i;
    }
  }
  CHECK(argmax == 0);
  CHECK(std::abs(n_k.k[drop_at] - k_f) < 3.0 * std::numbers::pi / 100.0);
}

TEST_CASE("fermi momenta") {
  auto [ku, kd] = fermi_momenta(0.5, 0.5);
  CHECK(ku == doctest::Approx(std::numbers::pi / 2));
  CHECK(kd == doctest::Approx(std::numbers::pi / 2));
  auto [ku2, kd2] = fermi_momenta(1.0, 0.0);
  CHECK(ku2 == doctest::Approx(std::numbers::pi));
  CHECK(kd2 == doctest::Approx(0.0));
}

TEST_CASE("finite-chain correlators match exact diagonalization") {
  HubbardParams p{1.0, 0.5, -4.0, -2.0, 1.0};
  const int sites = 6;
  FiniteGroundStateResult tebd =
      finite_chain_ground_state(p, sites, tight_finite_schedule(), 64, 1);
  EDResult ed = ed_grand_ground(p, sites);
  REQUIRE_FALSE(ed.degenerate);
  CHECK(std::abs(tebd.total_energy - ed.energy) < 1e-6);

  const int max_r = sites - 1 - (sites - 1) / 2;
  for (CorrelationKind kind :
       {CorrelationKind::SpinX, CorrelationKind::SpinY, CorrelationKind::SpinZ,
        CorrelationKind::Density, CorrelationKind::Pairing,
        CorrelationKind::OneBodyUp, CorrelationKind::OneBodyDn}) {
    CorrelationSeries mps = correlation_series(tebd.state, kind, max_r);
    CorrelationSeries ref = ed_correlations(ed, kind, max_r);
    for (int r = 0; r <= max_r; ++r)
      CHECK(std::abs(mps.values[r] - ref.values[r]) < 1e-5);
  }
}

TEST_CASE("series and spectrum writers") {
  CanonicalIMPS vac = CanonicalIMPS::product_state(4, 1, {{0.0, 0.0}});
  CorrelationSeries pair = pairing_correlation(vac, 5);
  HubbardParams p{1.0, 0.15, -4.0, -1.9, 1.1};
  std::ostringstream os;
  write_series(os, pair, p, 60);
  CHECK(os.str().find("# ahm.series.v1 kind=pairing") == 0);
  CHECK(os.str().find("t_down=0.15") != std::string::npos);

  std::ostringstream ks;
  write_spectrum(ks, cosine_transform(pair), "pairing", p, 60, 5);
  CHECK(ks.str().find("# ahm.spectrum.v1") == 0);
}
