#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ahm/classifier.hpp"

using namespace ahm;

namespace {

Spectrum spectrum_from_series(const std::vector<double>& series) {
  CorrelationSeries s{CorrelationKind::Pairing,
                      static_cast<int>(series.size()) - 1, false, series};
  return cosine_transform(s);
}

Spectrum cosine_series_spectrum(double q, int m = 100) {
  std::vector<double> vals(m + 1);
  for (int r = 0; r <= m; ++r) vals[r] = std::cos(q * r);
  return spectrum_from_series(vals);
}

Spectrum flat_spectrum(double value = 1.0) {
  Spectrum s;
  s.k = default_k_grid();
  s.values.assign(s.k.size(), value);
  return s;
}

}  // namespace

TEST_CASE("find_peak") {
  SUBCASE("flat spectrum has zero prominence at k=0") {
    PeakInfo p = find_peak(flat_spectrum());
    CHECK(p.prominence == 0.0);
    CHECK(p.k == 0.0);
  }
  SUBCASE("cosine input peaks at its momentum") {
    const double q = 0.3 * std::numbers::pi;
    PeakInfo p = find_peak(cosine_series_spectrum(q));
    CHECK(std::abs(p.k - q) <= std::numbers::pi / 400.0 + 1e-12);
    CHECK(p.prominence > 0.5);
  }
  SUBCASE("exclusion window") {
    const double q = 0.2 * std::numbers::pi;
    Spectrum s = cosine_series_spectrum(q);
    PeakInfo p = find_peak(s, 0.5 * std::numbers::pi);
    CHECK(p.k >= 0.5 * std::numbers::pi);
    CHECK_THROWS(find_peak(s, 4.0));
  }
  SUBCASE("empty spectrum rejected") {
    Spectrum s;
    CHECK_THROWS_AS(find_peak(s), std::invalid_argument);
  }
}

TEST_CASE("detect_dip") {
  const double k_tol = std::numbers::pi / 100.0;
  SUBCASE("balanced momenta are not applicable") {
    Spectrum s = flat_spectrum();
    DipResult d = detect_dip(s, 0.5 * std::numbers::pi, 0.5 * std::numbers::pi,
                             k_tol);
    CHECK_FALSE(d.found);
  }
  SUBCASE("constructed local minimum is found at the target") {
    Spectrum s = flat_spectrum(1.0);
    // dip at 0.7 pi; target 2*0.5pi - 0.3pi = 0.7pi
    const double k_up = 0.5 * std::numbers::pi;
    const double k_dn = 0.3 * std::numbers::pi;
    for (std::size_t i = 0; i < s.k.size(); ++i) {
      const double d = std::abs(s.k[i] - 0.7 * std::numbers::pi);
      if (d < 0.05) s.values[i] = 0.5 + 5.0 * d;
    }
    DipResult d = detect_dip(s, k_up, k_dn, k_tol);
    CHECK(d.found);
    CHECK(std::abs(d.k - 0.7 * std::numbers::pi) <= 3.0 * k_tol);
  }
  SUBCASE("target beyond pi folds back") {
    Spectrum s = flat_spectrum(1.0);
    // k_up = 0.9pi, k_dn = 0.4pi: raw target 1.4pi folds to 0.6pi
    for (std::size_t i = 0; i < s.k.size(); ++i) {
      const double d = std::abs(s.k[i] - 0.6 * std::numbers::pi);
      if (d < 0.05) s.values[i] = 0.5 + 5.0 * d;
    }
    DipResult d = detect_dip(s, 0.9 * std::numbers::pi,
                             0.4 * std::numbers::pi, k_tol);
    CHECK(d.found);
    CHECK(std::abs(d.k - 0.6 * std::numbers::pi) <= 3.0 * k_tol);
  }
}

TEST_CASE("classification of pinned occupations") {
  Spectrum flat = flat_spectrum();
  CHECK(classify(0.0, 0.0, flat, flat).label == PhaseLabel::NormalVacuum);
  CHECK(classify(1.0, 1.0, flat, flat).label == PhaseLabel::NormalFull);
  CHECK(classify(0.5, 0.0, flat, flat).label ==
        PhaseLabel::NormalFullyPolarized);
  CHECK(classify(0.0005, 0.4, flat, flat).label ==
        PhaseLabel::NormalFullyPolarized);
  CHECK(classify(1.0, 0.5, flat, flat).label ==
        PhaseLabel::NormalBandInsulatorOneSpecies);
  CHECK(classify(1.0, 0.0, flat, flat).label ==
        PhaseLabel::NormalBandInsulatorOneSpecies);
}

TEST_CASE("classification of polarized pairing states") {
  const double n_up = 0.55, n_dn = 0.33;
  const double k_p = std::numbers::pi * (n_up - n_dn);
  Spectrum d_flat = flat_spectrum();

  SUBCASE("peak at the predicted momentum is FFLO") {
    Spectrum p_k = cosine_series_spectrum(k_p);
    Classification c = classify(n_up, n_dn, p_k, d_flat);
    CHECK(c.label == PhaseLabel::Fflo);
    CHECK(std::abs(c.evidence.k_p_measured - k_p) <=
          std::numbers::pi / 100.0);
    CHECK(c.evidence.k_p_predicted == doctest::Approx(k_p));
  }
  SUBCASE("peak elsewhere stays unclassified") {
    Spectrum p_k = cosine_series_spectrum(k_p + 0.2 * std::numbers::pi);
    CHECK(classify(n_up, n_dn, p_k, d_flat).label ==
          PhaseLabel::Unclassified);
  }
  SUBCASE("featureless pairing stays unclassified") {
    CHECK(classify(n_up, n_dn, flat_spectrum(0.0), d_flat).label ==
          PhaseLabel::Unclassified);
  }
}

TEST_CASE("classification of balanced states") {
  const double n = 0.545;
  SUBCASE("sharp density peak wins") {
    Spectrum d_k = cosine_series_spectrum(0.9 * std::numbers::pi);
    std::vector<double> weak(101, 0.0);
    weak[0] = 0.3;  // weak flat pairing background
    for (int r = 1; r <= 100; ++r) weak[r] = 0.3 / (1.0 + r);
    Spectrum p_k = spectrum_from_series(weak);
    Classification c = classify(n, n, p_k, d_k);
    CHECK(c.label == PhaseLabel::BalancedCdwDominant);
    CHECK(std::abs(c.evidence.d_peak_k - 0.9 * std::numbers::pi) < 0.05);
  }
  SUBCASE("sharp zero-momentum pairing wins") {
    std::vector<double> decay(101);
    for (int r = 0; r <= 100; ++r) decay[r] = 1.0 / std::sqrt(1.0 + r);
    Spectrum p_k = spectrum_from_series(decay);
    std::vector<double> weak(101, 0.0);
    weak[0] = 0.2;
    Spectrum d_k = spectrum_from_series(weak);
    CHECK(classify(n, n, p_k, d_k).label == PhaseLabel::BalancedSsDominant);
  }
}

TEST_CASE("every density pair receives exactly one label") {
  Spectrum p_k = cosine_series_spectrum(0.25 * std::numbers::pi);
  Spectrum d_k = cosine_series_spectrum(0.8 * std::numbers::pi);
  for (double nu = 0.0; nu <= 1.0; nu += 0.125)
    for (double nd = 0.0; nd <= 1.0; nd += 0.125) {
      Classification c = classify(nu, nd, p_k, d_k);
      CHECK(label_name(c.label) != "");
      CHECK(label_from_name(label_name(c.label)) == c.label);
    }
}

TEST_CASE("symmetry coordinate maps") {
  auto [mu1, dmu1] = particle_hole_map(-2.0, 0.0, -4.0);
  CHECK(mu1 == doctest::Approx(-2.0));
  CHECK(dmu1 == doctest::Approx(0.0));  // fixed point

  auto [mu2, dmu2] = particle_hole_map(-1.0, 0.5, -4.0);
  CHECK(mu2 == doctest::Approx(-3.0));
  CHECK(dmu2 == doctest::Approx(-0.5));

  auto [mu3, dmu3] = spin_flip_map(-1.3, 0.8);
  CHECK(mu3 == doctest::Approx(-1.3));
  CHECK(dmu3 == doctest::Approx(-0.8));
}

TEST_CASE("threshold validation") {
  ClassifierThresholds t;
  CHECK_NOTHROW(t.validate());
  t.min_prominence = 0.0;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}
