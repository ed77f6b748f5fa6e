#include <doctest.h>

#include <cmath>
#include <random>

#include "belltest/quantum_model.hpp"
#include "fixture_values.hpp"
#include "test_oracles.hpp"

using belltest::Angle;
using belltest::PairSource;
using belltest::SettingsQuad;

namespace {

const PairSource<double> kModel{fixture::kR};

const SettingsQuad<double> kAngles{{fixture::kAngleA},
                                   {fixture::kAngleAPrime},
                                   {fixture::kAngleB},
                                   {fixture::kAngleBPrime}};

}  // namespace

TEST_CASE("coincidence probability matches the closed form at the fixture") {
  const double p = belltest::coincidence_probability(
      kModel, Angle<double>{3.8}, Angle<double>{-3.8});
  CHECK(std::abs(p - fixture::kQ[0]) < 1e-12);
  CHECK(std::abs(p - 0.0606527) < 1e-6);

  const double p_anomalous = belltest::coincidence_probability(
      kModel, Angle<double>{-25.2}, Angle<double>{25.2});
  CHECK(std::abs(p_anomalous - fixture::kQ[3]) < 1e-12);
  CHECK(std::abs(p_anomalous - 0.0009340) < 1e-6);
}

TEST_CASE("coincidence probability agrees with the independent evaluation") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> angle(-180.0, 180.0);
  std::uniform_real_distribution<double> ratio(0.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const double r = ratio(rng);
    const double alpha = angle(rng);
    const double beta = angle(rng);
    const double p = belltest::coincidence_probability(
        PairSource<double>{r}, Angle<double>{alpha}, Angle<double>{beta});
    const double expected = static_cast<double>(
        oracle::coincidence_probability(r, alpha, beta));
    CHECK(std::abs(p - expected) < 1e-14);
  }
}

TEST_CASE("coincidence probability special values") {
  // Orthogonal analyzers kill both terms (up to rounding in cos(90 deg)).
  CHECK(belltest::coincidence_probability(PairSource<double>{0.7},
                                          Angle<double>{0.0},
                                          Angle<double>{90.0}) < 1e-30);
  // Maximally entangled state with aligned analyzers: cos^2(0)/2.
  for (double alpha : {0.0, 17.0, -63.5, 120.0}) {
    CHECK(belltest::coincidence_probability(PairSource<double>{1.0},
                                            Angle<double>{alpha},
                                            Angle<double>{alpha}) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("coincidence probability rejects bad input") {
  const double inf = std::numeric_limits<double>::infinity();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(belltest::coincidence_probability(
                      PairSource<double>{-0.1}, Angle<double>{0.0},
                      Angle<double>{0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(belltest::coincidence_probability(
                      PairSource<double>{nan}, Angle<double>{0.0},
                      Angle<double>{0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(belltest::coincidence_probability(
                      kModel, Angle<double>{inf}, Angle<double>{0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(belltest::coincidence_probability(
                      kModel, Angle<double>{0.0}, Angle<double>{-inf}),
                  std::invalid_argument);
}

TEST_CASE("coincidence probability range, symmetry and periodicity") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> angle(-180.0, 180.0);
  std::uniform_real_distribution<double> ratio(0.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const PairSource<double> model{ratio(rng)};
    const Angle<double> alpha{angle(rng)};
    const Angle<double> beta{angle(rng)};
    const double p = belltest::coincidence_probability(model, alpha, beta);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    // Exchange symmetry is exact: the amplitude is symmetric in (a, b).
    CHECK(p == belltest::coincidence_probability(model, beta, alpha));
    const double shifted = belltest::coincidence_probability(
        model, Angle<double>{alpha.degrees + 180.0}, beta);
    CHECK(std::abs(shifted - p) < 1e-12);
  }
}

TEST_CASE("product and maximally entangled special cases") {
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> angle(-180.0, 180.0);
  for (int i = 0; i < 300; ++i) {
    const double alpha = angle(rng);
    const double beta = angle(rng);
    const double a = alpha * M_PI / 180.0;
    const double b = beta * M_PI / 180.0;

    const double p0 = belltest::coincidence_probability(
        PairSource<double>{0.0}, Angle<double>{alpha}, Angle<double>{beta});
    CHECK(std::abs(p0 - std::sin(a) * std::sin(a) * std::sin(b) *
                            std::sin(b)) < 1e-12);

    const double p1 = belltest::coincidence_probability(
        PairSource<double>{1.0}, Angle<double>{alpha}, Angle<double>{beta});
    const double c = std::cos(a - b);
    CHECK(std::abs(p1 - 0.5 * c * c) < 1e-12);
  }
}

TEST_CASE("outcome distribution at the fixture setting") {
  const auto dist = belltest::outcome_distribution(
      kModel, Angle<double>{3.8}, Angle<double>{-3.8});
  CHECK(std::abs(dist.p_pp - 0.0606527) < 1e-6);
  CHECK(std::abs(dist.sum() - 1.0) < 1e-12);
}

TEST_CASE("outcome distribution degenerate states") {
  // Product state, both analyzers vertical: the pair is always (+,+).
  const auto product = belltest::outcome_distribution(
      PairSource<double>{0.0}, Angle<double>{90.0}, Angle<double>{90.0});
  CHECK(product.p_pp == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(product.p_pm) < 1e-12);
  CHECK(std::abs(product.p_mp) < 1e-12);
  CHECK(std::abs(product.p_mm) < 1e-12);

  // Maximally entangled, aligned analyzers: perfectly correlated halves.
  const auto aligned = belltest::outcome_distribution(
      PairSource<double>{1.0}, Angle<double>{0.0}, Angle<double>{0.0});
  CHECK(aligned.p_pp == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(aligned.p_mm == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(aligned.p_pm) < 1e-12);
  CHECK(std::abs(aligned.p_mp) < 1e-12);
}

TEST_CASE("outcome distribution normalization and marginal consistency") {
  std::mt19937 rng(44);
  std::uniform_real_distribution<double> angle(-180.0, 180.0);
  std::uniform_real_distribution<double> ratio(0.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const PairSource<double> model{ratio(rng)};
    const Angle<double> alpha{angle(rng)};
    const Angle<double> beta{angle(rng)};
    const auto dist = belltest::outcome_distribution(model, alpha, beta);
    CHECK(std::abs(dist.sum() - 1.0) < 1e-12);
    CHECK(std::abs(dist.p_pp + dist.p_pm -
                   belltest::singles_probability(model, alpha)) < 1e-12);
    CHECK(std::abs(dist.p_pp + dist.p_mp -
                   belltest::singles_probability(model, beta)) < 1e-12);
  }
}

TEST_CASE("singles probability values") {
  CHECK(std::abs(belltest::singles_probability(kModel, Angle<double>{3.8}) -
                 0.0671556) < 1e-6);
  CHECK(std::abs(belltest::singles_probability(kModel, Angle<double>{3.8}) -
                 fixture::kSinglesA) < 1e-12);
  // sin^2 = 1 reduces the marginal to 1/(1+r^2).
  CHECK(std::abs(belltest::singles_probability(kModel, Angle<double>{90.0}) -
                 1.0 / 1.0676) < 1e-6);
  for (double alpha : {-120.0, 0.0, 33.0}) {
    CHECK(belltest::singles_probability(PairSource<double>{1.0},
                                        Angle<double>{alpha}) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
  CHECK_THROWS_AS(belltest::singles_probability(
                      kModel,
                      Angle<double>{std::numeric_limits<double>::quiet_NaN()}),
                  std::invalid_argument);
}

TEST_CASE("CH statistic at the fixture angles") {
  const double j = belltest::ch_statistic(kModel, kAngles, 1.0, 1.0);
  CHECK(std::abs(j - 0.05494) < 1e-4);
  CHECK(std::abs(j - fixture::kChAtUnitEfficiency) < 1e-12);

  // Cross-check against the independent evaluation of the five terms.
  const long double expected =
      oracle::coincidence_probability(0.26L, 3.8L, -3.8L) +
      oracle::coincidence_probability(0.26L, 3.8L, 25.2L) +
      oracle::coincidence_probability(0.26L, -25.2L, -3.8L) -
      oracle::coincidence_probability(0.26L, -25.2L, 25.2L) -
      oracle::singles_probability(0.26L, 3.8L) -
      oracle::singles_probability(0.26L, -3.8L);
  CHECK(std::abs(j - static_cast<double>(expected)) < 1e-14);
}

TEST_CASE("CH statistic edge cases") {
  // Zero efficiency scales every term to zero.
  CHECK(belltest::ch_statistic(kModel, kAngles, 0.0, 0.0) == 0.0);
  // r = 0 with all angles at zero: every probability in the expression is 0.
  const SettingsQuad<double> zeros{{0.0}, {0.0}, {0.0}, {0.0}};
  CHECK(belltest::ch_statistic(PairSource<double>{0.0}, zeros, 1.0, 1.0) ==
        0.0);
  CHECK_THROWS_AS(belltest::ch_statistic(kModel, kAngles, -0.1, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(belltest::ch_statistic(kModel, kAngles, 1.0, 1.1),
                  std::invalid_argument);
}

TEST_CASE("critical efficiency at the fixture angles") {
  const double eta = belltest::critical_efficiency(kModel, kAngles);
  CHECK(std::abs(eta - 0.70970) < 5e-4);
  CHECK(std::abs(eta - fixture::kCriticalEfficiency) < 1e-12);
}

TEST_CASE("critical efficiency degenerate geometries") {
  // All angles equal: the combination and the singles sum cancel exactly.
  const SettingsQuad<double> zeros{{0.0}, {0.0}, {0.0}, {0.0}};
  CHECK(belltest::critical_efficiency(kModel, zeros) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // Orthogonal a/b pairs: all coincidence probabilities vanish.
  const SettingsQuad<double> orthogonal{{0.0}, {0.0}, {90.0}, {90.0}};
  CHECK_THROWS_AS(belltest::critical_efficiency(kModel, orthogonal),
                  belltest::DegenerateError);
}

TEST_CASE("CH statistic crosses zero exactly at the critical efficiency") {
  std::mt19937 rng(45);
  std::uniform_real_distribution<double> angle(-90.0, 90.0);
  std::uniform_real_distribution<double> ratio(0.1, 1.0);
  int accepted = 0;
  while (accepted < 200) {
    const PairSource<double> model{ratio(rng)};
    const SettingsQuad<double> settings{
        {angle(rng)}, {angle(rng)}, {angle(rng)}, {angle(rng)}};
    double eta_star = 0.0;
    try {
      eta_star = belltest::critical_efficiency(model, settings);
    } catch (const belltest::DegenerateError&) {
      continue;  // no positive coincidence combination, skip
    }
    if (eta_star >= 1.0) {
      continue;
    }
    ++accepted;
    CHECK(std::abs(belltest::ch_statistic(model, settings, eta_star,
                                          eta_star)) < 1e-12);
    const double below = 0.5 * eta_star;
    const double above = 0.5 * (eta_star + 1.0);
    CHECK(belltest::ch_statistic(model, settings, below, below) < 0.0);
    CHECK(belltest::ch_statistic(model, settings, above, above) > 0.0);
    CHECK(belltest::ch_statistic(model, settings, 1.0, 1.0) > 0.0);
  }
}
