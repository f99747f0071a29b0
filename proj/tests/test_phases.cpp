#include <doctest.h>

#include <wheelbounds/phases.hpp>

#include <random>

using namespace wheelbounds;

TEST_CASE("conductor set validation") {
  ConductorSet c = make_conductors(1.0, 2.0);
  CHECK(c.k1 == 1.0);
  CHECK(c.k2 == 2.0);

  CHECK_NOTHROW(make_conductors(3.0, 3.0)); // equal conductors are allowed
  CHECK_THROWS_AS(make_conductors(0.0, 1.0), NonPositiveError);
  CHECK_THROWS_AS(make_conductors(-1.0, 1.0), NonPositiveError);
  CHECK_THROWS_AS(make_conductors(2.0, 1.0), UnorderedError);
  CHECK_THROWS_AS(make_conductors(1.0, std::numeric_limits<double>::infinity()),
                  NonPositiveError);
}

TEST_CASE("fraction validation") {
  Fractions f = make_fractions(0.3, 0.25);
  CHECK(f.m1 == 0.3);
  CHECK(f.m2 == 0.25);
  CHECK(f.m3() == doctest::Approx(0.45).epsilon(1e-14));

  CHECK_NOTHROW(make_fractions(0.0, 0.0));       // pure ideal phase
  CHECK_NOTHROW(make_fractions(1.0, 0.0));       // pure material 1
  CHECK_NOTHROW(make_fractions(0.5, 0.5));       // no ideal phase
  CHECK(make_fractions(0.5, 0.5).m3() == 0.0);
  CHECK_THROWS_AS(make_fractions(-0.1, 0.5), OutOfSimplexError);
  CHECK_THROWS_AS(make_fractions(0.6, 0.6), OutOfSimplexError);
  // tiny overshoot inside the 1e-12 slack is accepted and m3 clamps to zero
  Fractions g = make_fractions(0.5, 0.5 + 5e-13);
  CHECK(g.m3() == 0.0);
}

TEST_CASE("regime thresholds at the reference point") {
  ConductorSet c = make_conductors(1.0, 2.0);
  RegimeThresholds th = regime_thresholds(c, 0.25);
  // 2*k1*(sqrt(m2) - m2)/(k1 + k2) and (k1/k2)*(sqrt(m2) - m2)
  CHECK(th.m11 == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(th.m12 == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("regime classification with boundary ties") {
  ConductorSet c = make_conductors(1.0, 2.0);
  CHECK(classify_regime(c, make_fractions(0.30, 0.25)) == Regime::large_m1);
  CHECK(classify_regime(c, make_fractions(0.14, 0.25)) == Regime::intermediate);
  CHECK(classify_regime(c, make_fractions(0.10, 0.25)) == Regime::small_m1);

  RegimeThresholds th = regime_thresholds(c, 0.25);
  CHECK(classify_regime(c, make_fractions(th.m11, 0.25)) == Regime::large_m1);
  CHECK(classify_regime(c, make_fractions(th.m12, 0.25)) == Regime::intermediate);
}

TEST_CASE("thresholds vanish for single-material mixtures") {
  ConductorSet c = make_conductors(0.7, 4.0);
  for (double m2 : {0.0, 1.0}) {
    RegimeThresholds th = regime_thresholds(c, m2);
    CHECK(th.m11 == doctest::Approx(0.0));
    CHECK(th.m12 == doctest::Approx(0.0));
  }
  CHECK(classify_regime(c, make_fractions(0.0, 0.0)) == Regime::large_m1);
  CHECK(classify_regime(c, make_fractions(0.0, 1.0)) == Regime::large_m1);
}

TEST_CASE("threshold ordering m12 <= m11 over random inputs") {
  std::mt19937 rng(20260816u);
  std::uniform_real_distribution<double> logk(-2.0, 2.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    double a = std::exp(logk(rng));
    double b = std::exp(logk(rng));
    ConductorSet c = make_conductors(std::min(a, b), std::max(a, b));
    RegimeThresholds th = regime_thresholds(c, unif(rng));
    CHECK(th.m12 <= th.m11 + 1e-15);
    CHECK(th.m11 >= 0.0);
  }
}

TEST_CASE("regime index is monotone in m1") {
  auto rank = [](Regime r) {
    switch (r) {
      case Regime::small_m1: return 0;
      case Regime::intermediate: return 1;
      case Regime::large_m1: return 2;
    }
    return -1;
  };
  std::mt19937 rng(7u);
  std::uniform_real_distribution<double> logk(-1.5, 1.5);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  for (int trial = 0; trial < 200; ++trial) {
    double a = std::exp(logk(rng));
    double b = std::exp(logk(rng));
    ConductorSet c = make_conductors(std::min(a, b), std::max(a, b));
    double m2 = unif(rng);
    int prev = 0;
    for (int j = 0; j <= 100; ++j) {
      double m1 = (1.0 - m2) * j / 100.0;
      int cur = rank(classify_regime(c, make_fractions(m1, m2)));
      CHECK(cur >= prev);
      prev = cur;
    }
  }
}
