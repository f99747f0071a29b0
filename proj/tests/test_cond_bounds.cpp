#include <doctest.h>

#include <wheelbounds/cond_bounds.hpp>

#include <cmath>
#include <random>

using namespace wheelbounds;

namespace {

const ConductorSet ref = make_conductors(1.0, 2.0);

double large_m1_formula(const ConductorSet& c, double m1, double m2) {
  return -c.k1 + 1.0 / (m1 / (2.0 * c.k1) + m2 / (c.k1 + c.k2));
}

double intermediate_formula(const ConductorSet& c, double m1, double m2) {
  double w = 1.0 - std::sqrt(m2);
  return c.k2 + 2.0 * c.k1 * w * w / m1;
}

double small_m1_formula(const ConductorSet& c, double m1, double m2) {
  return -c.k2 + 1.0 / (m1 / (2.0 * c.k1) + m2 / (2.0 * c.k2));
}

ConductorSet random_conductors(std::mt19937& rng) {
  std::uniform_real_distribution<double> logk(-2.0, 2.0);
  double a = std::exp(logk(rng));
  double b = std::exp(logk(rng));
  return make_conductors(std::min(a, b), std::max(a, b));
}

} // namespace

TEST_CASE("reference bounds in the three regimes") {
  BoundResult r1 = lower_bound(ref, make_fractions(0.3, 0.25));
  CHECK(r1.regime == Regime::large_m1);
  CHECK(r1.value == doctest::Approx(23.0 / 7.0).epsilon(1e-12));
  CHECK(r1.t_opt == 1.0);

  BoundResult r2 = lower_bound(ref, make_fractions(0.14, 0.25));
  CHECK(r2.regime == Regime::intermediate);
  CHECK(r2.value == doctest::Approx(39.0 / 7.0).epsilon(1e-12));
  CHECK(r2.t_opt == doctest::Approx(11.0 / 7.0).epsilon(1e-12));

  BoundResult r3 = lower_bound(ref, make_fractions(0.1, 0.25));
  CHECK(r3.regime == Regime::small_m1);
  CHECK(r3.value == doctest::Approx(62.0 / 9.0).epsilon(1e-12));
  CHECK(r3.t_opt == 2.0);
}

TEST_CASE("pure materials reproduce their own conductivities") {
  CHECK(lower_bound(ref, make_fractions(1.0, 0.0)).value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lower_bound(ref, make_fractions(0.0, 1.0)).value == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("no ideal phase reduces to the two-material bound") {
  // classical two-phase value k1 + m2 / (1/(k2 - k1) + m1/(2 k1))
  BoundResult r = lower_bound(ref, make_fractions(0.5, 0.5));
  CHECK(r.regime == Regime::large_m1);
  CHECK(r.value == doctest::Approx(1.4).epsilon(1e-13));
  double classical = 1.0 + 0.5 / (1.0 / (2.0 - 1.0) + 0.5 / 2.0);
  CHECK(r.value == doctest::Approx(classical).epsilon(1e-13));

  std::mt19937 rng(99u);
  std::uniform_real_distribution<double> unif(0.02, 0.98);
  for (int i = 0; i < 500; ++i) {
    ConductorSet c = random_conductors(rng);
    double m1 = unif(rng);
    BoundResult b = lower_bound(c, make_fractions(m1, 1.0 - m1));
    CHECK(b.regime == Regime::large_m1); // two-material mixtures never leave this regime
    double cl = c.k1 + (1.0 - m1) / (1.0 / (c.k2 - c.k1 + 1e-300) + m1 / (2.0 * c.k1));
    CHECK(b.value == doctest::Approx(cl).epsilon(1e-10));
  }
}

TEST_CASE("no weak material reduces to ideal-core coated circles") {
  BoundResult r = lower_bound(ref, make_fractions(0.0, 0.25));
  CHECK(r.value == doctest::Approx(14.0).epsilon(1e-13));
  // k2 (1 + m3) / (1 - m3) with m3 = 0.75
  CHECK(r.value == doctest::Approx(2.0 * 1.75 / 0.25).epsilon(1e-13));
}

TEST_CASE("bound is continuous across both regime thresholds") {
  std::mt19937 rng(20260816u);
  std::uniform_real_distribution<double> unif(0.01, 0.99);
  for (int i = 0; i < 1000; ++i) {
    ConductorSet c = random_conductors(rng);
    double m2 = unif(rng);
    RegimeThresholds th = regime_thresholds(c, m2);

    if (th.m11 > 1e-8 && th.m11 + m2 < 1.0) {
      double a = large_m1_formula(c, th.m11, m2);
      double b = intermediate_formula(c, th.m11, m2);
      CHECK(std::abs(a - b) <= 1e-10 * std::abs(a));
    }
    if (th.m12 > 1e-8 && th.m12 + m2 < 1.0) {
      double a = intermediate_formula(c, th.m12, m2);
      double b = small_m1_formula(c, th.m12, m2);
      CHECK(std::abs(a - b) <= 1e-10 * std::abs(a));
    }
  }
}

TEST_CASE("t_opt is continuous and stays inside [k1, k2]") {
  std::mt19937 rng(5150u);
  std::uniform_real_distribution<double> unif(0.01, 0.9);
  for (int i = 0; i < 1000; ++i) {
    ConductorSet c = random_conductors(rng);
    double m2 = unif(rng);
    RegimeThresholds th = regime_thresholds(c, m2);
    if (th.m12 <= 1e-8 || th.m11 + m2 >= 1.0) continue;

    double m1 = th.m12 + (th.m11 - th.m12) * unif(rng);
    BoundResult r = lower_bound(c, make_fractions(m1, m2));
    CHECK(r.t_opt >= c.k1 - 1e-12 * c.k1);
    CHECK(r.t_opt <= c.k2 + 1e-12 * c.k2);

    // endpoints of the intermediate window touch k1 and k2
    BoundResult at11 = lower_bound(c, make_fractions(th.m11 * (1.0 - 1e-13), m2));
    if (at11.regime == Regime::intermediate) {
      CHECK(at11.t_opt == doctest::Approx(c.k1).epsilon(1e-9));
    }
    BoundResult at12 = lower_bound(c, make_fractions(th.m12, m2));
    CHECK(at12.t_opt == doctest::Approx(c.k2).epsilon(1e-9));
  }
}

TEST_CASE("bound decreases as the weak material displaces the ideal one") {
  std::mt19937 rng(31337u);
  std::uniform_real_distribution<double> unif(0.05, 0.8);
  for (int trial = 0; trial < 100; ++trial) {
    ConductorSet c = random_conductors(rng);
    double m2 = unif(rng);
    double prev = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= 200; ++j) {
      double m1 = (1.0 - m2) * j / 200.0;
      double v = lower_bound(c, make_fractions(m1, m2)).value;
      CHECK(v <= prev * (1.0 + 1e-12));
      prev = v;
    }
  }
}

TEST_CASE("optimal field conditions per regime") {
  auto fs1 = optimal_fields(ref, make_fractions(0.3, 0.25));
  CHECK(fs1[0].det_condition == DetCondition::non_negative);
  double h1 = 1.0 / (0.3 / 2.0 + 0.25 / 3.0);
  CHECK(fs1[0].trace_value == doctest::Approx(h1).epsilon(1e-12));
  CHECK(fs1[1].has_matrix);
  CHECK(fs1[1].matrix_coeff == doctest::Approx(h1 / 3.0).epsilon(1e-12));

  auto fs2 = optimal_fields(ref, make_fractions(0.14, 0.25));
  CHECK(fs2[0].det_condition == DetCondition::zero);
  CHECK(fs2[0].trace_value == doctest::Approx(2.0 * 0.5 / 0.14).epsilon(1e-12));
  CHECK(fs2[1].has_matrix);
  CHECK(fs2[1].matrix_coeff == doctest::Approx(2.0).epsilon(1e-12)); // E = I / sqrt(m2)

  auto fs3 = optimal_fields(ref, make_fractions(0.1, 0.25));
  double h2 = 1.0 / (0.1 / 1.0 + 0.25 / 2.0);
  CHECK(h2 == doctest::Approx(4.444444444444445).epsilon(1e-12));
  CHECK(fs3[0].det_condition == DetCondition::zero);
  CHECK(fs3[0].trace_value == doctest::Approx(2.0 * h2).epsilon(1e-12));
  CHECK(fs3[1].trace_value == doctest::Approx(h2).epsilon(1e-12));
  CHECK(fs3[1].det_condition == DetCondition::unconstrained);
}

TEST_CASE("ideal phase carries no field and traces average to the loading") {
  std::mt19937 rng(424242u);
  std::uniform_real_distribution<double> unif(0.02, 0.9);
  for (int i = 0; i < 500; ++i) {
    ConductorSet c = random_conductors(rng);
    double m2 = unif(rng);
    double m1 = unif(rng) * (1.0 - m2);
    Fractions f = make_fractions(m1, m2);
    auto fs = optimal_fields(c, f);

    CHECK(fs[2].has_matrix);
    CHECK(fs[2].matrix_coeff == 0.0);
    CHECK(fs[2].trace_value == 0.0);

    // average trace equals Tr I = 2
    double avg = f.m1 * fs[0].trace_value + f.m2 * fs[1].trace_value;
    CHECK(avg == doctest::Approx(2.0).epsilon(1e-10));
  }
}

TEST_CASE("resistivity dual returns bitwise-identical numbers") {
  ResistorSet rho = make_resistors(1.0, 2.0);
  for (auto [m1, m2] : {std::pair{0.3, 0.25}, {0.14, 0.25}, {0.1, 0.25}}) {
    BoundResult dual = dual_resistivity_bound(rho, make_fractions(m1, m2));
    BoundResult primal = lower_bound(ref, make_fractions(m1, m2));
    CHECK(dual.value == primal.value);
    CHECK(dual.t_opt == primal.t_opt);
    CHECK(dual.regime == primal.regime);
  }
}
