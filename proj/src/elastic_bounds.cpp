#include <wheelbounds/elastic_bounds.hpp>

#include <algorithm>
#include <cmath>

namespace wheelbounds {

namespace {

constexpr double simplex_slack = 1e-12;

// Energy of the translated composite as a function of the translation
// parameter t; the bound is its maximum over [eta1, eta2].
double objective(const ElasticSet& s, const Fractions& f, double t) {
  const double q = f.m1 / (s.kappa1 + s.eta1) + f.m2 / (s.kappa2 + t);
  return -t + 1.0 / q;
}

// Golden-section maximization on [lo, hi]; the objective is strictly
// unimodal there, so this brackets the maximizer to the given width.
double maximize(const ElasticSet& s, const Fractions& f, double lo, double hi) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double e1 = objective(s, f, x1), e2 = objective(s, f, x2);
  while (b - a > 1e-12 * (1.0 + std::abs(b))) {
    if (e1 >= e2) {
      b = x2;
      x2 = x1;
      e2 = e1;
      x1 = b - phi * (b - a);
      e1 = objective(s, f, x1);
    } else {
      a = x1;
      x1 = x2;
      e1 = e2;
      x2 = a + phi * (b - a);
      e2 = objective(s, f, x2);
    }
  }
  return 0.5 * (a + b);
}

} // namespace

ElasticMaterial elastic_moduli(double youngs, double poisson) {
  if (!(youngs > 0.0) || !std::isfinite(youngs))
    throw BadModuliError("Young's modulus must be positive and finite");
  if (!(poisson > -1.0) || !(poisson < 1.0))
    throw BadModuliError("Poisson ratio must lie strictly inside (-1, 1)");
  return ElasticMaterial{(1.0 - poisson) / (2.0 * youngs),
                         (1.0 + poisson) / (2.0 * youngs)};
}

ElasticSet make_elastic_set(double kappa1, double eta1, double kappa2, double eta2) {
  for (const double v : {kappa1, eta1, kappa2, eta2})
    if (!(v > 0.0) || !std::isfinite(v))
      throw NonPositiveError("elastic reciprocal moduli must be positive and finite");
  if (kappa2 < kappa1)
    throw UnorderedError("reciprocal plane bulk parameters must satisfy kappa1 <= kappa2");
  if (eta2 < eta1)
    throw UnorderedError("reciprocal shear parameters must satisfy eta1 <= eta2");
  return ElasticSet{kappa1, eta1, kappa2, eta2};
}

StressState make_stress(double sigma1, double sigma2) {
  if (!(sigma2 >= 0.0))
    throw ValidationError("deviator magnitude must be non-negative");
  return StressState{sigma1, sigma2};
}

RegimeThresholds elastic_thresholds(const ElasticSet& s, double m2) {
  if (!(m2 >= 0.0) || m2 > 1.0 + simplex_slack)
    throw OutOfSimplexError("m2 must lie in [0, 1]");
  const double g = std::sqrt(m2) - m2; // vanishes at m2 = 0 and m2 = 1
  const double e1 = s.kappa1 + s.eta1;
  return RegimeThresholds{g * e1 / (s.kappa2 + s.eta1), g * e1 / (s.kappa2 + s.eta2)};
}

ElasticBoundResult bulk_bound(const ElasticSet& s, const Fractions& f) {
  if (f.m1 + f.m2 <= 0.0)
    throw DegenerateError("no finite material present");

  const RegimeThresholds th = elastic_thresholds(s, f.m2);
  const double e1 = s.kappa1 + s.eta1;
  const double sm = std::sqrt(f.m2);

  ElasticBoundResult r;
  r.thresholds = th;
  if (f.m1 >= th.m11) {
    r.regime = Regime::large_m1;
    r.t_opt = s.eta1;
    r.value = objective(s, f, s.eta1);
    r.from_maximizer = false;
  } else if (f.m1 >= th.m12) {
    // Interior maximum: the stationarity condition is linear in t, so the
    // optimal translation parameter has a closed form.
    r.regime = Regime::intermediate;
    r.t_opt = sm * (1.0 - sm) * e1 / f.m1 - s.kappa2;
    r.value = s.kappa2 + (1.0 - sm) * (1.0 - sm) * e1 / f.m1;
    r.from_maximizer = true;
  } else {
    r.regime = Regime::small_m1;
    r.t_opt = s.eta2;
    r.value = objective(s, f, s.eta2);
    r.from_maximizer = false;
  }

  // Certify against the direct maximization. The objective is flat at its
  // maximum, so the value agrees far more tightly than the location.
  if (s.eta2 - s.eta1 > 1e-14) {
    const double t_num = maximize(s, f, s.eta1, s.eta2);
    const double v_num = objective(s, f, t_num);
    if (std::abs(v_num - r.value) > 1e-10 * std::max(1.0, std::abs(r.value)))
      throw NoConvergenceError("translation maximizer disagrees with the closed form");
    if (r.regime == Regime::intermediate && std::abs(t_num - r.t_opt) > 1e-6)
      throw NoConvergenceError("maximizer location drifted from stationarity");
  }
  return r;
}

ElasticBoundResult dual_rigid_bound(const ElasticSet& s, const Fractions& f) {
  // The rigid-inclusion problem obeys the same extremal formulas with the
  // entries read as plane bulk and shear stiffnesses.
  return bulk_bound(s, f);
}

std::array<ElasticFieldSpec, 3> elastic_field_spec(const ElasticSet& s, const Fractions& f) {
  const ElasticBoundResult b = bulk_bound(s, f);
  std::array<ElasticFieldSpec, 3> out{};

  // Material 1 carries uniaxial stress whenever the translation parameter
  // sits strictly above eta1; at the bottom endpoint the well stays convex
  // and only the sign of the determinant is forced.
  out[0].phase = 1;
  out[0].det_condition =
      b.regime == Regime::large_m1 ? DetCondition::non_negative : DetCondition::zero;
  out[0].hydrostatic = false;
  out[0].stress_free = false;

  out[1].phase = 2;
  out[1].det_condition = DetCondition::unconstrained;
  out[1].hydrostatic = true;
  out[1].stress_free = false;

  out[2].phase = 3;
  out[2].det_condition = DetCondition::unconstrained;
  out[2].hydrostatic = false;
  out[2].stress_free = true;

  return out;
}

} // namespace wheelbounds
