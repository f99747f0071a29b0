#include <wheelbounds/cond_bounds.hpp>

#include <cmath>

namespace wheelbounds {

BoundResult lower_bound(const ConductorSet& c, const Fractions& f) {
  const RegimeThresholds th = regime_thresholds(c, f.m2);
  const Regime regime = classify_regime(c, f);
  const double s2 = std::sqrt(f.m2);

  double value = 0.0;
  double t_opt = 0.0;
  switch (regime) {
    case Regime::large_m1:
      value = -c.k1 + 1.0 / (f.m1 / (2.0 * c.k1) + f.m2 / (c.k1 + c.k2));
      t_opt = c.k1;
      break;
    case Regime::intermediate: {
      const double w = 1.0 - s2;
      value = c.k2 + 2.0 * (c.k1 / f.m1) * w * w;
      t_opt = 2.0 * c.k1 * (s2 - f.m2) / f.m1 - c.k2;
      break;
    }
    case Regime::small_m1:
      value = -c.k2 + 1.0 / (f.m1 / (2.0 * c.k1) + f.m2 / (2.0 * c.k2));
      t_opt = c.k2;
      break;
  }
  return BoundResult{regime, value, t_opt, th};
}

std::array<FieldSpec, 3> optimal_fields(const ConductorSet& c, const Fractions& f) {
  const Regime regime = classify_regime(c, f);
  const double s2 = std::sqrt(f.m2);

  FieldSpec p1{1, 0.0, DetCondition::zero, false, 0.0};
  FieldSpec p2{2, 0.0, DetCondition::unconstrained, false, 0.0};
  const FieldSpec p3{3, 0.0, DetCondition::zero, true, 0.0}; // ideal phase carries no field

  switch (regime) {
    case Regime::large_m1: {
      const double h1 = 1.0 / (f.m1 / (2.0 * c.k1) + f.m2 / (c.k1 + c.k2));
      p1.trace_value = h1 / c.k1;
      p1.det_condition = DetCondition::non_negative;
      p2.has_matrix = true;
      p2.matrix_coeff = h1 / (c.k1 + c.k2);
      p2.trace_value = 2.0 * p2.matrix_coeff;
      break;
    }
    case Regime::intermediate:
      p1.trace_value = 2.0 * (1.0 - s2) / f.m1;
      p2.has_matrix = true;
      p2.matrix_coeff = 1.0 / s2;
      p2.trace_value = 2.0 / s2;
      break;
    case Regime::small_m1: {
      const double h2 = 1.0 / (f.m1 / c.k1 + f.m2 / c.k2);
      p1.trace_value = 2.0 * h2 / c.k1;
      p2.trace_value = 2.0 * h2 / c.k2;
      break;
    }
  }
  return {p1, p2, p3};
}

BoundResult dual_resistivity_bound(const ResistorSet& r, const Fractions& f) {
  return lower_bound(ConductorSet{r.rho1, r.rho2}, f);
}

} // namespace wheelbounds
