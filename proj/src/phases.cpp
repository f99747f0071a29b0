#include <wheelbounds/phases.hpp>

#include <cmath>

namespace wheelbounds {

namespace {
constexpr double simplex_slack = 1e-12;
}

const char* to_string(Regime r) noexcept {
  switch (r) {
    case Regime::small_m1: return "small_m1";
    case Regime::intermediate: return "intermediate";
    case Regime::large_m1: return "large_m1";
  }
  return "unknown";
}

ConductorSet make_conductors(double k1, double k2) {
  if (!(k1 > 0.0) || !std::isfinite(k1)) {
    throw NonPositiveError("conductivity k1 must be positive and finite");
  }
  if (!(k2 > 0.0) || !std::isfinite(k2)) {
    throw NonPositiveError("conductivity k2 must be positive and finite");
  }
  if (k2 < k1) {
    throw UnorderedError("conductivities must satisfy k1 <= k2");
  }
  return ConductorSet{k1, k2};
}

ResistorSet make_resistors(double rho1, double rho2) {
  ConductorSet c = make_conductors(rho1, rho2); // same positivity and ordering rules
  return ResistorSet{c.k1, c.k2};
}

Fractions make_fractions(double m1, double m2) {
  if (!(m1 >= 0.0) || !(m2 >= 0.0)) {
    throw OutOfSimplexError("fractions must be non-negative");
  }
  if (m1 + m2 > 1.0 + simplex_slack) {
    throw OutOfSimplexError("fractions must satisfy m1 + m2 <= 1");
  }
  return Fractions{m1, m2};
}

RegimeThresholds regime_thresholds(const ConductorSet& c, double m2) {
  if (!(m2 >= 0.0) || m2 > 1.0 + simplex_slack) {
    throw OutOfSimplexError("m2 must lie in [0, 1]");
  }
  const double g = std::sqrt(m2) - m2; // vanishes at m2 = 0 and m2 = 1
  return RegimeThresholds{2.0 * c.k1 * g / (c.k1 + c.k2), c.k1 * g / c.k2};
}

Regime classify_regime(const ConductorSet& c, const Fractions& f) {
  const RegimeThresholds th = regime_thresholds(c, f.m2);
  if (f.m1 >= th.m11) return Regime::large_m1;
  if (f.m1 >= th.m12) return Regime::intermediate;
  return Regime::small_m1;
}

} // namespace wheelbounds
