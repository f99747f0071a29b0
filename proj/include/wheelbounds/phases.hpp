#pragma once

#include <wheelbounds/errors.hpp>

namespace wheelbounds {

/// Two finite isotropic conductors; a third, ideally conducting phase
/// (infinite conductivity) is always implied.
struct ConductorSet {
  double k1; ///< weaker conductor
  double k2; ///< stronger finite conductor, k1 <= k2
};

/// Resistivity counterpart of ConductorSet; the third phase is an insulator
/// of infinite resistivity.
struct ResistorSet {
  double rho1;
  double rho2;
};

/// Area fractions of the two finite phases; the ideal phase takes the rest.
struct Fractions {
  double m1;
  double m2;
  double m3() const { return 1.0 - m1 - m2 < 0.0 ? 0.0 : 1.0 - m1 - m2; }
};

/// The optimal microstructure changes twice as m1 grows at fixed m2.
enum class Regime {
  small_m1,     ///< hub plus spikes of both finite materials
  intermediate, ///< hub plus spikes of material 1 only
  large_m1,     ///< interior wheel wrapped in a material-1 annulus
};

const char* to_string(Regime r) noexcept;

/// Fractions of material 1 at which the regime switches (m12 <= m11).
struct RegimeThresholds {
  double m11; ///< at and above: large_m1
  double m12; ///< at and above (below m11): intermediate
};

ConductorSet make_conductors(double k1, double k2);
ResistorSet make_resistors(double rho1, double rho2);
Fractions make_fractions(double m1, double m2);

RegimeThresholds regime_thresholds(const ConductorSet& c, double m2);
Regime classify_regime(const ConductorSet& c, const Fractions& f);

} // namespace wheelbounds
