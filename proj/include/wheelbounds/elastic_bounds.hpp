#pragma once

#include <wheelbounds/cond_bounds.hpp>
#include <wheelbounds/phases.hpp>

#include <array>

namespace wheelbounds {

/// Reciprocal plane-strain moduli of one isotropic material: kappa is the
/// reciprocal plane bulk parameter, eta the reciprocal shear analog. Stiffer
/// materials have smaller entries.
struct ElasticMaterial {
  double kappa;
  double eta;
};

/// Two materials plus an implicit void (both reciprocals infinite there).
/// Ordered so kappa1 <= kappa2 and eta1 <= eta2.
struct ElasticSet {
  double kappa1;
  double eta1;
  double kappa2;
  double eta2;
};

/// Plane stress written in invariant components: sigma1 is the normalized
/// trace, sigma2 the deviator magnitude, so the eigenvalues are
/// sigma1 +- sigma2 and Tr(sigma^2) = 2 (sigma1^2 + sigma2^2).
struct StressState {
  double sigma1;
  double sigma2; ///< >= 0
  double det() const { return sigma1 * sigma1 - sigma2 * sigma2; }
};

/// Lower bound on the effective reciprocal plane bulk modulus (or, for the
/// dual rigid-inclusion problem, on the plane bulk modulus itself).
struct ElasticBoundResult {
  Regime regime;
  double value;
  double t_opt;                ///< optimal translation parameter, in [eta1, eta2]
  RegimeThresholds thresholds;
  /// True when the middle-regime closed form is certified by the numerical
  /// maximization rather than taken from an endpoint of the bracket.
  bool from_maximizer;
};

/// Pointwise condition an optimal stress field satisfies inside one phase.
struct ElasticFieldSpec {
  int phase;                  ///< 1, 2 or 3
  DetCondition det_condition; ///< constraint on det(sigma)
  bool hydrostatic;           ///< sigma proportional to the identity
  bool stress_free;           ///< sigma = 0
};

/// Convert Young's modulus and Poisson ratio to the reciprocal pair.
ElasticMaterial elastic_moduli(double youngs, double poisson);

ElasticSet make_elastic_set(double kappa1, double eta1, double kappa2, double eta2);

StressState make_stress(double sigma1, double sigma2);

/// Fractions of material 1 at which the optimal translation parameter
/// leaves the interior of [eta1, eta2].
RegimeThresholds elastic_thresholds(const ElasticSet& s, double m2);

/// Exact lower bound on the effective reciprocal plane bulk modulus of an
/// isotropic mixture of the two materials and void.
ElasticBoundResult bulk_bound(const ElasticSet& s, const Fractions& f);

/// Lower bound on the effective plane bulk modulus when the moduli are read
/// as stiffnesses and the third phase is rigid; identical formulas.
ElasticBoundResult dual_rigid_bound(const ElasticSet& s, const Fractions& f);

/// Conditions on the optimal stress in each phase for the active regime.
std::array<ElasticFieldSpec, 3> elastic_field_spec(const ElasticSet& s, const Fractions& f);

} // namespace wheelbounds
