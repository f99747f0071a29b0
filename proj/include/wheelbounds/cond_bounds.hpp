#pragma once

#include <wheelbounds/phases.hpp>

#include <array>

namespace wheelbounds {

/// Exact lower bound on the effective conductivity of an isotropic mixture
/// of the two conductors and the ideal phase.
struct BoundResult {
  Regime regime;
  double value;               ///< the bound itself
  double t_opt;               ///< optimal translation parameter, in [k1, k2]
  RegimeThresholds thresholds;
};

enum class DetCondition { zero, non_negative, unconstrained };

/// Pointwise condition an optimal field must satisfy inside one phase.
/// Fields are gradients of the two orthogonal unit loadings stacked as the
/// columns of a 2x2 matrix E, normalized so the volume average of E is I.
struct FieldSpec {
  int phase;                  ///< 1, 2 or 3
  double trace_value;         ///< required Tr E
  DetCondition det_condition; ///< constraint on det E
  bool has_matrix;            ///< E is fully prescribed as matrix_coeff * I
  double matrix_coeff;
};

BoundResult lower_bound(const ConductorSet& c, const Fractions& f);

/// Conditions on the optimal fields in each phase for the active regime.
std::array<FieldSpec, 3> optimal_fields(const ConductorSet& c, const Fractions& f);

/// Lower bound on effective resistivity when the ideal phase is an
/// insulator; identical formulas with resistivities in place of
/// conductivities.
BoundResult dual_resistivity_bound(const ResistorSet& r, const Fractions& f);

} // namespace wheelbounds
