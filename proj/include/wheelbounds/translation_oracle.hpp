#pragma once

#include <wheelbounds/phases.hpp>

#include <array>
#include <utility>

namespace wheelbounds {

/// Per-phase scalar field state (s_i, d_i) of the two finite phases under the
/// rotationally invariant variables: s is the conformal and d the
/// anticonformal magnitude of the 2x2 field matrix, so s^2 >= d^2 always and
/// det E = (s^2 - d^2) / 4. The ideal phase always sits at s = d = 0.
struct TranslationState {
  std::array<double, 2> s{0.0, 0.0};
  std::array<double, 2> d{0.0, 0.0};
  std::array<double, 2> gamma{0.0, 0.0}; ///< optional per-phase cost offsets
  double lambda_s = 0.0; ///< multiplier of the s-average constraint
  double lambda_d = 0.0; ///< multiplier of the d-average constraint
};

/// Validating factory; throws ConeViolationError if any (s_i, d_i) leaves the
/// cone s^2 >= d^2.
TranslationState make_translation_state(double s1, double d1, double s2, double d2);

/// Energy well of phase i (1, 2 or 3) shifted by t times the determinant,
/// expressed in (s, d): (1/4) [ (k_i + t) s^2 + (k_i - t) d^2 ] inside the
/// cone, +infinity outside. Phase 3 tolerates no field at all: its well is 0
/// at the origin and +infinity elsewhere.
double translated_well(int i, double s, double d, double t, const ConductorSet& c);

/// Convex envelope of translated_well restricted to the cone. For t <= k_i
/// the well is already convex; beyond that the envelope flattens in d and
/// equals (1/2) k_i s^2.
double envelope_well(int i, double s, double d, double t, const ConductorSet& c);

/// Minimum of sum_i m_i * envelope_well(i, s_i, d_i, t) subject to the
/// loading constraints m1 s1 + m2 s2 = 2 and m1 d1 + m2 d2 = 0.
std::pair<double, TranslationState> constrained_min(const ConductorSet& c,
                                                    const Fractions& f, double t);

struct OracleResult {
  double bound_value; ///< max over t of constrained_min minus t
  double t_opt;
  TranslationState minimizer;
  std::array<bool, 2> enveloped; ///< which wells sat strictly on their envelope
};

/// Maximizes constrained_min(c, f, t) - t over t >= 0 (golden-section search
/// on [0, 2 k2], then a derivative-based polish). The result is a certified
/// lower bound on the effective conductivity for any microstructure with
/// these fractions.
OracleResult maximize_over_t(const ConductorSet& c, const Fractions& f);

} // namespace wheelbounds
