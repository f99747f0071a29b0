#pragma once

#include <wheelbounds/phases.hpp>
#include <wheelbounds/wheel_geometry.hpp>

#include <vector>

namespace wheelbounds {

/// Piecewise solution of the axisymmetric conduction mode
///   (r K_r u')' = K_theta u / r,   u(0) = 0,
/// marched outward with unit slope at the center. Isotropic segments carry
/// u = A r + C / r; spiky segments carry constant u = A while the radial
/// current accumulates circumferential leakage.
struct RadialSolution {
  struct Piece {
    double A = 0.0;
    double C = 0.0;
  };
  std::vector<Piece> pieces; ///< aligned with the profile's segments
  double u1 = 0.0;           ///< potential at r = 1 (march normalization)
  double w1 = 0.0;           ///< radial current r K_r u' at r = 1
  double k_star = 0.0;       ///< exterior conductivity used for the dipole
  double dipole = 0.0;       ///< 1/r coefficient outside, unit far field
  double energy = 0.0;       ///< stored energy, normalized so that u(1) = 1
};

RadialSolution solve_radial(const RadialProfile& p, double k_star);

/// Energy integral of the solution under the u(1) = 1 normalization,
/// anchored so a homogeneous conductor k stores exactly k.
double assemblage_energy(const RadialProfile& p, const RadialSolution& sol);

/// The exterior conductivity that makes the inclusion invisible (zero
/// dipole), located by bracketed secant iteration on the dipole sign.
double effective_conductivity(const RadialProfile& p);

/// Hub radius minimizing the laminated-wheel energy at the given materials
/// and fractions; the minimum is searched by golden section on the full
/// radial pipeline, then sharpened on the stationarity equation.
double optimize_r0(const ConductorSet& c, const Fractions& f);

/// Finite-difference fallback: solves the same mode equation on a log-spaced
/// grid with the ideal phase replaced by a large finite conductivity.
/// Converges to the transfer-matrix answer as O(h^2) and O(1/contrast).
double fd_effective_conductivity(const RadialProfile& p, double contrast, int n_nodes);

} // namespace wheelbounds
