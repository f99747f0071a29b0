#pragma once

#include <wheelbounds/cond_bounds.hpp>
#include <wheelbounds/phases.hpp>
#include <wheelbounds/wheel_geometry.hpp>

#include <array>
#include <cstddef>
#include <vector>

namespace wheelbounds {

/// Converged potential on the polar grid: the rasterized inclusion occupies
/// r <= 1, the candidate effective medium fills 1 < r <= r_out, and a linear
/// potential drives the outer rim. The grid stores ring edges, one
/// conductivity and phase tag per cell, and the potential per node (index 0
/// is the polygonal center node, then ring-major cells).
struct SectorField {
  int nr = 0;       ///< total radial rings, map plus embedding annulus
  int nr_map = 0;   ///< rings covered by the inclusion map
  int ntheta = 0;
  double r_out = 0.0;
  double k_star = 0.0;
  std::vector<double> r_edge;  ///< nr + 1 ring edges, r_edge[0] = 0
  std::vector<double> k_cell;  ///< nr * ntheta, ring-major
  std::vector<uint8_t> phase;  ///< nr * ntheta; 0 = embedding medium
  std::vector<double> u;       ///< 1 + nr * ntheta potentials
  int probe_ring = 0;          ///< ring whose center is nearest (1 + r_out) / 2
  double dipole_amplitude = 0.0;
  double residual_norm = 0.0;  ///< final relative residual of the linear solve
  int iterations = 0;

  double cell_center(int ring) const { return 0.5 * (r_edge[ring] + r_edge[ring + 1]); }
  double potential(int ring, int col) const {
    return u[1 + static_cast<std::size_t>(ring) * ntheta + col];
  }
};

/// Robust per-phase statistics of the reconstructed 2x2 gradient field.
struct PhaseFieldStats {
  int phase = 0;
  std::size_t cells = 0;
  double median_norm = 0.0;          ///< Frobenius norm of E
  double median_trace = 0.0;
  double median_det_ratio = 0.0;     ///< |det E| / (||E||^2 / 2)
  double median_identity_dev = 0.0;  ///< ||E - (Tr E / 2) I|| / ||E||
  double det_negative_fraction = 0.0;
  double median_trace_dev = 0.0;  ///< |Tr E - target| / |target| when a target is set
};

/// Embed the rasterized inclusion in a medium of conductivity k_star and
/// solve the discrete conduction problem under a unit linear loading.
SectorField solve_embedded(const PhaseMap& map, const ConductorSet& c, double contrast,
                           double k_star, double r_out);

/// Same solve with explicit per-phase conductivities (index = phase - 1),
/// for problems whose materials are not ordered, such as dual runs.
SectorField solve_embedded(const PhaseMap& map, const std::array<double, 3>& phase_k,
                           double k_star, double r_out);

/// Conductivity of the embedding medium that makes the inclusion invisible:
/// secant iteration nulling the dipole amplitude.
double measure_effective(const PhaseMap& map, const ConductorSet& c, double contrast,
                         double r_out, double rel_tol = 1e-8);

/// Raw-conductivity overload; k_init seeds the secant iteration.
double measure_effective(const PhaseMap& map, const std::array<double, 3>& phase_k,
                         double r_out, double k_init, double rel_tol = 1e-8);

/// One measured sample for the extrapolation fit; h is the radial grid step.
struct RunSample {
  double n_spikes;
  double contrast;
  double h;
  double k_num;
};

struct ExtrapolationReport {
  double k_inf = 0.0;       ///< fitted limit
  double residual = 0.0;    ///< root-mean-square misfit of the model
  double coeff_spikes = 0.0;
  double coeff_contrast = 0.0;
  double coeff_grid = 0.0;
};

/// Least-squares fit k_num = k_inf + a/n_spikes + b/contrast + c h^2.
/// Columns that do not vary across the series are folded into k_inf.
ExtrapolationReport extrapolate(const std::vector<RunSample>& runs);

/// Discrete interior energy of the converged field (transmissibility-weighted
/// squared differences, boundary mismatch included).
double field_energy(const SectorField& f);

/// Boundary form of the same quantity: rim flux weighted by the driven
/// potential. Equals field_energy by the discrete Green identity.
double boundary_flux_integral(const SectorField& f);

/// Per-phase statistics of the reconstructed field against the optimality
/// conditions; the map must be symmetric under a quarter turn.
std::array<PhaseFieldStats, 3> field_conditions_check(const SectorField& f,
                                                      const std::array<FieldSpec, 3>& spec);

} // namespace wheelbounds
