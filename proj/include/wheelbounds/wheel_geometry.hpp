#pragma once

#include <wheelbounds/phases.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace wheelbounds {

/// One radial layer of an assemblage, on the annulus (r_a, r_b].
/// Isotropic layers conduct equally in both directions. Spiky layers model
/// an annulus of radial spikes alternating with ideally conducting sectors:
/// infinite radial conductivity and a circumferential conductivity that
/// grows linearly, K_theta(r) = alpha * r.
struct RadialSegment {
  enum class Kind { isotropic, spiky };
  Kind kind;
  double r_a = 0.0;
  double r_b = 0.0;
  double k = 0.0;     ///< isotropic conductivity
  double alpha = 0.0; ///< spiky circumferential slope

  // Spiky composition: material occupying angular fraction f(r) = a / r.
  // Used when a finite-contrast stand-in for the ideal sectors is needed.
  double a1 = 0.0, k1 = 0.0; ///< weak-material spikes
  double a2 = 0.0, k2 = 0.0; ///< strong-material laminate strips
};

struct RadialProfile {
  std::vector<RadialSegment> segments; ///< ordered, covering (0, 1]
};

/// The three optimal wheel families. Digits name the materials: the hub is
/// always material 2, spikes alternate material 1 (optionally laminated with
/// material 2) and the ideal phase, and kind W2_13_1 wraps the wheel in a
/// pure material-1 annulus.
enum class WheelKind { W2_13, W2_13_1, W2_123 };

const char* to_string(WheelKind k) noexcept;

struct WheelSpec {
  WheelKind kind;
  ConductorSet conductors;
  Fractions fractions;
  double r0;        ///< hub radius
  double r_env;     ///< inner radius of the pure material-1 annulus (1 if none)
  double c_env;     ///< area fraction of that envelope
  double f1_coeff;  ///< spike fraction of material 1: f1(r) = f1_coeff / r
  double f2_coeff;  ///< laminate fraction of material 2: f2(r) = f2_coeff / r
  int n_spikes = 64; ///< default spike count used at rasterization time

  double f1(double r) const { return f1_coeff / r; }
  double f2(double r) const { return f2_coeff / r; }
};

/// Builds the optimal wheel for the regime the fractions fall in.
WheelSpec build_wheel(const ConductorSet& c, const Fractions& f);

/// Family-specific constructors. They check geometric feasibility but not
/// the regime, so boundary cases can be built from either side.
WheelSpec build_w2_13(const ConductorSet& c, const Fractions& f);
WheelSpec build_w2_123(const ConductorSet& c, const Fractions& f);
WheelSpec build_w2_123_at(const ConductorSet& c, const Fractions& f, double r0);
WheelSpec build_w2_13_1(const ConductorSet& c, const Fractions& f);

/// Exact per-phase area fractions of the constructed geometry.
std::array<double, 3> wheel_areas(const WheelSpec& w);

/// Circumferentially homogenized radial conductivity profile of the wheel.
RadialProfile radial_profile(const WheelSpec& w);

/// Effective conductivity of a coated circle: nucleus k_nucl (possibly
/// infinite) of area fraction 1 - c inside an annulus of k_env.
double coated_circles(double k_env, double k_nucl, double c);

/// Cell-level conductivity map of one wheel on a polar grid over r in (0, 1],
/// theta in [0, 2 pi); phases stored ring-major as 1, 2 or 3, with phase 3
/// standing in for the ideal conductor at a large finite contrast.
struct PhaseMap {
  int nr = 0;
  int ntheta = 0;
  std::vector<std::uint8_t> phase;
  double k1 = 0.0, k2 = 0.0, contrast = 0.0;
  double m1 = 0.0, m2 = 0.0; ///< prescribed fractions, for provenance

  std::uint8_t at(int i, int j) const { return phase[static_cast<size_t>(i) * ntheta + j]; }
  std::uint8_t& at(int i, int j) { return phase[static_cast<size_t>(i) * ntheta + j]; }
  double conductivity(int i, int j) const {
    const std::uint8_t p = at(i, j);
    return p == 1 ? k1 : p == 2 ? k2 : contrast;
  }

  /// Exact area fractions of the rasterized phases.
  std::array<double, 3> measured_fractions() const;
};

/// Rasterizes the wheel with n_spikes identical spikes. Angular widths snap
/// to whole cells per ring with the rounding remainder carried radially, so
/// measured areas stay within 2e-3 of the prescription. Requires ntheta to
/// be a multiple of 2 * n_spikes and n_spikes >= 4; when n_spikes is a
/// multiple of 4 the map is exactly symmetric under quarter turns.
PhaseMap rasterize_sector(const WheelSpec& w, int n_spikes, int nr, int ntheta,
                          double contrast);

/// Plain-text PGM (P2) image of the phase map, phases encoded 0/1/2, with a
/// comment line recording k1, k2, contrast and the prescribed fractions.
void write_pgm(const PhaseMap& map, const std::string& path);
PhaseMap read_pgm(const std::string& path);

} // namespace wheelbounds
