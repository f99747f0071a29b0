#include <wheelbounds/wheel_geometry.hpp>

#include <wheelbounds/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace wheelbounds {

namespace {

constexpr double kWidthEps = 1e-12;

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

WheelSpec make_spec(WheelKind kind, const ConductorSet& c, const Fractions& f, double r0,
                    double r_env, double c_env, double f1_coeff, double f2_coeff) {
  WheelSpec w;
  w.kind = kind;
  w.conductors = c;
  w.fractions = f;
  w.r0 = r0;
  w.r_env = r_env;
  w.c_env = c_env;
  w.f1_coeff = f1_coeff;
  w.f2_coeff = f2_coeff;
  return w;
}

void require_hub(const Fractions& f) {
  if (f.m2 <= 0.0)
    throw DegenerateError("wheel requires a hub: m2 must be positive");
}

// Spike fractions must fit in the circumference at the hub rim, where they
// are widest: f1(r0) + f2(r0) <= 1.
void check_rim_fit(double f1_coeff, double f2_coeff, double r0) {
  if (r0 <= 0.0)
    throw InfeasibleFractionsError("hub radius vanished");
  const double rim = (f1_coeff + f2_coeff) / r0;
  if (rim > 1.0 + 1e-9)
    throw InfeasibleFractionsError("spike fractions exceed the circumference at the hub rim: " +
                                   fmt12(rim));
}

} // namespace

const char* to_string(WheelKind k) noexcept {
  switch (k) {
  case WheelKind::W2_13: return "W2_13";
  case WheelKind::W2_13_1: return "W2_13_1";
  case WheelKind::W2_123: return "W2_123";
  }
  return "?";
}

WheelSpec build_w2_13(const ConductorSet& c, const Fractions& f) {
  require_hub(f);
  const double r0 = std::sqrt(f.m2);
  const double width = 1.0 - r0;
  if (width <= kWidthEps) {
    // Pure hub: the disk is all material 2.
    if (f.m1 > 1e-15)
      throw InfeasibleFractionsError("no room for spikes outside a full hub");
    return make_spec(WheelKind::W2_13, c, f, r0, 1.0, 0.0, 0.0, 0.0);
  }
  if (f.m1 <= 1e-15 && f.m3() > 1e-15)
    throw InfeasibleFractionsError("spikeless annulus cannot carry current");
  const double f1_coeff = f.m1 / (2.0 * width);
  check_rim_fit(f1_coeff, 0.0, r0);
  return make_spec(WheelKind::W2_13, c, f, r0, 1.0, 0.0, f1_coeff, 0.0);
}

WheelSpec build_w2_123_at(const ConductorSet& c, const Fractions& f, double r0) {
  require_hub(f);
  if (!(r0 > 0.0) || r0 * r0 > f.m2 * (1.0 + 1e-12))
    throw InfeasibleFractionsError("hub radius outside (0, sqrt(m2)]: " + fmt12(r0));
  const double width = 1.0 - r0;
  if (width <= kWidthEps) {
    if (f.m1 > 1e-15 || f.m3() > 1e-15)
      throw InfeasibleFractionsError("no room for spikes outside a full hub");
    return make_spec(WheelKind::W2_123, c, f, r0, 1.0, 0.0, 0.0, 0.0);
  }
  const double f1_coeff = f.m1 / (2.0 * width);
  const double f2_coeff = std::max(0.0, f.m2 - r0 * r0) / (2.0 * width);
  check_rim_fit(f1_coeff, f2_coeff, r0);
  return make_spec(WheelKind::W2_123, c, f, r0, 1.0, 0.0, f1_coeff, f2_coeff);
}

WheelSpec build_w2_123(const ConductorSet& c, const Fractions& f) {
  const double r0 = c.k2 * (f.m1 / c.k1 + f.m2 / c.k2);
  return build_w2_123_at(c, f, r0);
}

WheelSpec build_w2_13_1(const ConductorSet& c, const Fractions& f) {
  require_hub(f);
  // Find the envelope fraction c_env for which the interior wheel, with
  // fractions rescaled by 1/(1 - c_env), sits exactly at its own threshold.
  const auto residual = [&](double ce) {
    const double scale = 1.0 - ce;
    const double m1i = (f.m1 - ce) / scale;
    const double m2i = f.m2 / scale;
    const double g = std::sqrt(m2i) - m2i;
    return m1i - 2.0 * c.k1 * g / (c.k1 + c.k2);
  };
  double lo = 0.0, hi = f.m1;
  double rlo = residual(lo), rhi = residual(hi);
  if (rlo < -1e-12)
    throw InfeasibleFractionsError("fractions below the envelope threshold; no wrap needed");
  if (rhi > 1e-12)
    throw InfeasibleFractionsError("threshold equation has no root in [0, m1]");
  for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double rm = residual(mid);
    // The residual decreases in c_env; a sign flip the other way means the
    // construction's premise failed.
    if (rm > rlo + 1e-9 || rm < rhi - 1e-9)
      throw NoConvergenceError("envelope residual lost monotonicity");
    if (rm >= 0.0) {
      lo = mid;
      rlo = rm;
    } else {
      hi = mid;
      rhi = rm;
    }
  }
  const double c_env = 0.5 * (lo + hi);
  const double r_env = std::sqrt(1.0 - c_env);
  const double r0 = std::sqrt(f.m2);
  const double width = r_env - r0;

  double f1_coeff = 0.0;
  if (width > kWidthEps) {
    const double scale = 1.0 - c_env;
    const double m1i = (f.m1 - c_env) / scale;
    const double r0_rel = r0 / r_env;
    if (1.0 - r0_rel > 1e-9) {
      f1_coeff = m1i * r_env / (2.0 * (1.0 - r0_rel));
    } else {
      // Interior at threshold with a vanishing annulus; the 0/0 limit of the
      // coefficient is k1 * r0 / (k1 + k2).
      f1_coeff = c.k1 * r0 / (c.k1 + c.k2);
    }
    check_rim_fit(f1_coeff, 0.0, r0);
  }
  return make_spec(WheelKind::W2_13_1, c, f, r0, r_env, c_env, f1_coeff, 0.0);
}

WheelSpec build_wheel(const ConductorSet& c, const Fractions& f) {
  require_hub(f);
  const RegimeThresholds th = regime_thresholds(c, f.m2);
  // The m1 = m12 boundary belongs to both constructions and they coincide
  // there; report it as the laminated kind so the f2 = 0 degeneration is
  // visible to callers.
  if (f.m1 <= th.m12) return build_w2_123(c, f);
  if (f.m1 < th.m11) return build_w2_13(c, f);
  return build_w2_13_1(c, f);
}

std::array<double, 3> wheel_areas(const WheelSpec& w) {
  const double width = std::max(0.0, w.r_env - w.r0);
  const double a1 = 2.0 * w.f1_coeff * width + (1.0 - w.r_env * w.r_env);
  const double a2 = w.r0 * w.r0 + 2.0 * w.f2_coeff * width;
  return {a1, a2, std::max(0.0, 1.0 - a1 - a2)};
}

RadialProfile radial_profile(const WheelSpec& w) {
  RadialProfile p;
  RadialSegment hub;
  hub.kind = RadialSegment::Kind::isotropic;
  hub.r_a = 0.0;
  hub.r_b = w.r0;
  hub.k = w.conductors.k2;
  p.segments.push_back(hub);

  if (w.r_env - w.r0 > kWidthEps) {
    RadialSegment sp;
    sp.kind = RadialSegment::Kind::spiky;
    sp.r_a = w.r0;
    sp.r_b = w.r_env;
    sp.a1 = w.f1_coeff;
    sp.k1 = w.conductors.k1;
    sp.a2 = w.f2_coeff;
    sp.k2 = w.conductors.k2;
    const double res = w.f1_coeff / w.conductors.k1 + w.f2_coeff / w.conductors.k2;
    if (res <= 0.0)
      throw SingularProfileError("spiky annulus with no conducting spikes");
    sp.alpha = 1.0 / res;
    p.segments.push_back(sp);
  }

  if (1.0 - w.r_env > kWidthEps) {
    RadialSegment env;
    env.kind = RadialSegment::Kind::isotropic;
    env.r_a = w.r_env;
    env.r_b = 1.0;
    env.k = w.conductors.k1;
    p.segments.push_back(env);
  }
  p.segments.back().r_b = 1.0;
  return p;
}

double coated_circles(double k_env, double k_nucl, double c) {
  if (!(k_env > 0.0) || !std::isfinite(k_env))
    throw NonPositiveError("envelope conductivity must be positive and finite");
  if (!(k_nucl > 0.0))
    throw NonPositiveError("nucleus conductivity must be positive");
  if (!(c >= 0.0 && c <= 1.0))
    throw OutOfSimplexError("envelope fraction outside [0, 1]");
  const double inv_sum = std::isfinite(k_nucl) ? 1.0 / (k_nucl + k_env) : 0.0;
  const double rhs = c * (0.5 / k_env - inv_sum) + inv_sum;
  if (rhs <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / rhs - k_env;
}

std::array<double, 3> PhaseMap::measured_fractions() const {
  std::array<double, 3> a{0.0, 0.0, 0.0};
  const double h = 1.0 / nr;
  for (int i = 0; i < nr; ++i) {
    const double ra = i * h, rb = (i + 1) * h;
    const double cell = (rb * rb - ra * ra) / ntheta;
    for (int j = 0; j < ntheta; ++j) a[at(i, j) - 1] += cell;
  }
  return a;
}

PhaseMap rasterize_sector(const WheelSpec& w, int n_spikes, int nr, int ntheta,
                          double contrast) {
  if (n_spikes < 4)
    throw ValidationError("need at least 4 spikes");
  if (nr < 2 || ntheta < 2 * n_spikes || ntheta % (2 * n_spikes) != 0)
    throw ValidationError("ntheta must be a positive multiple of 2 * n_spikes");
  if (!(contrast > w.conductors.k2) || !std::isfinite(contrast))
    throw BadContrastError("contrast must be finite and exceed k2");

  PhaseMap map;
  map.nr = nr;
  map.ntheta = ntheta;
  map.phase.assign(static_cast<size_t>(nr) * ntheta, 3);
  map.k1 = w.conductors.k1;
  map.k2 = w.conductors.k2;
  map.contrast = contrast;
  map.m1 = w.fractions.m1;
  map.m2 = w.fractions.m2;

  const bool quad = n_spikes % 4 == 0;
  const int step = quad ? 4 : 1;
  const int period = ntheta / n_spikes;
  const double h = 1.0 / nr;
  double carry1 = 0.0, carry2 = 0.0;

  for (int i = 0; i < nr; ++i) {
    const double ra = i * h, rb = (i + 1) * h;
    const double cell = (rb * rb - ra * ra) / ntheta;

    // Exact phase areas of this ring (in units of the disk area).
    double t1 = 0.0, t2 = 0.0;
    if (ra < w.r0) t2 += std::min(rb, w.r0) * std::min(rb, w.r0) - ra * ra;
    const double xa = std::max(ra, w.r0), xb = std::min(rb, w.r_env);
    if (xb > xa) {
      t1 += 2.0 * w.f1_coeff * (xb - xa);
      t2 += 2.0 * w.f2_coeff * (xb - xa);
    }
    const double ea = std::max(ra, w.r_env);
    if (rb > ea) t1 += rb * rb - ea * ea;

    // Snap to whole cells (whole quadruples under quarter-turn symmetry),
    // carrying the area remainder into the next ring.
    const auto snap = [&](double target, double& carry, int avail) {
      const double want = (target + carry) / cell;
      long n = std::lround(want / step) * step;
      n = std::clamp(n, 0L, static_cast<long>(avail));
      carry = target + carry - static_cast<double>(n) * cell;
      return static_cast<int>(n);
    };
    const int n1 = snap(t1, carry1, ntheta);
    const int n2 = snap(t2, carry2, ntheta - n1);

    // Lay the cells out spike by spike: material 1 centered in each angular
    // period, flanked by the material-2 laminate strips, remainder ideal.
    const int groups = quad ? 4 : 1;
    const int spg = n_spikes / groups;
    const int g1 = n1 / groups, g2 = n2 / groups;
    for (int g = 0; g < groups; ++g) {
      for (int s = 0; s < spg; ++s) {
        int w1 = (s + 1) * g1 / spg - s * g1 / spg;
        int w2 = (s + 1) * g2 / spg - s * g2 / spg;
        // Independent rounding can overfill a period by a cell or two; trim
        // the laminate first, the area check below audits the loss.
        w1 = std::min(w1, period);
        w2 = std::min(w2, period - w1);
        const int j0 = (g * spg + s) * period + (period - w1 - w2) / 2;
        const int left = w2 / 2;
        for (int t = 0; t < w2 + w1; ++t) {
          const int j = j0 + t;
          map.at(i, j) = (t < left || t >= left + w1) ? 2 : 1;
        }
      }
    }
  }

  const auto meas = map.measured_fractions();
  const auto want = wheel_areas(w);
  for (int p = 0; p < 3; ++p)
    if (std::abs(meas[p] - want[p]) > 2e-3)
      throw ResolutionTooCoarseError("rasterized phase " + std::to_string(p + 1) +
                                     " area off by " + fmt12(meas[p] - want[p]));
  return map;
}

void write_pgm(const PhaseMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  out << "P2\n# k1=" << fmt12(map.k1) << " k2=" << fmt12(map.k2) << " contrast="
      << fmt12(map.contrast) << " m1=" << fmt12(map.m1) << " m2=" << fmt12(map.m2) << "\n"
      << map.ntheta << " " << map.nr << "\n2\n";
  for (int i = 0; i < map.nr; ++i) {
    for (int j = 0; j < map.ntheta; ++j) out << (j ? " " : "") << int(map.at(i, j)) - 1;
    out << "\n";
  }
  if (!out) throw ValidationError("short write to " + path);
}

PhaseMap read_pgm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::string magic;
  in >> magic;
  if (magic != "P2") throw ValidationError("not a plain PGM file: " + path);

  PhaseMap map;
  in >> std::ws;
  while (in.peek() == '#') {
    std::string line;
    std::getline(in, line);
    std::istringstream ls(line.substr(1));
    std::string tok;
    while (ls >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = tok.substr(0, eq);
      const double val = std::stod(tok.substr(eq + 1));
      if (key == "k1") map.k1 = val;
      else if (key == "k2") map.k2 = val;
      else if (key == "contrast") map.contrast = val;
      else if (key == "m1") map.m1 = val;
      else if (key == "m2") map.m2 = val;
    }
    in >> std::ws;
  }
  int maxval = 0;
  in >> map.ntheta >> map.nr >> maxval;
  if (!in || map.nr <= 0 || map.ntheta <= 0 || maxval != 2)
    throw ValidationError("bad PGM header in " + path);
  map.phase.assign(static_cast<size_t>(map.nr) * map.ntheta, 3);
  for (size_t n = 0; n < map.phase.size(); ++n) {
    int v = -1;
    in >> v;
    if (v < 0 || v > 2) throw ValidationError("bad PGM pixel in " + path);
    map.phase[n] = static_cast<std::uint8_t>(v + 1);
  }
  return map;
}

} // namespace wheelbounds
