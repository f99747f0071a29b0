#include <wheelbounds/radial_solver.hpp>

#include <wheelbounds/errors.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace wheelbounds {

namespace {

void validate_profile(const RadialProfile& p) {
  if (p.segments.empty()) throw SingularProfileError("empty profile");
  if (std::abs(p.segments.front().r_a) > 1e-12)
    throw SingularProfileError("profile must start at the center");
  if (std::abs(p.segments.back().r_b - 1.0) > 1e-12)
    throw SingularProfileError("profile must end at the inclusion boundary");
  if (p.segments.front().kind != RadialSegment::Kind::isotropic)
    throw SingularProfileError("profile must start with an isotropic hub");
  double prev = 0.0;
  for (const auto& s : p.segments) {
    if (std::abs(s.r_a - prev) > 1e-12) throw SingularProfileError("segments leave a gap");
    if (s.r_b - s.r_a <= 1e-12) throw SingularProfileError("zero-measure segment");
    if (s.kind == RadialSegment::Kind::isotropic) {
      if (!(s.k > 0.0) || !std::isfinite(s.k))
        throw SingularProfileError("non-positive isotropic conductivity");
    } else {
      if (!(s.alpha > 0.0) || !std::isfinite(s.alpha))
        throw SingularProfileError("non-positive circumferential coefficient");
    }
    prev = s.r_b;
  }
}

} // namespace

RadialSolution solve_radial(const RadialProfile& p, double k_star) {
  validate_profile(p);
  if (!(k_star > 0.0) || !std::isfinite(k_star))
    throw NonPositiveError("exterior conductivity must be positive and finite");

  RadialSolution sol;
  sol.k_star = k_star;
  sol.pieces.reserve(p.segments.size());

  double u = 0.0, w = 0.0;
  bool first = true;
  for (const auto& s : p.segments) {
    RadialSolution::Piece piece;
    if (s.kind == RadialSegment::Kind::isotropic) {
      double A, C;
      if (first) {
        A = 1.0; // regularity at the center: u = r
        C = 0.0;
      } else {
        A = 0.5 * (u + w / s.k) / s.r_a;
        C = 0.5 * s.r_a * (u - w / s.k);
      }
      u = A * s.r_b + C / s.r_b;
      w = s.k * (A * s.r_b - C / s.r_b);
      piece.A = A;
      piece.C = C;
    } else {
      piece.A = u; // potential frozen, current picks up the leakage
      w += s.alpha * u * (s.r_b - s.r_a);
    }
    sol.pieces.push_back(piece);
    first = false;
  }

  sol.u1 = u;
  sol.w1 = w;
  sol.dipole = (k_star * u - w) / (k_star * u + w);
  sol.energy = assemblage_energy(p, sol);
  return sol;
}

double assemblage_energy(const RadialProfile& p, const RadialSolution& sol) {
  if (sol.pieces.size() != p.segments.size())
    throw SingularProfileError("solution does not match the profile");
  if (!(sol.u1 > 0.0)) throw SingularProfileError("degenerate boundary potential");
  const double scale = 1.0 / (sol.u1 * sol.u1);
  double total = 0.0;
  for (size_t i = 0; i < p.segments.size(); ++i) {
    const auto& s = p.segments[i];
    const auto& piece = sol.pieces[i];
    if (s.kind == RadialSegment::Kind::isotropic) {
      double e = piece.A * piece.A * (s.r_b * s.r_b - s.r_a * s.r_a);
      if (s.r_a > 0.0) e += piece.C * piece.C * (1.0 / (s.r_a * s.r_a) - 1.0 / (s.r_b * s.r_b));
      total += s.k * e;
    } else {
      total += s.alpha * piece.A * piece.A * (s.r_b - s.r_a);
    }
  }
  return total * scale;
}

double effective_conductivity(const RadialProfile& p) {
  double k_min = std::numeric_limits<double>::infinity();
  for (const auto& s : p.segments)
    if (s.kind == RadialSegment::Kind::isotropic) k_min = std::min(k_min, s.k);
  if (!std::isfinite(k_min)) k_min = 1.0;

  const auto dipole = [&](double k) { return solve_radial(p, k).dipole; };

  // Bracket the invisibility point: the dipole is negative for conductors
  // weaker than the inclusion and positive for stronger ones.
  double a = 0.5 * k_min;
  double fa = dipole(a);
  for (int it = 0; fa > 0.0; ++it) {
    if (it >= 200 || a <= std::numeric_limits<double>::min())
      throw NoConvergenceError("no lower bracket for the invisibility point");
    a *= 0.5;
    fa = dipole(a);
  }
  double b = 2.0 * k_min;
  double fb = dipole(b);
  for (int it = 0; fb < 0.0; ++it) {
    if (it >= 200 || !std::isfinite(b))
      throw NoConvergenceError("no upper bracket for the invisibility point");
    b *= 2.0;
    fb = dipole(b);
  }

  double x0 = a, f0 = fa, x1 = b, f1 = fb;
  for (int it = 0; it < 100; ++it) {
    if (b - a <= 1e-12 * std::max(1.0, std::abs(b))) return 0.5 * (a + b);
    double x = (f1 != f0) ? x1 - f1 * (x1 - x0) / (f1 - f0) : 0.5 * (a + b);
    if (!(x > a && x < b)) x = 0.5 * (a + b);
    const double f = dipole(x);
    if (f < fa - 1e-12 || f > fb + 1e-12)
      throw NoConvergenceError("dipole lost monotonicity in the exterior conductivity");
    if (f == 0.0) return x;
    if (f < 0.0) {
      a = x;
      fa = f;
    } else {
      b = x;
      fb = f;
    }
    x0 = x1;
    f0 = f1;
    x1 = x;
    f1 = f;
  }
  throw NoConvergenceError("invisibility iteration exceeded 100 steps");
}

double optimize_r0(const ConductorSet& c, const Fractions& f) {
  if (classify_regime(c, f) != Regime::small_m1)
    throw RegimeMismatchError("hub-radius optimization applies below the lower threshold");

  const double lo = std::max(1e-9, 1.0 - std::sqrt(f.m3()));
  const double hi = std::sqrt(f.m2);
  if (!(hi > lo)) throw InfeasibleFractionsError("empty hub-radius interval");

  const auto energy = [&](double r0) {
    return effective_conductivity(radial_profile(build_w2_123_at(c, f, r0)));
  };

  // Golden-section pass over the full pipeline, good to about sqrt(eps).
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double e1 = energy(x1), e2 = energy(x2);
  while (b - a > 1e-9) {
    if (e1 <= e2) {
      b = x2;
      x2 = x1;
      e2 = e1;
      x1 = b - phi * (b - a);
      e1 = energy(x1);
    } else {
      a = x1;
      x1 = x2;
      e1 = e2;
      x2 = a + phi * (b - a);
      e2 = energy(x2);
    }
  }
  const double coarse = 0.5 * (a + b);

  // Sharpen on the stationarity of W(r0) = k2 + 2(1-r0)^2 / Q(r0) with
  // Q = m1/k1 + (m2 - r0^2)/k2, whose derivative vanishes where
  // r0/k2 = m1/k1 + m2/k2. Bisect that slope over the admissible interval.
  const auto slope = [&](double r0) { return r0 / c.k2 - f.m1 / c.k1 - f.m2 / c.k2; };
  double pa = lo, pb = hi;
  if (slope(pa) >= 0.0) return pa;
  if (slope(pb) <= 0.0) return pb;
  while (pb - pa > 1e-15)
    (slope(0.5 * (pa + pb)) < 0.0 ? pa : pb) = 0.5 * (pa + pb);
  const double r0 = 0.5 * (pa + pb);

  if (std::abs(r0 - coarse) > 1e-6)
    throw NoConvergenceError("energy minimum and stationarity disagree");
  return r0;
}

double fd_effective_conductivity(const RadialProfile& p, double contrast, int n_nodes) {
  validate_profile(p);
  double k_max = 0.0;
  for (const auto& s : p.segments)
    k_max = std::max({k_max, s.k, s.k1, s.k2});
  if (!(contrast > k_max) || !std::isfinite(contrast))
    throw BadContrastError("contrast must be finite and exceed every material conductivity");
  if (n_nodes < 16) throw ValidationError("need at least 16 grid nodes");

  // The innermost segment is isotropic, so it carries the regular mode
  // u ~ r all the way to its rim, where the radial current obeys w = k u
  // exactly. Starting the grid there with that relation as the inner
  // condition spends every node on radii where the profile actually varies.
  const double k_in = p.segments.front().k;
  const double r_in = p.segments.front().r_b;
  if (p.segments.size() == 1) return k_in;

  // Log-spaced nodes plus every interface radius; interfaces land on nodes
  // so face conductivities are always sampled inside one segment.
  std::vector<double> r;
  r.reserve(static_cast<size_t>(n_nodes) + p.segments.size() + 2);
  for (int i = 0; i < n_nodes; ++i)
    r.push_back(r_in * std::pow(1.0 / r_in, double(i) / (n_nodes - 1)));
  for (const auto& s : p.segments)
    if (s.r_a > r_in) r.push_back(s.r_a);
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end(),
                      [](double x, double y) { return std::abs(x - y) < 1e-14; }),
          r.end());
  r.front() = r_in;
  r.back() = 1.0;
  const int n = static_cast<int>(r.size());

  const auto segment_at = [&](double x) -> const RadialSegment& {
    for (const auto& s : p.segments)
      if (x <= s.r_b || &s == &p.segments.back()) return s;
    return p.segments.back();
  };
  const auto k_radial = [&](double x) {
    const auto& s = segment_at(x);
    if (s.kind == RadialSegment::Kind::isotropic) return s.k;
    const double f1 = s.a1 / x, f2 = s.a2 / x;
    const double f3 = std::max(0.0, 1.0 - f1 - f2);
    return f1 * s.k1 + f2 * s.k2 + f3 * contrast;
  };
  const auto k_circ = [&](double x) {
    const auto& s = segment_at(x);
    if (s.kind == RadialSegment::Kind::isotropic) return s.k;
    const double f1 = s.a1 / x, f2 = s.a2 / x;
    const double f3 = std::max(0.0, 1.0 - f1 - f2);
    double res = f3 / contrast;
    if (f1 > 0.0) res += f1 / s.k1;
    if (f2 > 0.0) res += f2 / s.k2;
    return 1.0 / res;
  };

  // Circumferential leakage of a half cell [x, y] by the midpoint rule;
  // half cells never straddle an interface because interfaces are nodes.
  const auto leak = [&](double x, double y) {
    const double m = 0.5 * (x + y);
    return k_circ(m) / m * (y - x);
  };

  // Tridiagonal finite volumes for (r K_r u')' = K_theta u / r, closed by
  // w = k u at the inner rim and u(1) = 1 fixing the scale.
  std::vector<double> du(n, 0.0), dl(n, 0.0), dd(n, 0.0), rhs(n, 0.0);
  {
    const double gp = 0.5 * (r[0] + r[1]);
    const double tp = gp * k_radial(gp) / (r[1] - r[0]);
    du[0] = -tp;
    dd[0] = tp + k_in + leak(r[0], gp);
  }
  for (int j = 1; j + 1 < n; ++j) {
    const double gm = 0.5 * (r[j - 1] + r[j]), gp = 0.5 * (r[j] + r[j + 1]);
    const double tm = gm * k_radial(gm) / (r[j] - r[j - 1]);
    const double tp = gp * k_radial(gp) / (r[j + 1] - r[j]);
    dl[j] = -tm;
    du[j] = -tp;
    dd[j] = tm + tp + leak(gm, r[j]) + leak(r[j], gp);
  }
  dd[n - 1] = 1.0;
  rhs[n - 1] = 1.0;

  for (int j = 1; j < n; ++j) {
    const double m = dl[j] / dd[j - 1];
    dd[j] -= m * du[j - 1];
    rhs[j] -= m * rhs[j - 1];
  }
  std::vector<double> u(n);
  u[n - 1] = rhs[n - 1] / dd[n - 1];
  for (int j = n - 2; j >= 0; --j) u[j] = (rhs[j] - du[j] * u[j + 1]) / dd[j];

  // Radial current at the boundary: face flux plus the leakage accumulated
  // between the last face and r = 1.
  const double g = 0.5 * (r[n - 2] + r[n - 1]);
  const double flux = g * k_radial(g) * (u[n - 1] - u[n - 2]) / (r[n - 1] - r[n - 2]);
  const double rm = 0.5 * (g + 1.0);
  const double um = u[n - 2] + (u[n - 1] - u[n - 2]) * (rm - r[n - 2]) / (r[n - 1] - r[n - 2]);
  return flux + leak(g, 1.0) * um;
}

} // namespace wheelbounds
