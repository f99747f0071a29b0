#include <wheelbounds/cell_verifier.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>

namespace wheelbounds {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double harmonic(double a, double b) { return 2.0 * a * b / (a + b); }

// Geometry plus face transmissibilities of the assembled system. Cells are
// ring-major; index 0 of the potential vector is the center node.
struct Assembly {
  int nr = 0;
  int nt = 0;
  double dth = 0.0;
  const std::vector<double>* r_edge = nullptr;
  const std::vector<double>* rc = nullptr;
  std::vector<double> t_center; // nt
  std::vector<double> t_rad;    // nr*nt; last ring couples to the driven rim
  std::vector<double> t_ang;    // nr*nt; face to the next column, wrapping
  std::vector<double> diag;     // 1 + nr*nt
  std::vector<double> rhs;      // 1 + nr*nt
};

std::size_t cid(const Assembly& a, int i, int j) {
  return 1 + static_cast<std::size_t>(i) * a.nt + j;
}

void build_assembly(Assembly& a, const std::vector<double>& r_edge,
                    const std::vector<double>& rc, int nt, double r_out,
                    const std::vector<double>& k_cell) {
  const int nr = static_cast<int>(rc.size());
  a.nr = nr;
  a.nt = nt;
  a.dth = two_pi / nt;
  a.r_edge = &r_edge;
  a.rc = &rc;
  a.t_center.assign(nt, 0.0);
  a.t_rad.assign(static_cast<std::size_t>(nr) * nt, 0.0);
  a.t_ang.assign(static_cast<std::size_t>(nr) * nt, 0.0);
  a.diag.assign(1 + static_cast<std::size_t>(nr) * nt, 0.0);
  a.rhs.assign(1 + static_cast<std::size_t>(nr) * nt, 0.0);

  const auto k = [&](int i, int j) { return k_cell[static_cast<std::size_t>(i) * nt + j]; };

  for (int j = 0; j < nt; ++j) a.t_center[j] = k(0, j) * a.dth / 2.0;

  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      const std::size_t f = static_cast<std::size_t>(i) * nt + j;
      if (i + 1 < nr) {
        // series resistance from center to center through the shared arc
        const double re = r_edge[i + 1];
        a.t_rad[f] = re * a.dth /
                     ((re - rc[i]) / k(i, j) + (rc[i + 1] - re) / k(i + 1, j));
      } else {
        a.t_rad[f] = r_out * a.dth / ((r_out - rc[i]) / k(i, j));
      }
      const int jn = j + 1 == nt ? 0 : j + 1;
      const double h = r_edge[i + 1] - r_edge[i];
      a.t_ang[f] = harmonic(k(i, j), k(i, jn)) * h / (rc[i] * a.dth);
    }
  }

  // diagonal and driven-rim right-hand side
  double dc = 0.0;
  for (int j = 0; j < nt; ++j) dc += a.t_center[j];
  a.diag[0] = dc;
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      const std::size_t f = static_cast<std::size_t>(i) * nt + j;
      const int jp = j == 0 ? nt - 1 : j - 1;
      double d = a.t_rad[f] + a.t_ang[f] + a.t_ang[static_cast<std::size_t>(i) * nt + jp];
      if (i == 0)
        d += a.t_center[j];
      else
        d += a.t_rad[f - nt];
      a.diag[cid(a, i, j)] = d;
      if (i + 1 == nr) {
        const double th = (j + 0.5) * a.dth;
        a.rhs[cid(a, i, j)] = a.t_rad[f] * r_out * std::cos(th);
      }
    }
  }
}

// y = A x for the assembled operator.
void matvec(const Assembly& a, const std::vector<double>& x, std::vector<double>& y) {
  const int nr = a.nr, nt = a.nt;
  double yc = a.diag[0] * x[0];
  for (int j = 0; j < nt; ++j) yc -= a.t_center[j] * x[1 + j];
  y[0] = yc;
  for (int i = 0; i < nr; ++i) {
    const std::size_t row = 1 + static_cast<std::size_t>(i) * nt;
    const std::size_t f0 = static_cast<std::size_t>(i) * nt;
    for (int j = 0; j < nt; ++j) {
      const int jn = j + 1 == nt ? 0 : j + 1;
      const int jp = j == 0 ? nt - 1 : j - 1;
      double v = a.diag[row + j] * x[row + j];
      v -= a.t_ang[f0 + j] * x[row + jn];
      v -= a.t_ang[f0 + jp] * x[row + jp];
      if (i + 1 < nr) v -= a.t_rad[f0 + j] * x[row + nt + j];
      if (i == 0)
        v -= a.t_center[j] * x[0];
      else
        v -= a.t_rad[f0 - nt + j] * x[row - nt + j];
      y[row + j] = v;
    }
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Galerkin projection of the operator onto u(i,j) = rho_i cos(theta_j):
// a tridiagonal problem whose solution is exact whenever the conductivity
// map does not depend on the angle. The center node decouples (its row
// pairs with the zero-mean mode).
std::vector<double> mode_solve(const Assembly& a, double r_out) {
  const int nr = a.nr, nt = a.nt;
  std::vector<double> cs(nt), off(nr, 0.0), sink(nr, 0.0);
  for (int j = 0; j < nt; ++j) cs[j] = std::cos((j + 0.5) * a.dth);
  double tc = 0.0;
  for (int j = 0; j < nt; ++j) tc += a.t_center[j] * cs[j] * cs[j];
  for (int i = 0; i < nr; ++i) {
    const std::size_t f0 = static_cast<std::size_t>(i) * nt;
    double o = 0.0, s = 0.0;
    for (int j = 0; j < nt; ++j) {
      const int jn = j + 1 == nt ? 0 : j + 1;
      o += a.t_rad[f0 + j] * cs[j] * cs[j];
      const double dc = cs[jn] - cs[j];
      s += a.t_ang[f0 + j] * dc * dc;
    }
    off[i] = o;
    sink[i] = s;
  }

  std::vector<double> dl(nr, 0.0), dd(nr, 0.0), du(nr, 0.0), rhs(nr, 0.0), rho(nr, 0.0);
  for (int i = 0; i < nr; ++i) {
    dd[i] = sink[i] + off[i] + (i == 0 ? tc : off[i - 1]);
    if (i > 0) dl[i] = -off[i - 1];
    if (i + 1 < nr) du[i] = -off[i];
  }
  rhs[nr - 1] = off[nr - 1] * r_out;
  for (int i = 1; i < nr; ++i) {
    const double m = dl[i] / dd[i - 1];
    dd[i] -= m * du[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  rho[nr - 1] = rhs[nr - 1] / dd[nr - 1];
  for (int i = nr - 2; i >= 0; --i) rho[i] = (rhs[i] - du[i] * rho[i + 1]) / dd[i];
  return rho;
}

// Preconditioned conjugate gradients; returns (relative residual, iterations).
std::pair<double, int> pcg(const Assembly& a, std::vector<double>& x) {
  const std::size_t n = a.rhs.size();
  const double bnorm = std::sqrt(dot(a.rhs, a.rhs));
  if (bnorm == 0.0) {
    x.assign(n, 0.0);
    return {0.0, 0};
  }
  const int cap = static_cast<int>(50.0 * std::sqrt(double(n))) + 10;
  std::vector<double> r(n), z(n), p(n), q(n);
  matvec(a, x, q);
  for (std::size_t i = 0; i < n; ++i) r[i] = a.rhs[i] - q[i];
  for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / a.diag[i];
  p = z;
  double rz = dot(r, z);
  double rnorm = std::sqrt(dot(r, r));
  int it = 0;
  while (rnorm > 1e-10 * bnorm) {
    if (++it > cap) throw NoConvergenceError("linear solver exceeded its iteration budget");
    matvec(a, p, q);
    const double alpha = rz / dot(p, q);
    for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
    for (std::size_t i = 0; i < n; ++i) r[i] -= alpha * q[i];
    rnorm = std::sqrt(dot(r, r));
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / a.diag[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return {rnorm / bnorm, it};
}

void validate_embedding(const PhaseMap& map, double k_star, double r_out) {
  if (map.nr < 2 || map.ntheta < 8)
    throw ValidationError("phase map too coarse to embed");
  if (map.phase.size() != static_cast<std::size_t>(map.nr) * map.ntheta)
    throw ValidationError("phase map storage does not match its dimensions");
  for (const uint8_t p : map.phase)
    if (p < 1 || p > 3) throw ValidationError("phase map entries must be 1, 2 or 3");
  if (!(r_out >= 2.0) || !std::isfinite(r_out))
    throw ValidationError("embedding radius must be at least 2");
  if (!(k_star > 0.0) || !std::isfinite(k_star))
    throw NonPositiveError("medium conductivity must be positive and finite");
}

SectorField solve_core(const PhaseMap& map, const std::array<double, 3>& phase_k,
                       double k_star, double r_out, const std::vector<double>* warm) {
  validate_embedding(map, k_star, r_out);
  for (const double k : phase_k)
    if (!(k > 0.0) || !std::isfinite(k))
      throw NonPositiveError("phase conductivities must be positive and finite");

  SectorField f;
  f.nr_map = map.nr;
  f.ntheta = map.ntheta;
  f.r_out = r_out;
  f.k_star = k_star;

  // uniform rings over the inclusion, then logarithmic rings out to the rim
  const int n_out = std::max(8, static_cast<int>(std::ceil(map.nr * std::log(r_out) / 2.0)));
  f.nr = map.nr + n_out;
  f.r_edge.resize(f.nr + 1);
  for (int i = 0; i <= map.nr; ++i) f.r_edge[i] = double(i) / map.nr;
  for (int j = 1; j <= n_out; ++j)
    f.r_edge[map.nr + j] = std::pow(r_out, double(j) / n_out);

  const std::size_t n_cells = static_cast<std::size_t>(f.nr) * f.ntheta;
  f.k_cell.resize(n_cells);
  f.phase.assign(n_cells, 0);
  for (int i = 0; i < f.nr; ++i)
    for (int j = 0; j < f.ntheta; ++j) {
      const std::size_t c = static_cast<std::size_t>(i) * f.ntheta + j;
      if (i < map.nr) {
        f.phase[c] = map.phase[c];
        f.k_cell[c] = phase_k[map.phase[c] - 1];
      } else {
        f.k_cell[c] = k_star;
      }
    }

  std::vector<double> rc(f.nr);
  for (int i = 0; i < f.nr; ++i) rc[i] = 0.5 * (f.r_edge[i] + f.r_edge[i + 1]);

  Assembly a;
  build_assembly(a, f.r_edge, rc, f.ntheta, r_out, f.k_cell);

  // start from the separable solution of the angularly averaged problem,
  // which is already exact for angle-independent maps
  f.u.assign(1 + n_cells, 0.0);
  if (warm && warm->size() == f.u.size()) {
    f.u = *warm;
  } else {
    const std::vector<double> rho = mode_solve(a, r_out);
    for (int i = 0; i < f.nr; ++i)
      for (int j = 0; j < f.ntheta; ++j)
        f.u[cid(a, i, j)] = rho[i] * std::cos((j + 0.5) * a.dth);
  }

  const auto [res, it] = pcg(a, f.u);
  f.residual_norm = res;
  f.iterations = it;

  // dipole: cosine projection at the probe ring minus the discrete
  // background through the same grid filled with the medium alone
  const double r_probe = 0.5 * (1.0 + r_out);
  int ip = map.nr;
  for (int i = map.nr; i < f.nr; ++i)
    if (std::abs(rc[i] - r_probe) < std::abs(rc[ip] - r_probe)) ip = i;
  f.probe_ring = ip;

  double amp = 0.0;
  for (int j = 0; j < f.ntheta; ++j)
    amp += f.u[cid(a, ip, j)] * std::cos((j + 0.5) * a.dth);
  amp *= 2.0 / f.ntheta;

  Assembly bg;
  const std::vector<double> k_bg(n_cells, k_star);
  build_assembly(bg, f.r_edge, rc, f.ntheta, r_out, k_bg);
  const std::vector<double> rho_bg = mode_solve(bg, r_out);
  f.dipole_amplitude = amp - rho_bg[ip];
  return f;
}

double median_of(std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  return v[mid];
}

} // namespace

SectorField solve_embedded(const PhaseMap& map, const ConductorSet& c, double contrast,
                           double k_star, double r_out) {
  if (!(contrast > c.k2) || !std::isfinite(contrast))
    throw BadContrastError("contrast must be finite and exceed every material conductivity");
  return solve_core(map, {c.k1, c.k2, contrast}, k_star, r_out, nullptr);
}

SectorField solve_embedded(const PhaseMap& map, const std::array<double, 3>& phase_k,
                           double k_star, double r_out) {
  return solve_core(map, phase_k, k_star, r_out, nullptr);
}

double measure_effective(const PhaseMap& map, const std::array<double, 3>& phase_k,
                         double r_out, double k_init, double rel_tol) {
  if (!(k_init > 0.0) || !std::isfinite(k_init))
    throw NonPositiveError("initial medium conductivity must be positive and finite");
  if (!(rel_tol > 0.0)) throw ValidationError("tolerance must be positive");

  std::vector<double> warm;
  const auto dipole = [&](double k) {
    SectorField f = solve_core(map, phase_k, k, r_out, warm.empty() ? nullptr : &warm);
    warm = f.u;
    return f.dipole_amplitude;
  };

  // the measured amplitude grows with the medium conductivity: negative
  // while the medium underestimates the inclusion, positive once it
  // overshoots, so bracket the sign change outward from the seed
  double ka = k_init, da = dipole(ka);
  double kb = ka, db = da;
  int grow = 0;
  if (da < 0.0) {
    do {
      if (++grow > 60) throw NoConvergenceError("no sign change while raising the medium");
      kb *= 1.35;
      db = dipole(kb);
    } while (db < 0.0);
  } else {
    do {
      if (++grow > 60) throw NoConvergenceError("no sign change while lowering the medium");
      ka /= 1.35;
      da = dipole(ka);
    } while (da > 0.0);
  }

  // Illinois-damped false position on the bracket [ka, kb], da <= 0 <= db
  double fa = da, fb = db;
  for (int it = 0; it < 80; ++it) {
    if (kb - ka <= rel_tol * std::max(1.0, kb)) break;
    double km = (fb - fa) > 0.0 ? (ka * fb - kb * fa) / (fb - fa) : 0.5 * (ka + kb);
    const double w = kb - ka;
    km = std::min(std::max(km, ka + 0.01 * w), kb - 0.01 * w);
    const double fm = dipole(km);
    if (std::abs(fm) <= 1e-11 * r_out) return km;
    if (fm < 0.0) {
      ka = km;
      fa = fm;
      fb *= 0.5;
    } else {
      kb = km;
      fb = fm;
      fa *= 0.5;
    }
  }
  return 0.5 * (ka + kb);
}

double measure_effective(const PhaseMap& map, const ConductorSet& c, double contrast,
                         double r_out, double rel_tol) {
  if (!(contrast > c.k2) || !std::isfinite(contrast))
    throw BadContrastError("contrast must be finite and exceed every material conductivity");
  const double k0 = lower_bound(c, make_fractions(map.m1, map.m2)).value;
  return measure_effective(map, {c.k1, c.k2, contrast}, r_out, k0, rel_tol);
}

ExtrapolationReport extrapolate(const std::vector<RunSample>& runs) {
  const std::size_t n = runs.size();
  if (n < 3) throw ValidationError("need at least three samples to extrapolate");

  // candidate regressors; constant columns fold into the limit term
  std::vector<std::array<double, 4>> cols(n);
  for (std::size_t i = 0; i < n; ++i) {
    const RunSample& s = runs[i];
    if (!(s.n_spikes > 0.0) || !(s.contrast > 0.0) || !(s.h >= 0.0))
      throw ValidationError("samples must have positive spike counts and contrasts");
    cols[i] = {1.0, 1.0 / s.n_spikes, 1.0 / s.contrast, s.h * s.h};
  }
  std::array<bool, 4> active{true, false, false, false};
  for (int c = 1; c < 4; ++c) {
    double lo = cols[0][c], hi = cols[0][c];
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, cols[i][c]);
      hi = std::max(hi, cols[i][c]);
    }
    active[c] = hi - lo > 1e-12 * (std::abs(hi) + std::abs(lo) + 1e-300);
  }
  std::vector<int> idx;
  for (int c = 0; c < 4; ++c)
    if (active[c]) idx.push_back(c);
  const std::size_t m = idx.size();
  if (n < m) throw IllConditionedFitError("more model terms than samples");

  // column-scaled normal equations
  std::vector<double> scale(m, 0.0);
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t i = 0; i < n; ++i) scale[c] = std::max(scale[c], std::abs(cols[i][idx[c]]));
    if (scale[c] == 0.0) scale[c] = 1.0;
  }
  std::vector<std::vector<double>> g(m, std::vector<double>(m + 1, 0.0));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        s += (cols[i][idx[r]] / scale[r]) * (cols[i][idx[c]] / scale[c]);
      g[r][c] = s;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (cols[i][idx[r]] / scale[r]) * runs[i].k_num;
    g[r][m] = s;
  }
  for (std::size_t p = 0; p < m; ++p) {
    std::size_t best = p;
    for (std::size_t r = p + 1; r < m; ++r)
      if (std::abs(g[r][p]) > std::abs(g[best][p])) best = r;
    std::swap(g[p], g[best]);
    if (std::abs(g[p][p]) < 1e-10)
      throw IllConditionedFitError("regressors are too collinear to separate");
    for (std::size_t r = 0; r < m; ++r) {
      if (r == p) continue;
      const double fac = g[r][p] / g[p][p];
      for (std::size_t c = p; c <= m; ++c) g[r][c] -= fac * g[p][c];
    }
  }
  std::array<double, 4> coef{0.0, 0.0, 0.0, 0.0};
  for (std::size_t c = 0; c < m; ++c) coef[idx[c]] = g[c][m] / g[c][c] / scale[c];

  ExtrapolationReport rep;
  rep.k_inf = coef[0];
  rep.coeff_spikes = coef[1];
  rep.coeff_contrast = coef[2];
  rep.coeff_grid = coef[3];
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double fit = 0.0;
    for (int c = 0; c < 4; ++c) fit += coef[c] * cols[i][c];
    ss += (fit - runs[i].k_num) * (fit - runs[i].k_num);
  }
  rep.residual = std::sqrt(ss / double(n));
  return rep;
}

double field_energy(const SectorField& f) {
  std::vector<double> rc(f.nr);
  for (int i = 0; i < f.nr; ++i) rc[i] = f.cell_center(i);
  Assembly a;
  build_assembly(a, f.r_edge, rc, f.ntheta, f.r_out, f.k_cell);
  double e = 0.0;
  for (int j = 0; j < f.ntheta; ++j) {
    const double d = f.u[0] - f.u[cid(a, 0, j)];
    e += a.t_center[j] * d * d;
  }
  for (int i = 0; i < f.nr; ++i)
    for (int j = 0; j < f.ntheta; ++j) {
      const std::size_t fc = static_cast<std::size_t>(i) * f.ntheta + j;
      const int jn = j + 1 == f.ntheta ? 0 : j + 1;
      const double dth_u = f.u[cid(a, i, j)] - f.u[cid(a, i, jn)];
      e += a.t_ang[fc] * dth_u * dth_u;
      double dr_u;
      if (i + 1 < f.nr)
        dr_u = f.u[cid(a, i, j)] - f.u[cid(a, i + 1, j)];
      else
        dr_u = f.u[cid(a, i, j)] - f.r_out * std::cos((j + 0.5) * a.dth);
      e += a.t_rad[fc] * dr_u * dr_u;
    }
  return e;
}

double boundary_flux_integral(const SectorField& f) {
  std::vector<double> rc(f.nr);
  for (int i = 0; i < f.nr; ++i) rc[i] = f.cell_center(i);
  Assembly a;
  build_assembly(a, f.r_edge, rc, f.ntheta, f.r_out, f.k_cell);
  double s = 0.0;
  const int last = f.nr - 1;
  for (int j = 0; j < f.ntheta; ++j) {
    const double ub = f.r_out * std::cos((j + 0.5) * a.dth);
    s += a.t_rad[static_cast<std::size_t>(last) * f.ntheta + j] *
         ub * (ub - f.u[cid(a, last, j)]);
  }
  return s;
}

std::array<PhaseFieldStats, 3> field_conditions_check(const SectorField& f,
                                                      const std::array<FieldSpec, 3>& spec) {
  if (f.ntheta % 4 != 0)
    throw ValidationError("field reconstruction needs a quarter turn of whole cells");
  const int nt = f.ntheta, shift = nt / 4;
  for (int i = 0; i < f.nr_map; ++i)
    for (int j = 0; j < nt; ++j) {
      const std::size_t c = static_cast<std::size_t>(i) * nt + j;
      const std::size_t cq = static_cast<std::size_t>(i) * nt + (j + shift) % nt;
      if (f.phase[c] != f.phase[cq])
        throw ValidationError("phase map lacks quarter-turn symmetry");
    }

  const double dth = two_pi / nt;
  std::vector<double> rc(f.nr);
  for (int i = 0; i < f.nr; ++i) rc[i] = f.cell_center(i);

  // cartesian gradient of the first loading at one cell
  const auto grad = [&](int i, int j3) -> std::array<double, 2> {
    const int j = (j3 % nt + nt) % nt;
    const double u_out = f.potential(i + 1, j);
    const double u_in = i == 0 ? f.u[0] : f.potential(i - 1, j);
    const double r_in = i == 0 ? 0.0 : rc[i - 1];
    const double er = (u_out - u_in) / (rc[i + 1] - r_in);
    const int jn = (j + 1) % nt, jp = (j + nt - 1) % nt;
    const double et = (f.potential(i, jn) - f.potential(i, jp)) / (2.0 * rc[i] * dth);
    const double th = (j + 0.5) * dth;
    const double ct = std::cos(th), st = std::sin(th);
    return {er * ct - et * st, er * st + et * ct};
  };

  std::array<std::vector<double>, 3> norms, traces, det_ratios, id_devs, trace_devs;
  std::array<std::size_t, 3> neg_count{0, 0, 0};

  for (int i = 0; i < f.nr_map; ++i)
    for (int j = 0; j < nt; ++j) {
      const int ph = f.phase[static_cast<std::size_t>(i) * nt + j];
      const auto ga = grad(i, j);
      // second loading: the same field a quarter turn behind, rotated forward
      const auto gr = grad(i, j - shift);
      const std::array<double, 2> gb{-gr[1], gr[0]};

      const double tr = ga[0] + gb[1];
      const double det = ga[0] * gb[1] - gb[0] * ga[1];
      const double n2 = ga[0] * ga[0] + ga[1] * ga[1] + gb[0] * gb[0] + gb[1] * gb[1];
      const double norm = std::sqrt(n2);

      auto& bucket_n = norms[ph - 1];
      bucket_n.push_back(norm);
      traces[ph - 1].push_back(tr);
      det_ratios[ph - 1].push_back(n2 > 0.0 ? std::abs(det) / (0.5 * n2) : 0.0);
      const double ox = ga[0] - 0.5 * tr, oy = gb[1] - 0.5 * tr;
      const double off = std::sqrt(ox * ox + oy * oy + ga[1] * ga[1] + gb[0] * gb[0]);
      id_devs[ph - 1].push_back(norm > 0.0 ? off / norm : 0.0);
      if (det < 0.0) ++neg_count[ph - 1];
      const double target = spec[ph - 1].trace_value;
      trace_devs[ph - 1].push_back(std::abs(tr - target) /
                                   (std::abs(target) > 0.0 ? std::abs(target) : 1.0));
    }

  std::array<PhaseFieldStats, 3> out{};
  for (int p = 0; p < 3; ++p) {
    out[p].phase = p + 1;
    out[p].cells = norms[p].size();
    out[p].median_norm = median_of(norms[p]);
    out[p].median_trace = median_of(traces[p]);
    out[p].median_det_ratio = median_of(det_ratios[p]);
    out[p].median_identity_dev = median_of(id_devs[p]);
    out[p].median_trace_dev = median_of(trace_devs[p]);
    out[p].det_negative_fraction =
        out[p].cells == 0 ? 0.0 : double(neg_count[p]) / double(out[p].cells);
  }
  return out;
}

} // namespace wheelbounds
