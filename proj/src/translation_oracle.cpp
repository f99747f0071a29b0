#include <wheelbounds/translation_oracle.hpp>

#include <cmath>
#include <limits>

namespace wheelbounds {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double phase_k(int i, const ConductorSet& c) {
  if (i == 1) return c.k1;
  if (i == 2) return c.k2;
  throw ValidationError("phase index must be 1, 2 or 3");
}

// Quadratic coefficient of the enveloped well in s at d = 0; the d-slot of
// the minimum is always 0 because the d^2 coefficient is non-negative below
// k_i and the envelope is d-independent above.
double envelope_s_coeff(double k, double t) {
  return t <= k ? 0.25 * (k + t) : 0.5 * k;
}

struct GoldenResult {
  double x;
  double fx;
};

// Golden-section maximization of a unimodal function on [a, b].
template <class F>
GoldenResult golden_max(F&& f, double a, double b, double tol) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  double xm = 0.5 * (a + b);
  return GoldenResult{xm, f(xm)};
}

} // namespace

TranslationState make_translation_state(double s1, double d1, double s2, double d2) {
  if (s1 * s1 < d1 * d1 || s2 * s2 < d2 * d2) {
    throw ConeViolationError("field state must satisfy s^2 >= d^2");
  }
  TranslationState st;
  st.s = {s1, s2};
  st.d = {d1, d2};
  return st;
}

double translated_well(int i, double s, double d, double t, const ConductorSet& c) {
  if (!(t >= 0.0)) throw ValidationError("translation parameter t must be >= 0");
  if (i == 3) return (s == 0.0 && d == 0.0) ? 0.0 : inf;
  const double k = phase_k(i, c);
  if (s * s < d * d) return inf;
  return 0.25 * ((k + t) * s * s + (k - t) * d * d);
}

double envelope_well(int i, double s, double d, double t, const ConductorSet& c) {
  if (!(t >= 0.0)) throw ValidationError("translation parameter t must be >= 0");
  if (i == 3) {
    if (s != 0.0 || d != 0.0) return inf;
    return 0.0;
  }
  const double k = phase_k(i, c);
  if (s * s < d * d) {
    throw ConeViolationError("envelope_well requires s^2 >= d^2");
  }
  if (t <= k) return 0.25 * ((k + t) * s * s + (k - t) * d * d);
  return 0.5 * k * s * s;
}

std::pair<double, TranslationState> constrained_min(const ConductorSet& c,
                                                    const Fractions& f, double t) {
  if (!(t >= 0.0)) throw ValidationError("translation parameter t must be >= 0");
  if (f.m1 == 0.0 && f.m2 == 0.0) {
    throw DegenerateError("constrained_min needs a finite phase to carry the load");
  }

  // With both d-coefficients non-negative (or absent on the envelope), the
  // d constraint is satisfied at d1 = d2 = 0 for free. What remains is a
  // diagonal quadratic program over (s1, s2) with one linear constraint,
  // solved exactly by its stationarity condition s_i = lambda / (2 a_i).
  const std::array<double, 2> m{f.m1, f.m2};
  const std::array<double, 2> a{envelope_s_coeff(c.k1, t), envelope_s_coeff(c.k2, t)};

  double inv_sum = 0.0;
  for (int i = 0; i < 2; ++i) {
    if (m[i] > 0.0) inv_sum += m[i] / a[i];
  }
  const double lambda = 4.0 / inv_sum;
  const double value = 4.0 / inv_sum;

  TranslationState st;
  for (int i = 0; i < 2; ++i) {
    st.s[i] = m[i] > 0.0 ? lambda / (2.0 * a[i]) : 0.0;
    st.d[i] = 0.0;
  }
  st.lambda_s = lambda;
  st.lambda_d = 0.0;
  return {value, st};
}

OracleResult maximize_over_t(const ConductorSet& c, const Fractions& f) {
  auto objective = [&](double t) { return constrained_min(c, f, t).first - t; };

  // Pinned global search bracket; the objective is unimodal on it.
  const double hi = 2.0 * c.k2;
  const GoldenResult g = golden_max(objective, 0.0, hi, 1e-10 * (1.0 + hi));

  // Polish the argmax. The objective rises up to k1, falls beyond k2, and on
  // (k1, k2) equals 1/G(t) - t with G = m1/(2 k1) + m2/(k2 + t), whose
  // derivative has a single sign change. Bisection on the derivative pins
  // the maximizer to machine precision where golden-section alone saturates
  // at the square root of the floating-point noise.
  double t_opt;
  if (c.k1 == c.k2 || f.m2 == 0.0) {
    t_opt = c.k1;
  } else if (f.m1 == 0.0) {
    t_opt = c.k2;
  } else {
    auto dFb = [&](double t) {
      const double G = f.m1 / (2.0 * c.k1) + f.m2 / (c.k2 + t);
      const double r = c.k2 + t;
      return f.m2 / (r * r * G * G) - 1.0;
    };
    if (dFb(c.k1) <= 0.0) {
      t_opt = c.k1;
    } else if (dFb(c.k2) >= 0.0) {
      t_opt = c.k2;
    } else {
      double lo = c.k1, up = c.k2;
      for (int it = 0; it < 200 && up - lo > 1e-16 * c.k2; ++it) {
        double mid = 0.5 * (lo + up);
        (dFb(mid) > 0.0 ? lo : up) = mid;
      }
      t_opt = 0.5 * (lo + up);
    }
  }

  const double value = objective(t_opt);
  if (!(value >= g.fx - 1e-9 * (1.0 + std::abs(g.fx)))) {
    throw NoConvergenceError("translation maximization polish disagrees with search");
  }

  OracleResult out;
  out.bound_value = value;
  out.t_opt = t_opt;
  out.minimizer = constrained_min(c, f, t_opt).second;
  out.enveloped = {t_opt > c.k1, t_opt > c.k2};
  return out;
}

} // namespace wheelbounds
