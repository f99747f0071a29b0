#include <wheelbounds/cli.hpp>

#include <wheelbounds/cell_verifier.hpp>
#include <wheelbounds/cond_bounds.hpp>
#include <wheelbounds/elastic_bounds.hpp>
#include <wheelbounds/radial_solver.hpp>
#include <wheelbounds/translation_oracle.hpp>
#include <wheelbounds/wheel_geometry.hpp>

#include <CLI11.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace wheelbounds {
namespace {

std::string num(double v) {
  char b[40];
  std::snprintf(b, sizeof(b), "%.12g", v);
  return b;
}

const char* det_name(DetCondition d) {
  switch (d) {
  case DetCondition::zero: return "zero";
  case DetCondition::non_negative: return "non-negative";
  case DetCondition::unconstrained: return "free";
  }
  return "?";
}

// Ordered single-line JSON object builder. Values arrive preformatted, so
// the emitted bytes depend only on the inputs.
class Json {
public:
  Json& raw(const std::string& key, const std::string& value) {
    body_ += first_ ? "" : ", ";
    first_ = false;
    body_ += "\"" + key + "\": " + value;
    return *this;
  }
  Json& text(const std::string& key, const std::string& v) { return raw(key, "\"" + v + "\""); }
  Json& real(const std::string& key, double v) { return raw(key, num(v)); }
  Json& integer(const std::string& key, long v) { return raw(key, std::to_string(v)); }
  Json& flag(const std::string& key, bool v) { return raw(key, v ? "true" : "false"); }
  std::string str() const { return "{" + body_ + "}"; }

private:
  std::string body_;
  bool first_ = true;
};

std::string fields_json(const std::array<FieldSpec, 3>& fs) {
  std::string s = "[";
  for (int i = 0; i < 3; ++i) {
    Json j;
    j.integer("phase", fs[i].phase);
    j.real("trace", fs[i].trace_value);
    j.text("det", det_name(fs[i].det_condition));
    if (fs[i].has_matrix) j.real("coeff", fs[i].matrix_coeff);
    if (i) s += ", ";
    s += j.str();
  }
  return s + "]";
}

void print_fields(std::ostream& out, const std::array<FieldSpec, 3>& fs) {
  for (const auto& s : fs) {
    out << "  phase " << s.phase << ": ";
    if (s.has_matrix)
      out << "E = " << num(s.matrix_coeff) << " I";
    else
      out << "trace " << num(s.trace_value) << ", det " << det_name(s.det_condition);
    out << "\n";
  }
}

struct BoundsArgs {
  double k1 = 0.0, k2 = 0.0, rho1 = 0.0, rho2 = 0.0, m1 = 0.0, m2 = 0.0;
  bool have_k = false, have_rho = false, json = false;
};

int cmd_bounds(const BoundsArgs& a, std::ostream& out) {
  if (a.have_k == a.have_rho)
    throw ValidationError("give exactly one pair: --k1/--k2 or --rho1/--rho2");
  const Fractions f = make_fractions(a.m1, a.m2);
  const double u1 = a.have_k ? a.k1 : a.rho1;
  const double u2 = a.have_k ? a.k2 : a.rho2;
  const BoundResult b = a.have_k
                            ? lower_bound(make_conductors(u1, u2), f)
                            : dual_resistivity_bound(make_resistors(u1, u2), f);
  // optimal-field conditions are the literal image of the primal ones
  const auto fs = optimal_fields(make_conductors(u1, u2), f);
  if (a.json) {
    Json j;
    j.text("problem", a.have_k ? "conductivity" : "resistivity");
    j.real(a.have_k ? "k1" : "rho1", u1).real(a.have_k ? "k2" : "rho2", u2);
    j.real("m1", f.m1).real("m2", f.m2);
    j.real("value", b.value);
    j.text("regime", to_string(b.regime));
    j.real("t_opt", b.t_opt);
    j.real("m11", b.thresholds.m11).real("m12", b.thresholds.m12);
    j.raw("fields", fields_json(fs));
    out << j.str() << "\n";
  } else {
    out << "problem: " << (a.have_k ? "conductivity" : "resistivity") << "\n"
        << "value: " << num(b.value) << "\n"
        << "regime: " << to_string(b.regime) << "\n"
        << "t_opt: " << num(b.t_opt) << "\n"
        << "m11: " << num(b.thresholds.m11) << "\n"
        << "m12: " << num(b.thresholds.m12) << "\n"
        << "optimal fields:\n";
    print_fields(out, fs);
  }
  return 0;
}

struct WheelArgs {
  double k1 = 0.0, k2 = 0.0, m1 = 0.0, m2 = 0.0, contrast = 1e6;
  int n_spikes = 64, nr = 128, ntheta = 512;
  std::string pgm;
  bool json = false;
};

int cmd_wheel(const WheelArgs& a, std::ostream& out) {
  const auto c = make_conductors(a.k1, a.k2);
  const auto f = make_fractions(a.m1, a.m2);
  const auto w = build_wheel(c, f);
  const auto areas = wheel_areas(w);
  const double bound = lower_bound(c, f).value;
  const double k_radial = effective_conductivity(radial_profile(w));
  const double gap = std::abs(k_radial / bound - 1.0);
  if (!a.pgm.empty()) {
    const auto map = rasterize_sector(w, a.n_spikes, a.nr, a.ntheta, a.contrast);
    write_pgm(map, a.pgm);
  }
  if (a.json) {
    Json j;
    j.text("kind", to_string(w.kind));
    j.real("k1", c.k1).real("k2", c.k2).real("m1", f.m1).real("m2", f.m2);
    j.real("r0", w.r0).real("r_env", w.r_env).real("c_env", w.c_env);
    j.real("f1_coeff", w.f1_coeff).real("f2_coeff", w.f2_coeff);
    j.raw("areas", "[" + num(areas[0]) + ", " + num(areas[1]) + ", " + num(areas[2]) + "]");
    j.real("bound", bound).real("k_radial", k_radial).real("gap", gap);
    if (!a.pgm.empty()) j.text("pgm", a.pgm);
    out << j.str() << "\n";
  } else {
    out << "kind: " << to_string(w.kind) << "\n"
        << "r0: " << num(w.r0) << "\n"
        << "r_env: " << num(w.r_env) << "\n"
        << "c_env: " << num(w.c_env) << "\n"
        << "f1_coeff: " << num(w.f1_coeff) << "\n"
        << "f2_coeff: " << num(w.f2_coeff) << "\n"
        << "areas: " << num(areas[0]) << " " << num(areas[1]) << " " << num(areas[2]) << "\n"
        << "bound: " << num(bound) << "\n"
        << "k_radial: " << num(k_radial) << "\n"
        << "gap: " << num(gap) << "\n";
    if (!a.pgm.empty()) out << "pgm: " << a.pgm << "\n";
  }
  return 0;
}

struct VerifyArgs {
  double k1 = 1.0, k2 = 2.0, m1 = -1.0, m2 = -1.0;
  int nr = 64, ntheta = 256, n_spikes = 16;
  double contrast = 1e4, r_out = 4.0, tolerance = 0.02, rel_tol = 1e-8;
  bool series = false, sanity = false, json = false;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const auto c = make_conductors(a.k1, a.k2);
  double bound = 0.0;
  std::string kind;
  WheelSpec w{};
  std::vector<int> counts;
  if (a.sanity) {
    bound = a.k1;
    kind = "homogeneous";
    counts = {0};
  } else {
    if (a.m1 < 0.0 || a.m2 < 0.0) throw ValidationError("--m1 and --m2 are required");
    const auto f = make_fractions(a.m1, a.m2);
    bound = lower_bound(c, f).value;
    w = build_wheel(c, f);
    kind = to_string(w.kind);
    if (a.series) {
      if (a.n_spikes % 4 != 0)
        throw ValidationError("--series needs --n-spikes divisible by 4");
      counts = {a.n_spikes / 4, a.n_spikes / 2, a.n_spikes};
    } else {
      counts = {a.n_spikes};
    }
  }

  std::vector<RunSample> runs;
  SectorField last;
  for (int ns : counts) {
    PhaseMap map;
    if (a.sanity) {
      map.nr = a.nr;
      map.ntheta = a.ntheta;
      map.phase.assign(static_cast<size_t>(a.nr) * a.ntheta, 1);
      map.k1 = a.k1;
      map.k2 = a.k2;
      map.contrast = a.contrast;
      map.m1 = 1.0;
      map.m2 = 0.0;
    } else {
      map = rasterize_sector(w, ns, a.nr, a.ntheta, a.contrast);
    }
    const double k = measure_effective(map, c, a.contrast, a.r_out, a.rel_tol);
    runs.push_back({static_cast<double>(ns), a.contrast, 1.0 / a.nr, k});
    if (ns == counts.back()) last = solve_embedded(map, c, a.contrast, k, a.r_out);
  }

  double k_eff = runs.back().k_num;
  ExtrapolationReport rep{};
  if (a.series) {
    rep = extrapolate(runs);
    k_eff = rep.k_inf;
  }
  const double rel_err = std::abs(k_eff / bound - 1.0);
  const bool passed = rel_err <= a.tolerance;

  if (a.json) {
    Json j;
    j.text("kind", kind);
    j.real("k1", a.k1).real("k2", a.k2);
    j.real("m1", a.sanity ? 1.0 : a.m1).real("m2", a.sanity ? 0.0 : a.m2);
    j.real("bound", bound);
    j.integer("nr", a.nr).integer("ntheta", a.ntheta);
    j.real("contrast", a.contrast).real("r_out", a.r_out);
    j.flag("series", a.series);
    std::string rs = "[";
    for (size_t i = 0; i < runs.size(); ++i) {
      Json r;
      r.integer("n_spikes", static_cast<long>(runs[i].n_spikes));
      r.real("k_num", runs[i].k_num);
      if (i) rs += ", ";
      rs += r.str();
    }
    j.raw("runs", rs + "]");
    if (a.series) {
      Json e;
      e.real("k_inf", rep.k_inf);
      e.real("coeff_spikes", rep.coeff_spikes);
      e.real("coeff_contrast", rep.coeff_contrast);
      e.real("coeff_grid", rep.coeff_grid);
      e.real("residual", rep.residual);
      j.raw("extrapolation", e.str());
    }
    j.real("k_eff", k_eff);
    j.real("rel_err", rel_err);
    j.real("tolerance", a.tolerance);
    j.integer("iterations", last.iterations);
    j.real("residual", last.residual_norm);
    j.real("dipole", last.dipole_amplitude);
    j.flag("passed", passed);
    out << j.str() << "\n";
  } else {
    out << "kind: " << kind << "\n"
        << "bound: " << num(bound) << "\n";
    for (const auto& r : runs)
      out << "run n_spikes=" << static_cast<long>(r.n_spikes) << ": k_num " << num(r.k_num)
          << "\n";
    if (a.series) out << "extrapolated k_inf: " << num(rep.k_inf) << "\n";
    out << "k_eff: " << num(k_eff) << "\n"
        << "rel_err: " << num(rel_err) << "\n"
        << "tolerance: " << num(a.tolerance) << "\n"
        << "verification: " << (passed ? "PASSED" : "FAILED") << "\n";
  }
  return passed ? 0 : 3;
}

struct SweepArgs {
  double k1 = 1.0, k2 = 2.0, m2 = 0.0;
  double start = 0.0, stop = 0.0, step = 0.0;
  bool with_radial = false, with_fd = false;
  int fd_nodes = 2000;
  double fd_contrast = 1e6;
  std::string output;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.step > 0.0) || !(a.start <= a.stop) || a.start < 0.0)
    throw ValidationError("sweep range must satisfy 0 <= start <= stop with step > 0");
  const auto c = make_conductors(a.k1, a.k2);
  const long n = std::lround(std::floor((a.stop - a.start) / a.step + 1e-9)) + 1;

  std::ostringstream csv;
  csv << "m1,m2,regime,B,t_opt";
  if (a.with_radial) csv << ",k_radial";
  if (a.with_fd) csv << ",k_fd";
  csv << "\n";

  bool monotone = true;
  double prev = 0.0, max_step = 0.0;
  Regime prev_regime{};
  std::vector<double> transitions;
  for (long i = 0; i < n; ++i) {
    const double m1 = a.start + static_cast<double>(i) * a.step;
    const auto f = make_fractions(m1, a.m2);
    const auto b = lower_bound(c, f);
    csv << num(m1) << ',' << num(a.m2) << ',' << to_string(b.regime) << ',' << num(b.value)
        << ',' << num(b.t_opt);
    if (a.with_radial || a.with_fd) {
      const auto prof = radial_profile(build_wheel(c, f));
      if (a.with_radial) csv << ',' << num(effective_conductivity(prof));
      if (a.with_fd) csv << ',' << num(fd_effective_conductivity(prof, a.fd_contrast, a.fd_nodes));
    }
    csv << "\n";
    if (i > 0) {
      if (b.value > prev * (1.0 + 1e-12)) monotone = false;
      max_step = std::max(max_step, std::abs(b.value - prev));
      if (b.regime != prev_regime) transitions.push_back(m1);
    }
    prev = b.value;
    prev_regime = b.regime;
  }

  if (!a.output.empty()) {
    std::ofstream file(a.output);
    if (!file) throw ValidationError("cannot open output file: " + a.output);
    file << csv.str();
  } else {
    out << csv.str();
  }

  err << "post-check: B " << (monotone ? "monotone non-increasing" : "NOT monotone")
      << ", max row-to-row change " << num(max_step) << "\n";
  if (!transitions.empty()) {
    err << "post-check: regime changes at m1 =";
    for (double t : transitions) err << " " << num(t);
    err << "\n";
  }
  if (!monotone) throw InternalError("bound failed the monotonicity post-check");
  return 0;
}

struct OracleArgs {
  double k1 = 0.0, k2 = 0.0, m1 = 0.0, m2 = 0.0;
  bool json = false;
};

int cmd_oracle(const OracleArgs& a, std::ostream& out) {
  const auto c = make_conductors(a.k1, a.k2);
  const auto f = make_fractions(a.m1, a.m2);
  const auto r = maximize_over_t(c, f);
  const double closed = lower_bound(c, f).value;
  const double agreement = std::abs(r.bound_value / closed - 1.0);
  if (a.json) {
    Json j;
    j.real("k1", c.k1).real("k2", c.k2).real("m1", f.m1).real("m2", f.m2);
    j.real("t_opt", r.t_opt);
    j.real("value", r.bound_value);
    j.real("closed_form", closed);
    j.real("agreement", agreement);
    j.raw("s", "[" + num(r.minimizer.s[0]) + ", " + num(r.minimizer.s[1]) + "]");
    j.raw("d", "[" + num(r.minimizer.d[0]) + ", " + num(r.minimizer.d[1]) + "]");
    j.raw("enveloped", std::string("[") + (r.enveloped[0] ? "true" : "false") + ", " +
                           (r.enveloped[1] ? "true" : "false") + "]");
    out << j.str() << "\n";
  } else {
    out << "t_opt: " << num(r.t_opt) << "\n"
        << "bound: " << num(r.bound_value) << "\n"
        << "closed form: " << num(closed) << "\n"
        << "agreement: " << num(agreement) << "\n";
    for (int i = 0; i < 2; ++i)
      out << "phase " << i + 1 << ": s " << num(r.minimizer.s[i]) << ", d "
          << num(r.minimizer.d[i]) << ", enveloped " << (r.enveloped[i] ? "yes" : "no") << "\n";
  }
  return 0;
}

struct ElasticArgs {
  double kappa1 = 0.0, eta1 = 0.0, kappa2 = 0.0, eta2 = 0.0, m1 = 0.0, m2 = 0.0;
  bool dual = false, json = false;
};

int cmd_elastic(const ElasticArgs& a, std::ostream& out) {
  const auto s = make_elastic_set(a.kappa1, a.eta1, a.kappa2, a.eta2);
  const auto f = make_fractions(a.m1, a.m2);
  const auto b = a.dual ? dual_rigid_bound(s, f) : bulk_bound(s, f);
  const auto fs = elastic_field_spec(s, f);
  if (a.json) {
    Json j;
    j.text("problem", a.dual ? "stiffness" : "compliance");
    j.real("kappa1", s.kappa1).real("eta1", s.eta1);
    j.real("kappa2", s.kappa2).real("eta2", s.eta2);
    j.real("m1", f.m1).real("m2", f.m2);
    j.real("value", b.value);
    j.text("regime", to_string(b.regime));
    j.real("t_opt", b.t_opt);
    j.real("m11", b.thresholds.m11).real("m12", b.thresholds.m12);
    j.flag("from_maximizer", b.from_maximizer);
    std::string fjs = "[";
    for (int i = 0; i < 3; ++i) {
      Json fj;
      fj.integer("phase", fs[i].phase);
      fj.text("det", det_name(fs[i].det_condition));
      fj.flag("hydrostatic", fs[i].hydrostatic);
      fj.flag("stress_free", fs[i].stress_free);
      if (i) fjs += ", ";
      fjs += fj.str();
    }
    j.raw("fields", fjs + "]");
    out << j.str() << "\n";
  } else {
    out << "problem: " << (a.dual ? "stiffness" : "compliance") << "\n"
        << "value: " << num(b.value) << "\n"
        << "regime: " << to_string(b.regime) << "\n"
        << "t_opt: " << num(b.t_opt) << "\n"
        << "m11: " << num(b.thresholds.m11) << "\n"
        << "m12: " << num(b.thresholds.m12) << "\n"
        << "from_maximizer: " << (b.from_maximizer ? "yes" : "no") << "\n";
    for (const auto& fspec : fs) {
      out << "  phase " << fspec.phase << ": ";
      if (fspec.stress_free)
        out << "zero stress";
      else if (fspec.hydrostatic)
        out << "hydrostatic";
      else
        out << "det " << det_name(fspec.det_condition);
      out << "\n";
    }
  }
  return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"bounds on the conductivity of composites of two conductors plus an ideal\n"
               "phase, the wheel assemblages attaining them, and numerical verification"};
  app.name("wheelbound");
  app.require_subcommand(1);

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds", "evaluate the lower bound at one point");
  auto* bk1 = bounds->add_option("--k1", ba.k1, "weaker conductivity");
  auto* bk2 = bounds->add_option("--k2", ba.k2, "stronger conductivity");
  auto* br1 = bounds->add_option("--rho1", ba.rho1, "smaller resistivity (dual problem)");
  auto* br2 = bounds->add_option("--rho2", ba.rho2, "larger resistivity (dual problem)");
  bounds->add_option("--m1", ba.m1, "fraction of material 1")->required();
  bounds->add_option("--m2", ba.m2, "fraction of material 2")->required();
  bounds->add_flag("--json", ba.json, "emit a JSON report");
  bk1->needs(bk2);
  bk2->needs(bk1);
  br1->needs(br2);
  br2->needs(br1);
  bk1->excludes(br1);

  WheelArgs wa;
  auto* wheel = app.add_subcommand("wheel", "construct the optimal wheel assemblage");
  wheel->add_option("--k1", wa.k1, "weaker conductivity")->required();
  wheel->add_option("--k2", wa.k2, "stronger conductivity")->required();
  wheel->add_option("--m1", wa.m1, "fraction of material 1")->required();
  wheel->add_option("--m2", wa.m2, "fraction of material 2")->required();
  wheel->add_option("--pgm", wa.pgm, "write the rasterized phase map to this PGM file");
  wheel->add_option("--n-spikes", wa.n_spikes, "spike count for rasterization");
  wheel->add_option("--nr", wa.nr, "radial cells for rasterization");
  wheel->add_option("--ntheta", wa.ntheta, "angular cells for rasterization");
  wheel->add_option("--contrast", wa.contrast, "finite stand-in for the ideal phase");
  wheel->add_flag("--json", wa.json, "emit a JSON report");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "measure the wheel numerically against the bound");
  verify->add_option("--k1", va.k1, "weaker conductivity");
  verify->add_option("--k2", va.k2, "stronger conductivity");
  verify->add_option("--m1", va.m1, "fraction of material 1");
  verify->add_option("--m2", va.m2, "fraction of material 2");
  verify->add_option("--nr", va.nr, "radial cells of the map");
  verify->add_option("--ntheta", va.ntheta, "angular cells of the map");
  verify->add_option("--n-spikes", va.n_spikes, "spike count");
  verify->add_option("--contrast", va.contrast, "finite stand-in for the ideal phase");
  verify->add_option("--r-out", va.r_out, "embedding radius");
  verify->add_option("--tolerance", va.tolerance, "maximal accepted relative error");
  verify->add_option("--rel-tol", va.rel_tol, "relative tolerance of the secant iteration");
  verify->add_flag("--series", va.series, "measure at n/4, n/2, n spikes and extrapolate");
  verify->add_flag("--sanity", va.sanity, "replace the wheel by a homogeneous disk of material 1");
  verify->add_flag("--json", va.json, "emit a JSON report");

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "tabulate the bound along an m1 range as CSV");
  sweep->add_option("--k1", sa.k1, "weaker conductivity");
  sweep->add_option("--k2", sa.k2, "stronger conductivity");
  sweep->add_option("--m2", sa.m2, "fixed fraction of material 2")->required();
  sweep->add_option("--m1-start", sa.start, "first m1 value")->required();
  sweep->add_option("--m1-stop", sa.stop, "last m1 value")->required();
  sweep->add_option("--m1-step", sa.step, "m1 increment")->required();
  sweep->add_flag("--with-radial", sa.with_radial, "add the semi-analytic wheel conductivity");
  sweep->add_flag("--with-fd", sa.with_fd, "add the finite-difference wheel conductivity");
  sweep->add_option("--fd-nodes", sa.fd_nodes, "finite-difference grid size");
  sweep->add_option("--fd-contrast", sa.fd_contrast, "finite-difference ideal-phase stand-in");
  sweep->add_option("--output", sa.output, "write the CSV here instead of stdout");

  OracleArgs oa;
  auto* oracle = app.add_subcommand("oracle", "maximize the translated energy bound over t");
  oracle->add_option("--k1", oa.k1, "weaker conductivity")->required();
  oracle->add_option("--k2", oa.k2, "stronger conductivity")->required();
  oracle->add_option("--m1", oa.m1, "fraction of material 1")->required();
  oracle->add_option("--m2", oa.m2, "fraction of material 2")->required();
  oracle->add_flag("--json", oa.json, "emit a JSON report");

  ElasticArgs ea;
  auto* elastic = app.add_subcommand("elastic", "evaluate the plane bulk-modulus bound");
  elastic->add_option("--kappa1", ea.kappa1, "reciprocal bulk parameter of material 1")->required();
  elastic->add_option("--eta1", ea.eta1, "reciprocal shear parameter of material 1")->required();
  elastic->add_option("--kappa2", ea.kappa2, "reciprocal bulk parameter of material 2")->required();
  elastic->add_option("--eta2", ea.eta2, "reciprocal shear parameter of material 2")->required();
  elastic->add_option("--m1", ea.m1, "fraction of material 1")->required();
  elastic->add_option("--m2", ea.m2, "fraction of material 2")->required();
  elastic->add_flag("--dual", ea.dual, "rigid-inclusion dual: moduli read as stiffnesses");
  elastic->add_flag("--json", ea.json, "emit a JSON report");

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  ba.have_k = bk1->count() > 0;
  ba.have_rho = br1->count() > 0;

  try {
    if (bounds->parsed()) return cmd_bounds(ba, out);
    if (wheel->parsed()) return cmd_wheel(wa, out);
    if (verify->parsed()) return cmd_verify(va, out);
    if (sweep->parsed()) return cmd_sweep(sa, out, err);
    if (oracle->parsed()) return cmd_oracle(oa, out);
    if (elastic->parsed()) return cmd_elastic(ea, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == Error::Kind::validation ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

} // namespace wheelbounds
