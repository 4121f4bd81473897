#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <sstream>

#include <json.hpp>

#include "speclab/bmo.hpp"
#include "speclab/experiment.hpp"
#include "speclab/multiplier.hpp"
#include "speclab/propagation.hpp"
#include "speclab/semigroups.hpp"

namespace speclab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
  char b[64];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

struct SuiteOutput {
  std::vector<SummaryRow> rows;
  std::vector<std::pair<std::string, std::string>> files;
};

struct Context {
  ExperimentConfig cfg;
  Mesh mesh;
  DiscreteOperator op;
  EigenSystem es;
  std::vector<Symbol> syms;
  std::vector<SymbolTables> tabs;
  CutoffSpec cut;

  double diameter() const { return es.geom->diameter; }
  double h() const { return es.geom->h; }
};

Field make_potential(const Mesh& mesh, const std::string& desc) {
  if (desc == "none" || desc.empty()) return {};
  Field H(mesh.size(), 0.0);
  const auto colon = desc.find(':');
  const std::string kind = desc.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) {
    std::stringstream ss(desc.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) args.push_back(std::stod(item));
  }
  if (kind == "const" && args.size() == 1) {
    for (auto& v : H) v = args[0];
  } else if (kind == "step" && args.size() == 3) {
    for (int p = 0; p < mesh.size(); ++p)
      H[p] = (mesh.points[p][0] > args[1] && mesh.points[p][0] < args[2]) ? args[0] : 0.0;
  } else if (kind == "sine" && args.size() == 2) {
    for (int p = 0; p < mesh.size(); ++p)
      H[p] = args[0] * (1.0 + std::sin(args[1] * mesh.points[p][0]));
  } else {
    throw config_error("potential '" + desc + "' not understood");
  }
  for (double v : H)
    if (v < 0.0) throw config_error("potential must be nonnegative");
  return H;
}

Context build_context(const ExperimentConfig& cfg) {
  Context ctx;
  ctx.cfg = cfg;
  ctx.mesh = build_mesh(cfg.dim, {cfg.length_x, cfg.length_y}, cfg.n);
  OperatorSpec spec;
  spec.bc = cfg.bc;
  spec.a_const = cfg.a_const;
  spec.H = make_potential(ctx.mesh, cfg.potential);
  auto op = assemble_operator(ctx.mesh, spec);
  ctx.op = cfg.scale != 1.0 ? rescale_operator(op, cfg.scale) : op;
  ctx.es = eigendecompose(ctx.op);
  const auto all = builtin_symbols();
  for (const auto& name : cfg.symbols) {
    ctx.syms.push_back(find_symbol(all, name));
    auto tab = fourier_transform(ctx.syms.back(), 8.0, 2000, 4096);
    split(tab, ctx.cut);
    psi_ladder(tab, 3);
    ctx.tabs.push_back(std::move(tab));
  }
  return ctx;
}

int central_dof(const Geometry& g) {
  int best = 0;
  double ecc = 1e300;
  for (int i = 0; i < g.n(); ++i) {
    double e = 0.0;
    for (int j = 0; j < g.n(); ++j) e = std::max(e, g.dist(i, j));
    if (e < ecc) {
      ecc = e;
      best = i;
    }
  }
  return best;
}

int nearest_dof(const Geometry& g, double x, double y) {
  int best = 0;
  double d2 = 1e300;
  for (int i = 0; i < g.n(); ++i) {
    const double dx = g.x[i][0] - x, dy = g.x[i][1] - y;
    if (dx * dx + dy * dy < d2) {
      d2 = dx * dx + dy * dy;
      best = i;
    }
  }
  return best;
}

SummaryRow row(const std::string& suite, const std::string& check, const std::string& crit,
               const std::string& anchor, double value, double target, double tol, bool pass) {
  return SummaryRow{suite, check, crit, anchor, value, target, tol, pass};
}

// ---------------------------------------------------------------------------

SuiteOutput suite_eig(const Context& ctx) {
  SuiteOutput out;
  const auto& es = ctx.es;
  const auto& g = *es.geom;
  const int n = es.n();

  std::string csv = "k,mu\n";
  for (int k = 0; k < n; ++k) csv += std::to_string(k) + "," + fmt(es.mu[k]) + "\n";
  out.files.emplace_back("eig.csv", csv);

  std::string mcsv = "index,x,y,weight,boundary\n";
  for (int p = 0; p < ctx.mesh.size(); ++p)
    mcsv += std::to_string(p) + "," + fmt(ctx.mesh.points[p][0]) + "," +
            fmt(ctx.mesh.points[p][1]) + "," + fmt(ctx.mesh.weights[p]) + "," +
            (ctx.mesh.boundary_mask[p] ? "1" : "0") + "\n";
  out.files.emplace_back("mesh.csv", mcsv);

  std::string ocsv = "i,j,value\n";  // nonzero triplets of L on the dof set
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (ctx.op.matrix(i, j) != 0.0)
        ocsv += std::to_string(i) + "," + std::to_string(j) + "," + fmt(ctx.op.matrix(i, j)) +
                "\n";
  out.files.emplace_back("operator.csv", ocsv);

  if (ctx.cfg.dump_kernels) {
    std::string vec;
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) vec += (k ? " " : "") + fmt(es.vecs(i, k));
      vec += "\n";
    }
    out.files.emplace_back("eigvecs.txt", vec);
  }

  // Weighted orthonormality on a deterministic pair subsample.
  double ortho = 0.0;
  const int stride = std::max(1, n / 64);
  for (int a = 0; a < n; a += stride)
    for (int b = a; b < n; b += stride) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += g.w[i] * es.vecs(i, a) * es.vecs(i, b);
      ortho = std::max(ortho, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  out.rows.push_back(row("eig", "orthonormality", "AC1", "spectral oracle", ortho, 0.0,
                         ctx.cfg.ortho_tol, ortho <= ctx.cfg.ortho_tol));
  out.rows.push_back(row("eig", "nonnegative", "AC1", "spectral oracle", es.mu.front(), 0.0,
                         1e-9, es.mu.front() >= -1e-9));

  const bool reference = ctx.cfg.dim == 1 && ctx.cfg.bc == BoundaryCondition::Dirichlet &&
                         ctx.cfg.a_const == 1.0 && ctx.cfg.potential == "none" &&
                         ctx.cfg.scale == 1.0;
  if (reference) {
    const double len = ctx.cfg.length_x;
    double worst = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double s = std::sin(0.5 * k * kPi * g.h / len);
      const double exact = 4.0 / (g.h * g.h) * s * s;
      worst = std::max(worst, std::abs(es.mu[k - 1] - exact) / exact);
    }
    out.rows.push_back(row("eig", "stencil-spectrum", "AC1", "spectral oracle", worst, 0.0,
                           ctx.cfg.eig_rel_tol, worst <= ctx.cfg.eig_rel_tol));
  }

  // Metric rescaling divides the spectrum by r^2.
  auto es2 = eigendecompose(rescale_operator(ctx.op, 2.0));
  double scaling = 0.0;
  for (int k = 0; k < n; ++k)
    scaling = std::max(scaling, std::abs(es2.mu[k] - 0.25 * es.mu[k]) /
                                    std::max(1.0, 0.25 * std::abs(es.mu[k])));
  out.rows.push_back(row("eig", "scaling-law", "AC2", "metric scaling", scaling, 0.0,
                         ctx.cfg.scaling_tol, scaling <= ctx.cfg.scaling_tol));
  return out;
}

SuiteOutput suite_heat_fit(const Context& ctx) {
  SuiteOutput out;
  const auto& es = ctx.es;
  const Geometry& g = *es.geom;
  const int dim = g.dim;
  const double D = g.diameter;
  const double unit = ctx.cfg.dim == 1 ? (D / kPi) * (D / kPi) : (D * D / 2.0) / (kPi * kPi);

  const double lo = std::max(4.0 * g.h * g.h, 2e-3 * unit);
  const double hi = 0.05 * unit;
  if (!(hi > lo))
    throw numeric_error("heat-fit: no admissible time window at this resolution");
  const auto t_grid = geometric_grid(lo, hi, 6);

  auto fit = fit_gaussian_bound(es, t_grid, false);
  auto gfit = fit_gaussian_bound(es, t_grid, true);

  std::string csv = "quantity,value\n";
  csv += "kappa_hat," + fmt(fit.kappa_hat) + "\n";
  csv += "r2," + fmt(fit.r2) + "\n";
  csv += "prefactor_exponent," + fmt(fit.prefactor_exponent) + "\n";
  csv += "samples," + std::to_string(fit.samples) + "\n";
  csv += "grad_kappa_hat," + fmt(gfit.kappa_hat) + "\n";
  csv += "grad_r2," + fmt(gfit.r2) + "\n";
  csv += "grad_prefactor_exponent," + fmt(gfit.prefactor_exponent) + "\n";
  csv += "window_lo," + fmt(lo) + "\n";
  csv += "window_hi," + fmt(hi) + "\n";
  csv += "d_min," + fmt(fit.d_min) + "\n";
  out.files.emplace_back("heatfit.csv", csv);

  const char* anchor = "Gaussian heat kernel bounds";
  out.rows.push_back(row("heat-fit", "kappa-positive", "AC5", anchor, fit.kappa_hat,
                         ctx.cfg.kappa_lo, 0.0, fit.kappa_hat > ctx.cfg.kappa_lo));
  out.rows.push_back(
      row("heat-fit", "r2", "AC5", anchor, fit.r2, 1.0, 1.0 - ctx.cfg.r2_min,
          fit.r2 >= ctx.cfg.r2_min));
  out.rows.push_back(row("heat-fit", "prefactor", "AC5", anchor, fit.prefactor_exponent,
                         -0.5 * dim, ctx.cfg.prefactor_tol,
                         std::abs(fit.prefactor_exponent + 0.5 * dim) <= ctx.cfg.prefactor_tol));
  out.rows.push_back(row("heat-fit", "grad-kappa-positive", "AC5", anchor, gfit.kappa_hat, 0.0,
                         0.0, gfit.kappa_hat > 0.0));
  out.rows.push_back(
      row("heat-fit", "grad-prefactor", "AC5", anchor, gfit.prefactor_exponent,
          -0.5 * dim - 0.5, ctx.cfg.prefactor_grad_tol,
          std::abs(gfit.prefactor_exponent + 0.5 * dim + 0.5) <= ctx.cfg.prefactor_grad_tol));

  // Subordination: direct vs integral-representation Poisson operator.
  const double ts = 0.4 * std::sqrt(unit);
  auto direct = poisson_direct(es, ts);
  auto sub = poisson_subordinated(es, ts);
  double diff = 0.0, scale = 0.0;
  for (int i = 0; i < direct.n(); ++i)
    for (int j = 0; j < direct.n(); ++j) {
      diff = std::max(diff, std::abs(direct.K(i, j) - sub.K(i, j)));
      scale = std::max(scale, std::abs(direct.K(i, j)));
    }
  const double rel = diff / scale;
  out.rows.push_back(row("heat-fit", "subordination", "AC7", "subordination identity", rel, 0.0,
                         ctx.cfg.subordination_tol, rel <= ctx.cfg.subordination_tol));
  return out;
}

SuiteOutput suite_norm_fits(const Context& ctx) {
  SuiteOutput out;
  const auto& es = ctx.es;
  const Geometry& g = *es.geom;
  const int dim = g.dim;
  const double h = g.h;
  const double D = g.diameter;
  const double unit2 = ctx.cfg.dim == 1 ? (D / kPi) * (D / kPi) : (D * D / 2.0) / (kPi * kPi);
  const double unit1 = std::sqrt(unit2);

  const double heat_lo = std::max(4.0 * h * h, 1e-3 * unit2);
  const double heat_hi = 0.05 * unit2;
  const double pois_lo = 4.0 * h;
  const double pois_hi = 0.45 * unit1 * kPi / 2.0;
  const double bk_hi = std::min(1.0, pois_hi);

  struct Fam {
    const char* kind;
    double lo, hi;
  };
  const Fam fams[] = {
      {"heat-2inf", heat_lo, heat_hi},     {"heat-2lip", heat_lo, heat_hi},
      {"poisson-2inf", pois_lo, pois_hi},  {"poisson-2lip", pois_lo, pois_hi},
      {"resolvent-2inf", pois_lo, pois_hi}, {"L-poisson-2inf", pois_lo, pois_hi},
      {"bk-2inf", pois_lo, bk_hi},         {"L-bk-2inf", pois_lo, bk_hi},
      {"grad-heat-sq", heat_lo, heat_hi},
  };

  std::string csv = "family,norm,s,value\n";
  nlohmann::ordered_json summary = nlohmann::ordered_json::array();
  for (const auto& f : fams) {
    if (!(f.hi > f.lo))
      throw numeric_error(std::string("norm-fits: empty window for ") + f.kind);
    auto fit = fit_norm_exponent(norm_family(es, f.kind, 3), geometric_grid(f.lo, f.hi, 7),
                                 f.kind, "auto", norm_family_target(f.kind, dim));
    for (size_t i = 0; i < fit.s.size(); ++i)
      csv += fit.family + ",auto," + fmt(fit.s[i]) + "," + fmt(fit.value[i]) + "\n";
    summary.push_back({{"family", f.kind},
                       {"slope", fit.slope},
                       {"target", fit.target},
                       {"residual", fit.residual},
                       {"window", {f.lo, f.hi}}});
    out.rows.push_back(row("norm-fits", f.kind, "AC6", "semigroup norm scaling", fit.slope,
                           fit.target, ctx.cfg.slope_tol,
                           std::abs(fit.slope - fit.target) <= ctx.cfg.slope_tol));
  }
  out.files.emplace_back("normfits.csv", csv);
  out.files.emplace_back("normfits_summary.json", summary.dump(2) + "\n");
  return out;
}

SuiteOutput suite_wave(const Context& ctx) {
  SuiteOutput out;
  const auto& op = ctx.op;
  const Geometry& g = *op.geom;
  const double h = g.h;
  Field f = bump_field(g, central_dof(g), 0.25 * g.diameter);
  const double t = 0.15 * g.diameter / op.speed();

  double errs[3];
  int idx = 0;
  for (int div : {2, 4, 8}) {
    const double dt_target = h / (div * op.speed());
    const long steps = std::lround(std::ceil(t / dt_target));
    const double dt = t / steps;
    auto s = cosine_leapfrog(op, t, f, dt);
    const Field ref = cosine_spectral(ctx.es, t, f);
    double e = 0.0;
    for (int i = 0; i < g.n(); ++i) e += g.w[i] * (s.u[i] - ref[i]) * (s.u[i] - ref[i]);
    errs[idx++] = std::sqrt(e);
  }
  const double order = 0.5 * (std::log2(errs[0] / errs[1]) + std::log2(errs[1] / errs[2]));
  out.rows.push_back(row("wave", "time-order", "AC3", "wave propagator agreement", order, 2.0,
                         ctx.cfg.wave_order_tol, std::abs(order - 2.0) <= ctx.cfg.wave_order_tol));

  std::string csv = "dt_divisor,l2_error\n";
  idx = 0;
  for (int div : {2, 4, 8}) csv += std::to_string(div) + "," + fmt(errs[idx++]) + "\n";
  out.files.emplace_back("wave.csv", csv);

  const double dt = 0.9 * h / op.speed();
  auto sA = cosine_leapfrog(op, 10 * dt, f, dt);
  const long m = std::lround(std::floor(t / dt));
  auto sB = cosine_leapfrog(op, m * dt, f, dt);
  const double drift = std::abs(wave_energy(op, sB) / wave_energy(op, sA) - 1.0);
  out.rows.push_back(row("wave", "energy-drift", "AC3", "wave propagator agreement", drift, 0.0,
                         ctx.cfg.energy_tol, drift <= ctx.cfg.energy_tol));
  return out;
}

SuiteOutput suite_dg(const Context& ctx) {
  SuiteOutput out;
  const auto& es = ctx.es;
  const Geometry& g = *es.geom;
  const double D = g.diameter;
  const int cu = nearest_dof(g, 0.33 * (ctx.cfg.length_x * ctx.cfg.scale),
                             0.5 * (ctx.cfg.dim == 2 ? ctx.cfg.length_y * ctx.cfg.scale : 0.0));
  const int cv = nearest_dof(g, 0.67 * (ctx.cfg.length_x * ctx.cfg.scale),
                             0.5 * (ctx.cfg.dim == 2 ? ctx.cfg.length_y * ctx.cfg.scale : 0.0));
  const double unit2 = (D / kPi) * (D / kPi) * (ctx.cfg.dim == 1 ? 1.0 : 0.5);
  auto t_grid = geometric_grid(std::max(0.01 * unit2, 1.5 * g.h * g.h), 0.1 * unit2, 6);
  auto rep = davies_gaffney_check(es, cu, cv, 0.08 * D, t_grid, ctx.cfg.dg_slack);

  std::string csv = "t,r,lhs,rhs,ratio,pass\n";
  double worst = 0.0;
  for (const auto& e : rep.entries) {
    csv += fmt(e.t) + "," + fmt(e.r) + "," + fmt(e.lhs) + "," + fmt(e.rhs) + "," + fmt(e.ratio) +
           "," + (e.ratio <= rep.slack ? "1" : "0") + "\n";
    worst = std::max(worst, e.ratio);
  }
  out.files.emplace_back("dg.csv", csv);
  out.rows.push_back(row("dg", "davies-gaffney", "AC4", "Davies-Gaffney", worst, 1.0,
                         ctx.cfg.dg_slack - 1.0, rep.pass));

  // Weighted-energy growth bound along the heat flow.
  const int cc = central_dof(g);
  Field u = bump_field(g, cc, 0.1 * D);
  auto grep = gronwall_check(es, u, cc, 0.1 * D, 0.25 * D, 0.125 * D * D / kPi, 8);
  double wratio = 0.0;
  for (const auto& e : grep.entries) wratio = std::max(wratio, e.energy / e.bound);
  out.rows.push_back(row("dg", "gronwall-energy", "AC4", "Davies-Gaffney", wratio, 1.0,
                         ctx.cfg.gronwall_slack, grep.pass));
  return out;
}

SuiteOutput suite_cone(const Context& ctx) {
  SuiteOutput out;
  const auto& op = ctx.op;
  const Geometry& g = *op.geom;
  const double h = g.h;
  const double speed = op.speed();
  Field f = bump_field(g, central_dof(g), 6.0 * h);

  const double t = 12.0 * h / speed;
  const long steps = std::lround(std::ceil(t / (0.9 * h / speed)));
  const double dt = t / steps;

  auto lf = lightcone_check(op, f, t, dt, 2.0 * h, ctx.cfg.cone_leapfrog_tol);
  auto sp = lightcone_check_spectral(ctx.es, speed, f, t, 5.0 * h, ctx.cfg.cone_spectral_tol);

  std::string csv = "method,t,margin,outside_mass,pass\n";
  csv += "leapfrog," + fmt(lf.t) + "," + fmt(lf.margin) + "," + fmt(lf.outside_mass) + "," +
         (lf.pass ? "1" : "0") + "\n";
  csv += "spectral," + fmt(sp.t) + "," + fmt(sp.margin) + "," + fmt(sp.outside_mass) + "," +
         (sp.pass ? "1" : "0") + "\n";
  out.files.emplace_back("cone.csv", csv);

  out.rows.push_back(row("cone", "leapfrog-cone", "AC4", "finite propagation speed",
                         lf.outside_mass, 0.0, ctx.cfg.cone_leapfrog_tol, lf.pass));
  out.rows.push_back(row("cone", "spectral-cone", "AC4", "finite propagation speed",
                         sp.outside_mass, 0.0, ctx.cfg.cone_spectral_tol, sp.pass));
  return out;
}

SuiteOutput suite_commutator(const Context& ctx) {
  SuiteOutput out;
  const Geometry& g = *ctx.op.geom;
  const double D = g.diameter;
  const int c = nearest_dof(g, 0.25 * ctx.cfg.length_x * ctx.cfg.scale,
                            0.25 * (ctx.cfg.dim == 2 ? ctx.cfg.length_y * ctx.cfg.scale : 0.0));
  const double r = 0.25 * D, t = 0.125 * D;
  auto rep = commutator_condition_check(ctx.op, c, 0.1 * D, r, t, ctx.op.speed());
  out.rows.push_back(row("commutator", "lipschitz-multiplier", "AC4", "commutator criterion",
                         rep.ratio, rep.speed, rep.bound - rep.speed, rep.pass));
  std::string csv = "ratio,bound,speed,pass\n";
  csv += fmt(rep.ratio) + "," + fmt(rep.bound) + "," + fmt(rep.speed) + "," +
         (rep.pass ? "1" : "0") + "\n";
  out.files.emplace_back("commutator.csv", csv);
  return out;
}

SuiteOutput suite_resolvent(const Context& ctx) {
  SuiteOutput out;
  OperatorSpec base;
  base.bc = ctx.cfg.bc;
  base.a_const = ctx.cfg.a_const;
  const Mesh& mesh = ctx.mesh;
  const double Lx = ctx.cfg.length_x;

  Field H(mesh.size());
  for (int p = 0; p < mesh.size(); ++p)
    H[p] = (mesh.points[p][0] > Lx / 3.0 && mesh.points[p][0] < 2.0 * Lx / 3.0) ? 5.0 : 0.0;
  std::vector<Field> seq;
  for (int n = 1; n <= 6; ++n) {
    const double w = 0.15 * Lx / (1 << n);
    Field Hn(mesh.size());
    auto ramp = [](double s) { return s <= 0 ? 0.0 : (s >= 1 ? 1.0 : s * s * (3 - 2 * s)); };
    for (int p = 0; p < mesh.size(); ++p) {
      const double x = mesh.points[p][0];
      Hn[p] = 5.0 * ramp((x - Lx / 3.0) / w) * ramp((2.0 * Lx / 3.0 - x) / w);
    }
    seq.push_back(std::move(Hn));
  }
  OperatorSpec probe_spec = base;
  auto probe = assemble_operator(mesh, probe_spec);
  Field f(probe.n());
  for (int i = 0; i < probe.n(); ++i)
    f[i] = std::exp(-2.0 * probe.geom->x[i][0] / Lx) ;

  auto rep = resolvent_limit_check(mesh, base, H, seq, 0.25 * (Lx / kPi) * (Lx / kPi), f);
  std::string csv = "n,h_err,heat_err,cos_err\n";
  for (size_t i = 0; i < rep.heat_err.size(); ++i)
    csv += std::to_string(i + 1) + "," + fmt(rep.h_err[i]) + "," + fmt(rep.heat_err[i]) + "," +
           fmt(rep.cos_err[i]) + "\n";
  out.files.emplace_back("resolvent.csv", csv);

  const double decay_heat =
      rep.heat_err.front() > 0 ? rep.heat_err.back() / rep.heat_err.front() : 0.0;
  const double decay_cos =
      rep.cos_err.front() > 0 ? rep.cos_err.back() / rep.cos_err.front() : 0.0;
  out.rows.push_back(row("resolvent-limit", "heat-decay", "AC15", "strong resolvent limit",
                         decay_heat, 0.0, ctx.cfg.resolvent_decay,
                         decay_heat <= ctx.cfg.resolvent_decay));
  out.rows.push_back(row("resolvent-limit", "cosine-decay", "AC15", "strong resolvent limit",
                         decay_cos, 0.0, ctx.cfg.resolvent_decay,
                         decay_cos <= ctx.cfg.resolvent_decay && rep.pass));
  return out;
}

SuiteOutput suite_multiplier(const Context& ctx) {
  SuiteOutput out;
  const auto& es = ctx.es;
  const char* anchor = "multiplier split and transference";

  std::string csv = "symbol,check,value\n";
  for (size_t s = 0; s < ctx.syms.size(); ++s) {
    const Symbol& sym = ctx.syms[s];
    const SymbolTables& tab = ctx.tabs[s];

    auto wave = build_sharp_wave_diag(es, tab, ctx.cfg.quad_steps);
    double route_worst = 0.0, kdep_worst = 0.0;
    std::vector<SpectralFunction> per_k;
    for (int k = 1; k <= 3; ++k) {
      per_k.push_back(build_sharp_bessel_diag(es, tab, k));
      double d = 0.0;
      for (int q = 0; q < es.n(); ++q)
        d = std::max(d, std::abs(per_k.back().diag[q] - wave.diag[q]));
      route_worst = std::max(route_worst, d);
    }
    for (int k = 0; k < 2; ++k) {
      double d = 0.0;
      for (int q = 0; q < es.n(); ++q)
        d = std::max(d, std::abs(per_k[k].diag[q] - per_k[k + 1].diag[q]));
      kdep_worst = std::max(kdep_worst, d);
    }
    out.rows.push_back(row("multiplier", sym.name + ":routes", "AC8", anchor, route_worst, 0.0,
                           ctx.cfg.route_tol, route_worst <= ctx.cfg.route_tol));
    out.rows.push_back(row("multiplier", sym.name + ":k-independence", "AC8", anchor, kdep_worst,
                           0.0, ctx.cfg.route_tol, kdep_worst <= ctx.cfg.route_tol));

    // Transference consistency of the normalized Bessel evaluations.
    double bessel_worst = 0.0;
    for (int k = 1; k <= 3; ++k)
      for (double lam : {0.3, 2.0, 11.0, 29.0})
        bessel_worst = std::max(bessel_worst,
                                std::abs(bessel_J(k, lam) - bessel_J_moment(k, lam, 20000)));
    out.rows.push_back(row("multiplier", sym.name + ":bessel-oracle", "AC8", anchor,
                           bessel_worst, 0.0, 1e-8, bessel_worst <= 1e-8));

    auto flat = build_flat_diag(es, tab);
    double recon = 0.0;
    for (int q = 0; q < es.n(); ++q) {
      const double lam = std::sqrt(std::max(0.0, es.mu[q]));
      recon = std::max(recon, std::abs(wave.diag[q] + flat.diag[q] - sym.phi(lam)));
    }
    out.rows.push_back(row("multiplier", sym.name + ":reconstruction", "AC10", anchor, recon,
                           0.0, ctx.cfg.recon_tol, recon <= ctx.cfg.recon_tol));

    bool flat_ok = true;
    try {
      (void)build_flat(es, tab);  // gates the factorized path internally
    } catch (const numeric_error&) {
      flat_ok = false;
    }
    out.rows.push_back(row("multiplier", sym.name + ":flat-factorization", "AC10", anchor,
                           flat_ok ? 0.0 : 1.0, 0.0, ctx.cfg.flat_path_tol, flat_ok));

    auto sharpK = wave.materialize();
    auto srep = support_check(sharpK, ctx.op.speed(), tab.cut.a, ctx.cfg.support_tol);
    out.rows.push_back(row("multiplier", sym.name + ":support", "AC11", anchor,
                           srep.outside_mass, 0.0, ctx.cfg.support_tol, srep.pass));

    // |t psi_k| certificates, stable under table refinement.
    auto tab_fine = fourier_transform(sym, 8.0, 2000, 8192);
    split(tab_fine, ctx.cut);
    psi_ladder(tab_fine, 3);
    double psi_dev = 0.0;
    for (int k = 1; k <= 3; ++k) {
      const double c = psi_weighted_sup(tab, k, 1e-3);
      const double cf = psi_weighted_sup(tab_fine, k, 1e-3);
      csv += sym.name + ",psi_sup_k" + std::to_string(k) + "," + fmt(cf) + "\n";
      if (cf > 0.0) psi_dev = std::max(psi_dev, std::abs(c / cf - 1.0));
    }
    out.rows.push_back(row("multiplier", sym.name + ":psi-certificate", "AC9", anchor, psi_dev,
                           0.0, ctx.cfg.psi_stability, psi_dev <= ctx.cfg.psi_stability));

    {
      const int stride = std::max<size_t>(1, tab.t.size() / 2048);
      std::string tcsv = "t,fhat,fhat_sharp,fhat_flat,psi1,psi2,psi3\n";
      for (size_t i = 0; i < tab.t.size(); i += stride)
        tcsv += fmt(tab.t[i]) + "," + fmt(tab.fhat[i]) + "," + fmt(tab.fhat_sharp[i]) + "," +
                fmt(tab.fhat_flat[i]) + "," + fmt(tab.psi[1][i]) + "," + fmt(tab.psi[2][i]) +
                "," + fmt(tab.psi[3][i]) + "\n";
      out.files.emplace_back("tables_" + sym.name + ".csv", tcsv);
    }
    const double norm2 = operator_norm(wave, NormType::L2);
    double total_sup = 0.0;
    for (int q = 0; q < es.n(); ++q)
      total_sup = std::max(total_sup, std::abs(wave.diag[q] + flat.diag[q]));
    const double sup_phi = spectral_sup(es, [&](double lam) { return sym.phi(lam); });
    out.rows.push_back(row("multiplier", sym.name + ":p2-sanity", "AC14", anchor,
                           std::abs(total_sup - sup_phi), 0.0, 1e-8,
                           std::abs(total_sup - sup_phi) <= 1e-8));
    csv += sym.name + ",sharp_norm2," + fmt(norm2) + "\n";
    csv += sym.name + ",route_diff," + fmt(route_worst) + "\n";
    csv += sym.name + ",reconstruction," + fmt(recon) + "\n";
    csv += sym.name + ",support_mass," + fmt(srep.outside_mass) + "\n";

    if (ctx.cfg.dump_kernels) {
      std::string kcsv = "i,j,value\n";
      for (int i = 0; i < sharpK.n(); ++i)
        for (int j = 0; j < sharpK.n(); ++j)
          kcsv += std::to_string(i) + "," + std::to_string(j) + "," + fmt(sharpK.K(i, j)) + "\n";
      out.files.emplace_back("kernel_sharp_" + sym.name + ".csv", kcsv);
    }
  }
  out.files.emplace_back("multiplier.csv", csv);
  return out;
}

SuiteOutput suite_keylemma(const Context& ctx) {
  SuiteOutput out;
  const auto& es = ctx.es;
  std::string csv = "symbol,t,value,admissible\n";
  for (size_t s = 0; s < ctx.syms.size(); ++s) {
    auto sharp = build_sharp_wave(es, ctx.tabs[s], ctx.cfg.quad_steps);
    auto prof = key_lemma_profile(es, sharp, ctx.cfg.keylemma_epsilon, ctx.cfg.keylemma_levels);
    std::vector<double> adm;
    bool finite = true;
    for (size_t i = 0; i < prof.t.size(); ++i) {
      csv += ctx.syms[s].name + "," + fmt(prof.t[i]) + "," + fmt(prof.value[i]) + "," +
             (prof.admissible[i] ? "1" : "0") + "\n";
      if (prof.admissible[i]) {
        adm.push_back(prof.value[i]);
        finite = finite && std::isfinite(prof.value[i]);
      }
    }
    std::vector<double> sorted = adm;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted.empty() ? 0.0 : sorted[sorted.size() / 2];
    const double last = adm.empty() ? 0.0 : adm.back();
    const double trend = median > 0.0 ? last / median : (last > 0.0 ? 1e300 : 1.0);
    const bool pass = finite && trend <= ctx.cfg.keylemma_trend;
    out.rows.push_back(row("keylemma", ctx.syms[s].name + ":no-blowup", "AC12",
                           "Key Lemma uniform integral", trend, 1.0,
                           ctx.cfg.keylemma_trend - 1.0, pass));
  }
  out.files.emplace_back("keylemma.csv", csv);
  return out;
}

SuiteOutput suite_bmo(const Context& ctx) {
  SuiteOutput out;
  const auto& es = ctx.es;
  const Geometry& g = *es.geom;
  const char* anchor = "BMO_L continuity";
  const double cap = std::max(ctx.cfg.bmo_epsilon * g.diameter / kPi, 2.5 * g.h);
  BmoConfig heat_cfg{cap, BmoVariant::Heat};
  BmoConfig avg_cfg{cap, BmoVariant::Average};

  if (ctx.cfg.bc == BoundaryCondition::Neumann) {
    Field ones(es.n(), 1.0);
    const double nh = bmo_norm(es, ones, heat_cfg);
    const double na = bmo_norm(es, ones, avg_cfg);
    out.rows.push_back(row("bmo", "constants-heat", "AC13", anchor, nh, 0.0, 1e-12, nh <= 1e-12));
    out.rows.push_back(row("bmo", "constants-average", "AC13", anchor, na, 0.0, 1e-12,
                           na <= 1e-12));
  }

  auto corpus = bmo_corpus(es, std::max(25, ctx.cfg.trials / 2), ctx.cfg.seed);
  const double R = std::pow(g.diameter / 7.5, 2.0);
  auto rep = epsilon_independence_check(es, corpus, R, BmoVariant::Heat, ctx.cfg.bmo_ratio_cap);
  out.rows.push_back(row("bmo", "epsilon-independence", "AC13", anchor, rep.max_ratio, 1.0,
                         ctx.cfg.bmo_ratio_cap - 1.0, rep.pass));

  {
    Field mode(es.n());
    for (int i = 0; i < es.n(); ++i) mode[i] = es.vecs(i, std::min(1, es.n() - 1));
    std::string bcsv = "center,radius,oscillation\n";
    for (const auto& r : bmo_report(es, mode, heat_cfg))
      bcsv += std::to_string(r.center) + "," + fmt(r.radius) + "," + fmt(r.oscillation) + "\n";
    out.files.emplace_back("bmo_balls.csv", bcsv);
  }

  std::string csv = "symbol,class,value\n";
  for (size_t s = 0; s < ctx.syms.size(); ++s) {
    auto b = build_multiplier(es, ctx.tabs[s], SharpRoute::Wave, 2, ctx.cfg.quad_steps);
    auto est = linf_to_bmo_norm(es, b.total, heat_cfg, ctx.cfg.trials, ctx.cfg.seed);
    csv += ctx.syms[s].name + ",all," + fmt(est.value) + "\n";
    csv += ctx.syms[s].name + ",rough," + fmt(est.rough) + "\n";
    csv += ctx.syms[s].name + ",bumps," + fmt(est.bumps) + "\n";
    csv += ctx.syms[s].name + ",eigenmodes," + fmt(est.eigenmodes) + "\n";
    out.rows.push_back(row("bmo", ctx.syms[s].name + ":linf-to-bmo", "AC13", anchor, est.value,
                           0.0, 0.0, std::isfinite(est.value)));
  }
  out.files.emplace_back("bmo.csv", csv);
  return out;
}

SuiteOutput suite_lp(const Context& ctx) {
  SuiteOutput out;
  const auto& es = ctx.es;
  const double inf = std::numeric_limits<double>::infinity();
  const char* anchor = "Lp bounds";
  std::string csv = "symbol,p,kind,value\n";
  for (size_t s = 0; s < ctx.syms.size(); ++s) {
    const Symbol& sym = ctx.syms[s];
    // The exact spectral multiplier is the object for the norm table; the
    // assembled build is gauged against it in the multiplier suite.
    auto K = apply_function(es, [&](double lam) { return sym.phi(lam); });
    const double p2_exact = spectral_sup(es, [&](double lam) { return sym.phi(lam); });
    auto table = lp_norms(K, {1.0, 1.5, 2.0, 3.0, 4.0, 6.0, inf}, ctx.cfg.trials,
                          ctx.cfg.seed, p2_exact);

    double p2 = 0.0, sandwich_ok = 1.0;
    for (const auto& e : table) {
      const std::string pl = std::isinf(e.p) ? "inf" : fmt(e.p);
      if (e.exact) {
        csv += sym.name + "," + pl + ",exact," + fmt(e.lower) + "\n";
      } else {
        csv += sym.name + "," + pl + ",lower," + fmt(e.lower) + "\n";
        csv += sym.name + "," + pl + ",upper," + fmt(e.upper) + "\n";
        if (e.lower > e.upper * (1.0 + 1e-12)) sandwich_ok = 0.0;
      }
      if (e.p == 2.0) p2 = e.lower;
    }
    const double sup = spectral_sup(es, [&](double lam) { return sym.phi(lam); });
    const double p2_err = std::abs(p2 - sup);
    out.rows.push_back(row("lp", sym.name + ":p2-spectral", "AC14", anchor, p2_err, 0.0,
                           ctx.cfg.p2_tol, p2_err <= ctx.cfg.p2_tol));
    out.rows.push_back(row("lp", sym.name + ":sandwich", "AC14", anchor, sandwich_ok, 1.0, 0.0,
                           sandwich_ok == 1.0));
  }
  out.files.emplace_back("lp.csv", csv);
  return out;
}

using SuiteFn = SuiteOutput (*)(const Context&);

const std::map<std::string, SuiteFn>& suite_registry() {
  static const std::map<std::string, SuiteFn> reg = {
      {"eig", suite_eig},           {"heat-fit", suite_heat_fit},
      {"norm-fits", suite_norm_fits}, {"wave", suite_wave},
      {"dg", suite_dg},             {"cone", suite_cone},
      {"commutator", suite_commutator}, {"resolvent-limit", suite_resolvent},
      {"multiplier", suite_multiplier}, {"keylemma", suite_keylemma},
      {"bmo", suite_bmo},           {"lp", suite_lp},
  };
  return reg;
}

}  // namespace

std::string list_suites_text() {
  struct Info {
    const char* name;
    const char* anchor;
    const char* tolerances;
  };
  const Info info[] = {
      {"eig", "spectral oracle / metric scaling", "eig_rel_tol=1e-10 ortho_tol=1e-9 scaling_tol=1e-12"},
      {"heat-fit", "Gaussian heat kernel bounds; subordination identity",
       "r2_min=0.98 prefactor_tol=0.1 subordination_tol=1e-6"},
      {"norm-fits", "semigroup norm scaling", "slope_tol=0.15"},
      {"wave", "wave propagator agreement", "wave_order_tol=0.2 energy_tol=1e-3"},
      {"dg", "Davies-Gaffney", "dg_slack=1.05 gronwall_slack=0.05"},
      {"cone", "finite propagation speed", "cone_leapfrog_tol=1e-8 cone_spectral_tol=1e-6"},
      {"commutator", "commutator criterion", "commutator_slack=2"},
      {"resolvent-limit", "strong resolvent limit", "resolvent_decay=0.1"},
      {"multiplier", "multiplier split and transference",
       "route_tol=1e-5 recon_tol=1e-5 support_tol=1e-6 psi_stability=0.05"},
      {"keylemma", "Key Lemma uniform integral", "keylemma_epsilon=0.05 keylemma_trend=1.25"},
      {"bmo", "BMO_L continuity", "bmo_ratio_cap=10"},
      {"lp", "Lp bounds", "p2_tol=1e-10"},
  };
  std::string out = "suite            anchor                                        defaults\n";
  for (const auto& i : info) {
    char line[256];
    std::snprintf(line, sizeof line, "%-16s %-45s %s\n", i.name, i.anchor, i.tolerances);
    out += line;
  }
  return out;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  const Context ctx = build_context(cfg);

  int workers = 1;
  if (const char* env = std::getenv("SPECLAB_WORKERS")) workers = std::max(1, std::atoi(env));

  struct Pending {
    std::string name;
    std::future<SuiteOutput> fut;
  };
  std::vector<SuiteOutput> results(cfg.suites.size());
  size_t next = 0;
  while (next < cfg.suites.size()) {
    std::vector<Pending> batch;
    for (int w = 0; w < workers && next < cfg.suites.size(); ++w, ++next) {
      const std::string name = cfg.suites[next];
      SuiteFn fn = suite_registry().at(name);
      batch.push_back({name, std::async(std::launch::async, fn, std::cref(ctx))});
    }
    for (size_t b = 0; b < batch.size(); ++b) {
      try {
        results[next - batch.size() + b] = batch[b].fut.get();
      } catch (const config_error& e) {
        throw config_error("suite '" + batch[b].name + "': " + e.what());
      } catch (const numeric_error& e) {
        throw numeric_error("suite '" + batch[b].name + "': " + e.what());
      }
    }
  }

  fs::create_directories(cfg.output_dir);
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream f(fs::path(cfg.output_dir) / name, std::ios::binary);
    if (!f) throw config_error("cannot write to '" + cfg.output_dir + "/" + name + "'");
    f << content;
  };
  write("resolved.cfg", render_config(cfg));

  RunResult rr;
  std::string summary = "suite,check,criterion,anchor,value,target,tolerance,pass\n";
  for (size_t i = 0; i < cfg.suites.size(); ++i) {
    for (const auto& [fname, content] : results[i].files) write(fname, content);
    for (const auto& r : results[i].rows) {
      summary += r.suite + "," + r.check + "," + r.criterion + "," + r.anchor + "," +
                 fmt(r.value) + "," + fmt(r.target) + "," + fmt(r.tolerance) + "," +
                 (r.pass ? "1" : "0") + "\n";
      rr.rows.push_back(r);
    }
  }
  write("summary.csv", summary);

  bool all_pass = true;
  for (const auto& r : rr.rows) all_pass = all_pass && r.pass;
  rr.exit_code = all_pass ? 0 : 1;
  return rr;
}

}  // namespace speclab
