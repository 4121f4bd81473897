#include "speclab/multiplier.hpp"

#include <algorithm>
#include <cmath>

#include "speclab/semigroups.hpp"

namespace speclab {

namespace {

std::vector<double> spectrum_lambdas(const EigenSystem& es) {
  std::vector<double> lam(es.n());
  for (int k = 0; k < es.n(); ++k) lam[k] = std::sqrt(std::max(0.0, es.mu[k]));
  return lam;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void require_split(const SymbolTables& tables, const char* who) {
  if (!tables.has_split) throw config_error(std::string(who) + ": tables are not split");
}

}  // namespace

SpectralFunction build_sharp_wave_diag(const EigenSystem& es, const SymbolTables& tables,
                                       int quad_steps) {
  require_split(tables, "build_sharp_wave");
  const auto lam = spectrum_lambdas(es);
  auto coarse = sharp_symbol_values(tables.source, tables.cut, lam, quad_steps);
  auto fine = sharp_symbol_values(tables.source, tables.cut, lam, 2 * quad_steps);
  if (max_abs_diff(coarse, fine) > 1e-7)
    throw numeric_error("build_sharp_wave: quadrature not converged at " +
                        std::to_string(quad_steps) + " steps");
  SpectralFunction F;
  F.es = &es;
  F.diag = std::move(fine);
  return F;
}

KernelMatrix build_sharp_wave(const EigenSystem& es, const SymbolTables& tables,
                              int quad_steps) {
  return build_sharp_wave_diag(es, tables, quad_steps).materialize();
}

SpectralFunction build_sharp_bessel_diag(const EigenSystem& es, const SymbolTables& tables,
                                         int k, int quad_steps) {
  require_split(tables, "build_sharp_bessel");
  if (k < 1 || k > 3) throw config_error("build_sharp_bessel: k must lie in 1..3");
  if (static_cast<int>(tables.psi.size()) <= k)
    throw config_error("build_sharp_bessel: psi ladder not built to level k");

  const Symbol& sym = tables.source;
  const CutoffSpec& cut = tables.cut;
  const double a = cut.a;
  const double t_g = 0.02 * a;
  const double lam_max = es.lambda_max();

  // Uniform Simpson section on [t_g, a], resolving J_{k-1/2}(t lam_max), plus
  // geometric grading towards t = 0 where only |t psi_k| stays bounded.
  int m = std::max(quad_steps, static_cast<int>(std::ceil((a - t_g) * lam_max / 0.2)));
  if (m % 2) ++m;
  std::vector<double> nodes, wq;
  const double step = (a - t_g) / m;
  for (int i = 0; i <= m; ++i) {
    nodes.push_back(t_g + i * step);
    wq.push_back(((i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0)) * step / 3.0);
  }
  {
    double hi = t_g;
    const int per = 32;
    while (hi > 1e-12 * a) {
      const double lo = 0.5 * hi;
      const double s2 = (hi - lo) / per;
      for (int i = 0; i <= per; ++i) {
        nodes.push_back(lo + i * s2);
        wq.push_back(((i == 0 || i == per) ? 1.0 : (i % 2 ? 4.0 : 2.0)) * s2 / 3.0);
      }
      hi = lo;
    }
  }
  std::vector<double> psi(nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i) psi[i] = psi_value(sym, cut, k, nodes[i]);

  const bool anchored = sym.oscillatory_at_zero;
  const double j0 = bessel_J(k, 0.0);
  double anchor = 0.0;
  if (anchored) anchor = (sym.eval(0.0) - sym.c_inf) - flat_symbol_value(sym, cut, 0.0);

  const auto lam = spectrum_lambdas(es);
  SpectralFunction F;
  F.es = &es;
  F.diag.resize(es.n());
  for (int q = 0; q < es.n(); ++q) {
    double acc = 0.0;
    if (anchored) {
      for (size_t i = 0; i < nodes.size(); ++i)
        acc += wq[i] * psi[i] * (bessel_J(k, nodes[i] * lam[q]) - j0);
      acc += anchor;
    } else {
      for (size_t i = 0; i < nodes.size(); ++i)
        acc += wq[i] * psi[i] * bessel_J(k, nodes[i] * lam[q]);
    }
    F.diag[q] = sym.c_inf + acc;
  }

  const auto wave = build_sharp_wave_diag(es, tables);
  const double diff = max_abs_diff(F.diag, wave.diag);
  if (diff > 1e-4)
    throw numeric_error(
        "build_sharp_bessel: disagreement with the wave route (" + std::to_string(diff) +
        "); psi_" + std::to_string(k) + " grid resolution is suspect");
  return F;
}

KernelMatrix build_sharp_bessel(const EigenSystem& es, const SymbolTables& tables, int k,
                                int quad_steps) {
  return build_sharp_bessel_diag(es, tables, k, quad_steps).materialize();
}

SpectralFunction build_flat_diag(const EigenSystem& es, const SymbolTables& tables) {
  require_split(tables, "build_flat");
  const auto lam = spectrum_lambdas(es);
  SpectralFunction F;
  F.es = &es;
  F.diag = flat_symbol_values(tables.source, tables.cut, lam);
  return F;
}

KernelMatrix build_flat(const EigenSystem& es, const SymbolTables& tables) {
  const SpectralFunction direct = build_flat_diag(es, tables);
  KernelMatrix direct_K = direct.materialize();

  // Factorized path: (I - L)^{-s/2} psi^b(sqrt(-L)), s = n + 2, as an actual
  // kernel composition.
  const double s = es.geom->dim + 2.0;
  std::vector<double> psib(es.n());
  for (int k = 0; k < es.n(); ++k) {
    const double mu = std::max(0.0, es.mu[k]);
    psib[k] = direct.diag[k] * std::pow(1.0 + mu, 0.5 * s);
  }
  SpectralFunction Fb{&es, psib};
  SpectralFunction Res{&es, {}};
  Res.diag.resize(es.n());
  for (int k = 0; k < es.n(); ++k)
    Res.diag[k] = std::pow(1.0 + std::max(0.0, es.mu[k]), -0.5 * s);
  const KernelMatrix composed = kernel_compose(Res.materialize(), Fb.materialize());

  double scale = std::max(1.0, direct_K.K.max_abs());
  double worst = 0.0;
  for (int i = 0; i < direct_K.n(); ++i)
    for (int j = 0; j < direct_K.n(); ++j)
      worst = std::max(worst, std::abs(direct_K.K(i, j) - composed.K(i, j)));
  if (worst > 1e-7 * scale)
    throw numeric_error("build_flat: direct and factorized paths disagree by " +
                        std::to_string(worst));
  return direct_K;
}

MultiplierBuild build_multiplier(const EigenSystem& es, const SymbolTables& tables,
                                 SharpRoute route, int bessel_k, int quad_steps) {
  MultiplierBuild b;
  b.symbol = tables.source.name;
  b.route = route;
  b.cut = tables.cut;
  b.quad_steps = quad_steps;
  b.sharp_diag = route == SharpRoute::Wave
                     ? build_sharp_wave_diag(es, tables, quad_steps)
                     : build_sharp_bessel_diag(es, tables, bessel_k, quad_steps);
  b.bessel_k = route == SharpRoute::Bessel ? bessel_k : 0;
  b.flat_diag = build_flat_diag(es, tables);
  b.sharp = b.sharp_diag.materialize();
  b.flat = build_flat(es, tables);
  b.total.geom = b.sharp.geom;
  b.total.K = Matrix(b.sharp.n(), b.sharp.n());
  for (int i = 0; i < b.sharp.n(); ++i)
    for (int j = 0; j < b.sharp.n(); ++j) b.total.K(i, j) = b.sharp.K(i, j) + b.flat.K(i, j);
  return b;
}

SupportReport support_check(const KernelMatrix& sharp, double speed, double cutoff_a,
                            double tol) {
  const Geometry& g = *sharp.geom;
  SupportReport rep;
  rep.tol = tol;
  rep.cutoff_distance = speed * cutoff_a + 5.0 * g.h;
  double outside = 0.0, total = 0.0;
  for (int i = 0; i < sharp.n(); ++i)
    for (int j = 0; j < sharp.n(); ++j) {
      const double m = g.w[i] * g.w[j] * std::abs(sharp.K(i, j));
      total += m;
      if (g.dist(i, j) > rep.cutoff_distance) outside += m;
    }
  rep.outside_mass = total > 0.0 ? outside / total : 0.0;
  rep.pass = rep.outside_mass <= tol;
  return rep;
}

KeyLemmaProfile key_lemma_profile(const EigenSystem& es, const KernelMatrix& sharp,
                                  double epsilon, int levels) {
  if (!(epsilon > 0.0) || epsilon > 0.1)
    throw config_error("key_lemma_profile: epsilon must lie in (0, 0.1]");
  if (levels < 0 || levels > 8) throw config_error("key_lemma_profile: levels must lie in 0..8");
  const Geometry& g = *es.geom;
  const int n = g.n();
  KeyLemmaProfile prof;
  prof.epsilon = epsilon;
  double t = epsilon;
  for (int lvl = 0; lvl <= levels; ++lvl, t *= 0.5) {
    const KernelMatrix P = heat_kernel(es, t);
    const KernelMatrix Kt = kernel_compose(P, sharp);
    const double rad = std::sqrt(t);
    double sup = 0.0;
    for (int j = 0; j < n; ++j) {
      double col = 0.0;
      for (int i = 0; i < n; ++i) {
        if (g.dist(i, j) <= rad) continue;
        col += g.w[i] * std::abs(sharp.K(i, j) - Kt.K(i, j));
      }
      sup = std::max(sup, col);
    }
    prof.t.push_back(t);
    prof.value.push_back(sup);
    prof.admissible.push_back(t >= g.h * g.h);
  }
  return prof;
}

}  // namespace speclab
