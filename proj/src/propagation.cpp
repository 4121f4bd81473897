#include "speclab/propagation.hpp"

#include <algorithm>
#include <cmath>

namespace speclab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<int> support(const Field& f) {
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(f.size()); ++i)
    if (f[i] != 0.0) idx.push_back(i);
  return idx;
}

double dist_to_set(const Geometry& g, int i, const std::vector<int>& set) {
  double d = 1e300;
  for (int j : set) d = std::min(d, g.dist(i, j));
  return d;
}

ConeReport cone_mass(const Geometry& g, const Field& f0, const Field& u, double speed, double t,
                     double margin, double threshold) {
  const auto supp = support(f0);
  ConeReport rep;
  rep.t = t;
  rep.margin = margin;
  rep.threshold = threshold;
  // Sub-grid cushion so that layers exactly on the cone boundary are not
  // misclassified by a final ulp of the distance computation.
  const double limit = speed * t + margin + 1e-9 * g.h;
  double outside = 0.0, total = 0.0;
  for (int i = 0; i < g.n(); ++i) {
    const double m = g.w[i] * u[i] * u[i];
    total += m;
    if (dist_to_set(g, i, supp) > limit) outside += m;
  }
  rep.outside_mass = total > 0.0 ? outside / total : 0.0;
  rep.pass = rep.outside_mass <= threshold;
  return rep;
}

}  // namespace

Field cosine_spectral(const EigenSystem& es, double t, const Field& f) {
  std::vector<double> diag(es.n());
  for (int k = 0; k < es.n(); ++k) diag[k] = std::cos(t * std::sqrt(std::max(0.0, es.mu[k])));
  return es.project_apply(diag, f);
}

WaveState cosine_leapfrog(const DiscreteOperator& op, double t, const Field& f, double dt) {
  const double cfl_limit = 0.9 * op.geom->h / op.a_max;
  if (!(dt > 0.0) || dt > cfl_limit * (1.0 + 1e-12))
    throw config_error("cosine_leapfrog: dt violates the CFL bound 0.9 h / max(a)");
  const double steps_real = t / dt;
  const long steps = std::lround(steps_real);
  if (std::abs(steps_real - steps) > 1e-9 * std::max(1.0, steps_real))
    throw config_error("cosine_leapfrog: t must be an integer multiple of dt");

  WaveState s;
  s.dt = dt;
  s.u = f;
  s.u_prev = f;
  if (steps == 0) return s;

  Field Lu = op.apply(f);
  Field next(f.size());
  for (size_t i = 0; i < f.size(); ++i) next[i] = f[i] + 0.5 * dt * dt * Lu[i];
  s.u_prev = f;
  s.u = next;
  s.t = dt;
  for (long m = 1; m < steps; ++m) {
    Lu = op.apply(s.u);
    for (size_t i = 0; i < f.size(); ++i) {
      const double un = 2.0 * s.u[i] - s.u_prev[i] + dt * dt * Lu[i];
      s.u_prev[i] = s.u[i];
      s.u[i] = un;
    }
    s.t += dt;
  }
  return s;
}

double wave_energy(const DiscreteOperator& op, const WaveState& s) {
  if (s.dt == 0.0) return 0.0;
  const auto& w = op.geom->w;
  const Field Lu = op.apply(s.u);
  double kinetic = 0.0, potential = 0.0;
  for (size_t i = 0; i < s.u.size(); ++i) {
    const double v = (s.u[i] - s.u_prev[i]) / s.dt;
    kinetic += w[i] * v * v;
    potential += w[i] * (-Lu[i]) * s.u_prev[i];
  }
  return 0.5 * kinetic + 0.5 * potential;
}

Field bump_field(const Geometry& g, int center, double radius) {
  Field f(g.n(), 0.0);
  for (int i = 0; i < g.n(); ++i) {
    const double d = g.dist(i, center);
    if (d < radius) f[i] = 0.5 * (1.0 + std::cos(kPi * d / radius));
  }
  return f;
}

ConeReport lightcone_check(const DiscreteOperator& op, const Field& f, double t, double dt,
                           double margin, double threshold) {
  const WaveState s = cosine_leapfrog(op, t, f, dt);
  return cone_mass(*op.geom, f, s.u, op.speed(), t, margin, threshold);
}

ConeReport lightcone_check_spectral(const EigenSystem& es, double speed, const Field& f,
                                    double t, double margin, double threshold) {
  const Field u = cosine_spectral(es, t, f);
  return cone_mass(*es.geom, f, u, speed, t, margin, threshold);
}

DGReport davies_gaffney_check(const EigenSystem& es, int center_u, int center_v,
                              double ball_radius, const std::vector<double>& t_grid,
                              double slack) {
  const Geometry& g = *es.geom;
  const Field u = bump_field(g, center_u, ball_radius);
  const Field v = bump_field(g, center_v, ball_radius);
  const auto su = support(u), sv = support(v);
  if (su.empty() || sv.empty())
    throw config_error("davies_gaffney_check: empty bump (radius below the mesh scale)");
  double r = 1e300;
  for (int i : su) r = std::min(r, dist_to_set(g, i, sv));
  if (r <= 0.0) throw config_error("davies_gaffney_check: balls overlap");
  if (r < 4.0 * g.h)
    throw config_error("davies_gaffney_check: separation below the 4h resolution floor");

  const double nu = weighted_norm(g.w, u), nv = weighted_norm(g.w, v);
  std::vector<double> cu(es.n()), cv(es.n());
  for (int k = 0; k < es.n(); ++k) {
    double au = 0.0, av = 0.0;
    const double* vk = es.vecs_t.row(k);
    for (int i = 0; i < g.n(); ++i) {
      au += g.w[i] * vk[i] * u[i];
      av += g.w[i] * vk[i] * v[i];
    }
    cu[k] = au;
    cv[k] = av;
  }

  DGReport rep;
  rep.slack = slack;
  rep.r = r;
  rep.pass = true;
  for (double t : t_grid) {
    if (t < g.h * g.h)
      throw config_error("davies_gaffney_check: t below the h^2 resolution floor");
    double lhs = 0.0;
    for (int k = 0; k < es.n(); ++k) lhs += std::exp(-t * es.mu[k]) * cu[k] * cv[k];
    const double rhs = std::exp(-r * r / (4.0 * t)) * nu * nv;
    DGEntry e{t, r, lhs, rhs, lhs / rhs};
    rep.pass = rep.pass && e.ratio <= slack;
    rep.entries.push_back(e);
  }
  return rep;
}

CommutatorReport commutator_condition_check(const DiscreteOperator& op, int center_u,
                                            double u_radius, double r, double t,
                                            double speed_limit) {
  const Geometry& g = *op.geom;
  const double rho = r / t;
  CommutatorReport rep;
  rep.speed = speed_limit;
  rep.bound = speed_limit * (1.0 + 2.0 * g.h * rho);
  if (rho == 0.0) {
    rep.ratio = 0.0;
    rep.pass = true;
    return rep;
  }
  std::vector<double> phi(g.n());
  for (int i = 0; i < g.n(); ++i)
    phi[i] = rho * std::max(0.0, g.dist(i, center_u) - u_radius);
  double sup = 0.0;
  for (size_t e = 0; e < g.adjacent.size(); ++e) {
    const auto [i, j] = g.adjacent[e];
    // Multiplier of e^{-phi/2} [D, e^phi] e^{-phi/2} on this edge.
    const double m =
        op.edge_coeff[e] * 2.0 * std::abs(std::sinh(0.5 * (phi[j] - phi[i]))) / g.h;
    sup = std::max(sup, m);
  }
  rep.ratio = sup / rho;
  rep.pass = rep.ratio <= rep.bound;
  return rep;
}

GronwallReport gronwall_check(const EigenSystem& es, const Field& u, int center_u,
                              double u_radius, double r, double t, int n_steps) {
  const Geometry& g = *es.geom;
  const double rho = r / t;
  GronwallReport rep;
  rep.rho = rho;
  rep.pass = true;
  std::vector<double> ephi(g.n());
  for (int i = 0; i < g.n(); ++i)
    ephi[i] = std::exp(rho * std::max(0.0, g.dist(i, center_u) - u_radius));

  auto energy = [&](const Field& v) {
    double s = 0.0;
    for (int i = 0; i < g.n(); ++i) s += g.w[i] * ephi[i] * v[i] * v[i];
    return s;
  };
  const double E0 = energy(u);
  for (int m = 1; m <= n_steps; ++m) {
    const double tau = t * m / n_steps;
    std::vector<double> diag(es.n());
    for (int k = 0; k < es.n(); ++k) diag[k] = std::exp(-tau * es.mu[k]);
    const Field v = es.project_apply(diag, u);
    GronwallEntry e{tau, energy(v), std::exp(0.5 * rho * rho * tau) * E0 * 1.05};
    rep.pass = rep.pass && e.energy <= e.bound;
    rep.entries.push_back(e);
  }
  return rep;
}

ResolventLimitReport resolvent_limit_check(const Mesh& mesh, const OperatorSpec& base,
                                           const Field& H_rough,
                                           const std::vector<Field>& H_seq, double t,
                                           const Field& f) {
  OperatorSpec rough_spec = base;
  rough_spec.H = H_rough;
  const auto op = assemble_operator(mesh, rough_spec);
  const auto es = eigendecompose(op);
  const Geometry& g = *es.geom;

  auto heat_of = [&](const EigenSystem& e) {
    std::vector<double> diag(e.n());
    for (int k = 0; k < e.n(); ++k) diag[k] = std::exp(-t * e.mu[k]);
    return e.project_apply(diag, f);
  };
  const Field heat_ref = heat_of(es);
  const Field cos_ref = cosine_spectral(es, t, f);

  ResolventLimitReport rep;
  for (const auto& Hn : H_seq) {
    double hd = 0.0;
    for (int p = 0; p < mesh.size(); ++p) {
      const double d = Hn[p] - H_rough[p];
      hd += mesh.weights[p] * d * d;
    }
    rep.h_err.push_back(std::sqrt(hd));

    OperatorSpec sn = base;
    sn.H = Hn;
    const auto esn = eigendecompose(assemble_operator(mesh, sn));
    const Field hn = heat_of(esn);
    const Field cn = cosine_spectral(esn, t, f);
    double eh = 0.0, ec = 0.0;
    for (int i = 0; i < g.n(); ++i) {
      eh += g.w[i] * (hn[i] - heat_ref[i]) * (hn[i] - heat_ref[i]);
      ec += g.w[i] * (cn[i] - cos_ref[i]) * (cn[i] - cos_ref[i]);
    }
    rep.heat_err.push_back(std::sqrt(eh));
    rep.cos_err.push_back(std::sqrt(ec));
  }

  auto decays = [](const std::vector<double>& e) {
    if (e.size() < 2) return false;
    if (e.front() == 0.0) return e.back() == 0.0;
    for (size_t i = 1; i + 1 < e.size(); ++i)
      if (e[i + 1] > 1.05 * e[i]) return false;
    return e.back() <= 0.1 * e.front();
  };
  rep.pass = decays(rep.heat_err) && decays(rep.cos_err);
  return rep;
}

}  // namespace speclab
