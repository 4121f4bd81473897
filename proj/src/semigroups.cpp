#include "speclab/semigroups.hpp"

#include <algorithm>
#include <cmath>

#include "speclab/symbols.hpp"

namespace speclab {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct LinearFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0, rms = 0.0;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LinearFit f;
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw numeric_error("least_squares: degenerate abscissae");
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / n;
  for (size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  f.rms = std::sqrt(ss_res / n);
  return f;
}

// |forward-difference gradient|^2 of eigenvector k at dof i, axes divided by h.
double grad_sq_eigvec(const EigenSystem& es, int i, int k) {
  const Geometry& g = *es.geom;
  double s = 0.0;
  for (int d = 0; d < g.dim; ++d) {
    const int j = g.fwd[i][d];
    if (j < 0) continue;
    const double dv = (es.vecs(j, k) - es.vecs(i, k)) / g.h;
    s += dv * dv;
  }
  return s;
}

}  // namespace

SpectralFunction heat_diag(const EigenSystem& es, double t) {
  return apply_diag(es, [t](double lam) { return std::exp(-t * lam * lam); }, "heat");
}

KernelMatrix heat_kernel(const EigenSystem& es, double t) {
  if (!(t > 0.0)) throw config_error("heat_kernel: t must be positive");
  return heat_diag(es, t).materialize();
}

double kernel_negative_mass(const KernelMatrix& K) {
  const auto& w = K.geom->w;
  double neg = 0.0, tot = 0.0;
  for (int i = 0; i < K.n(); ++i)
    for (int j = 0; j < K.n(); ++j) {
      const double m = w[i] * w[j] * K.K(i, j);
      tot += std::abs(m);
      if (m < 0.0) neg -= m;
    }
  return tot > 0.0 ? neg / tot : 0.0;
}

KernelMatrix poisson_direct(const EigenSystem& es, double t) {
  if (!(t > 0.0)) throw config_error("poisson_direct: t must be positive");
  return apply_function(es, [t](double lam) { return std::exp(-t * lam); });
}

KernelMatrix poisson_subordinated(const EigenSystem& es, double t, int quad_steps) {
  if (!(t > 0.0)) throw config_error("poisson_subordinated: t must be positive");
  // s = t^2/(4v^2) turns the subordination integral into
  //   (2/sqrt(pi)) int_0^inf e^{-v^2} e^{-(t^2/4v^2) mu} dv.
  auto eval_diag = [&](int steps) {
    std::vector<double> diag(es.n(), 0.0);
    const double V = 8.0;
    const double dv = V / steps;
    for (int i = 0; i <= steps; ++i) {
      const double v = i * dv;
      const double wt = (i == 0 || i == steps) ? 0.5 : 1.0;
      const double base = std::exp(-v * v);
      for (int k = 0; k < es.n(); ++k) {
        const double arg = v == 0.0 ? 0.0 : std::exp(-t * t * es.mu[k] / (4.0 * v * v));
        // v = 0 contributes e^{-0} * lim factor; the limit is 0 for mu > 0
        // and 1 for mu = 0, but the weight dv/2 makes it immaterial.
        diag[k] += wt * base * (v == 0.0 ? (es.mu[k] > 0.0 ? 0.0 : 1.0) : arg);
      }
    }
    for (auto& d : diag) d *= 2.0 / std::sqrt(kPi) * dv;
    return diag;
  };

  std::vector<double> diag = eval_diag(quad_steps);
  for (int round = 0; round < 6; ++round) {
    const std::vector<double> fine = eval_diag(quad_steps * 2);
    double worst = 0.0;
    for (int k = 0; k < es.n(); ++k) worst = std::max(worst, std::abs(fine[k] - diag[k]));
    diag = fine;
    if (worst <= 1e-11) {
      SpectralFunction F;
      F.es = &es;
      F.diag = diag;
      return F.materialize();
    }
    quad_steps *= 2;
  }
  throw numeric_error("poisson_subordinated: quadrature did not stabilize at " +
                      std::to_string(quad_steps) + " steps");
}

SpectralFunction bk_diag(const EigenSystem& es, double s, int k) {
  return apply_diag(es, [s, k](double lam) { return bessel_J(k, s * lam); }, "bessel");
}

KernelMatrix bk_kernel(const EigenSystem& es, double s, int k) {
  if (!(s > 0.0) || s > 1.0) throw config_error("bk_kernel: s must lie in (0, 1]");
  return bk_diag(es, s, k).materialize();
}

GaussianFit fit_gaussian_bound(const EigenSystem& es, const std::vector<double>& t_grid,
                               bool use_gradient, const GaussianFitOptions& opts) {
  const Geometry& g = *es.geom;
  const int n = g.n();
  const int dim = g.dim;
  const double d_min = opts.d_min_factor * g.h;

  std::vector<double> xs, ys, lx, ly;
  for (double t : t_grid) {
    if (!(t > 0.0) || t > 1.0)
      throw config_error("fit_gaussian_bound: t grid must lie in (0, 1]");
    const KernelMatrix P = heat_kernel(es, t);
    const double d_max = std::sqrt(opts.chi_max * t);

    auto value_at = [&](int i, int j) {
      if (!use_gradient) return std::abs(P.K(i, j));
      double s = 0.0;
      for (int ax = 0; ax < dim; ++ax) {
        const int ii = g.fwd[i][ax];
        if (ii < 0) continue;
        const double dv = (P.K(ii, j) - P.K(i, j)) / g.h;
        s += dv * dv;
      }
      return std::sqrt(s);
    };

    // Deterministic pair subsampling inside the admissible window.
    const long long total = static_cast<long long>(n) * n;
    const long long stride = std::max(1LL, total / opts.max_pairs_per_t);
    const double power = use_gradient ? 0.5 * dim + 0.5 : 0.5 * dim;
    for (long long q = 0; q < total; q += stride) {
      const int i = static_cast<int>(q / n);
      const int j = static_cast<int>(q % n);
      const double d = g.dist(i, j);
      if (d < d_min || d > d_max) continue;
      const double val = value_at(i, j);
      if (val <= 0.0) continue;
      xs.push_back(d * d / t);
      ys.push_back(std::log(val) + power * std::log(t));
    }

    // sup over all pairs; its t-power is the prefactor exponent (the Gaussian
    // factor is 1 at the maximizing near-diagonal pair).
    double sup = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) sup = std::max(sup, value_at(i, j));
    lx.push_back(std::log(t));
    ly.push_back(std::log(sup));
  }
  if (static_cast<int>(xs.size()) < 50)
    throw config_error("fit_gaussian_bound: fewer than 50 admissible samples");

  const LinearFit main = least_squares(xs, ys);
  GaussianFit fit;
  fit.kappa_hat = -main.slope;
  fit.r2 = main.r2;
  fit.samples = static_cast<int>(xs.size());
  fit.d_min = d_min;
  fit.chi_max = opts.chi_max;
  fit.prefactor_exponent = least_squares(lx, ly).slope;
  return fit;
}

ExponentFit fit_norm_exponent(const std::function<double(double)>& family,
                              const std::vector<double>& s_grid, const std::string& family_name,
                              const std::string& norm_name, double target) {
  if (s_grid.size() < 5)
    throw config_error("fit_norm_exponent: need at least 5 scale points");
  ExponentFit fit;
  fit.family = family_name;
  fit.norm = norm_name;
  fit.target = target;
  std::vector<double> lx, ly;
  for (double s : s_grid) {
    const double v = family(s);
    if (!(v > 0.0) || !std::isfinite(v))
      throw numeric_error("fit_norm_exponent: family value degenerate at s = " +
                          std::to_string(s));
    fit.s.push_back(s);
    fit.value.push_back(v);
    lx.push_back(std::log(s));
    ly.push_back(std::log(v));
  }
  const LinearFit lf = least_squares(lx, ly);
  fit.slope = lf.slope;
  fit.residual = lf.rms;
  return fit;
}

std::function<double(double)> norm_family(const EigenSystem& es, const std::string& kind,
                                          int k) {
  const int n = es.geom->dim;
  if (kind == "heat-2inf")
    return [&es](double s) { return operator_norm(heat_diag(es, s), NormType::L2ToLinf); };
  if (kind == "heat-2lip")
    return [&es](double s) { return operator_norm(heat_diag(es, s), NormType::L2ToLip); };
  if (kind == "poisson-2inf")
    return [&es](double s) {
      return operator_norm(apply_diag(es, [s](double lam) { return std::exp(-s * lam); }),
                           NormType::L2ToLinf);
    };
  if (kind == "poisson-2lip")
    return [&es](double s) {
      return operator_norm(apply_diag(es, [s](double lam) { return std::exp(-s * lam); }),
                           NormType::L2ToLip);
    };
  if (kind == "resolvent-2inf") {
    const double sigma = 0.25 * n + 1.0;
    return [&es, sigma](double s) {
      return operator_norm(apply_diag(es, [s, sigma](double lam) {
                             return std::pow(1.0 + s * s * lam * lam, -sigma);
                           }),
                           NormType::L2ToLinf);
    };
  }
  if (kind == "L-poisson-2inf")
    return [&es](double s) {
      return operator_norm(
          apply_diag(es, [s](double lam) { return lam * lam * std::exp(-s * lam); }),
          NormType::L2ToLinf);
    };
  if (kind == "bk-2inf")
    return [&es, k](double s) { return operator_norm(bk_diag(es, s, k), NormType::L2ToLinf); };
  if (kind == "L-bk-2inf")
    return [&es, k](double s) {
      return operator_norm(
          apply_diag(es, [s, k](double lam) { return lam * lam * bessel_J(k, s * lam); }),
          NormType::L2ToLinf);
    };
  if (kind == "grad-heat-sq")
    return [&es](double s) {
      const int N = es.n();
      double best = 0.0;
      for (int i = 0; i < N; ++i) {
        double acc = 0.0;
        for (int kk = 0; kk < N; ++kk)
          acc += std::exp(-2.0 * s * es.mu[kk]) * grad_sq_eigvec(es, i, kk);
        best = std::max(best, acc);
      }
      return best;
    };
  throw config_error("norm_family: unknown kind '" + kind + "'");
}

double norm_family_target(const std::string& kind, int n) {
  if (kind == "heat-2inf") return -0.25 * n;
  if (kind == "heat-2lip") return -0.25 * n - 0.5;
  if (kind == "poisson-2inf") return -0.5 * n;
  if (kind == "poisson-2lip") return -0.5 * n - 1.0;
  if (kind == "resolvent-2inf") return -0.5 * n;
  if (kind == "L-poisson-2inf") return -0.5 * n - 2.0;
  if (kind == "bk-2inf") return -0.5 * n;
  if (kind == "L-bk-2inf") return -0.5 * n - 2.0;
  if (kind == "grad-heat-sq") return -0.5 * n - 1.0;
  throw config_error("norm_family_target: unknown kind '" + kind + "'");
}

std::vector<double> geometric_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2)
    throw config_error("geometric_grid: invalid range");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i)
    g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
  return g;
}

}  // namespace speclab
