#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "speclab/semigroups.hpp"
#include "speclab/symbols.hpp"

using namespace speclab;

namespace {

constexpr double kPi = 3.14159265358979323846;

EigenSystem interval_es(int n_axis, BoundaryCondition bc = BoundaryCondition::Dirichlet) {
  auto mesh = build_mesh(1, kPi, n_axis);
  OperatorSpec spec;
  spec.bc = bc;
  return eigendecompose(assemble_operator(mesh, spec));
}

// Interval Dirichlet heat kernel by the method of images.
double image_sum_heat(double t, double x, double y) {
  double s = 0.0;
  for (int k = -40; k <= 40; ++k) {
    const double zp = x - y + 2.0 * kPi * k;
    const double zm = x + y + 2.0 * kPi * k;
    s += std::exp(-zp * zp / (4.0 * t)) - std::exp(-zm * zm / (4.0 * t));
  }
  return s / std::sqrt(4.0 * kPi * t);
}

// Raw subordination integrand on a geometrically graded grid; the oracle that
// pins the normalization 2 sqrt(pi).
double subordination_raw(double t, double mu) {
  double acc = 0.0;
  double hi = 1e4;
  while (hi > 1e-14) {
    const double lo = 0.5 * hi;
    const int m = 512;
    const double step = (hi - lo) / m;
    for (int i = 0; i <= m; ++i) {
      const double s = lo + i * step;
      const double wt = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      acc += wt * (step / 3.0) * t * std::exp(-t * t / (4.0 * s)) * std::pow(s, -1.5) *
             std::exp(-s * mu);
    }
    hi = lo;
  }
  return acc;
}

}  // namespace

TEST_CASE("heat kernel: stochasticity, symmetry, semigroup law") {
  auto esn = interval_es(65, BoundaryCondition::Neumann);
  auto Kn = heat_kernel(esn, 0.05);
  const auto& wn = esn.geom->w;
  for (int i = 0; i < Kn.n(); ++i) {
    double row = 0.0;
    for (int j = 0; j < Kn.n(); ++j) row += wn[j] * Kn.K(i, j);
    CHECK(std::abs(row - 1.0) <= 1e-10);
  }

  auto esd = interval_es(65);
  auto Kd = heat_kernel(esd, 0.05);
  const auto& wd = esd.geom->w;
  for (int i = 0; i < Kd.n(); ++i) {
    double row = 0.0;
    for (int j = 0; j < Kd.n(); ++j) row += wd[j] * Kd.K(i, j);
    CHECK(row <= 1.0 + 1e-10);
  }

  double sym = 0.0;
  for (int i = 0; i < Kd.n(); ++i)
    for (int j = 0; j < Kd.n(); ++j) sym = std::max(sym, std::abs(Kd.K(i, j) - Kd.K(j, i)));
  CHECK(sym <= 1e-9 * Kd.K.max_abs());

  auto Ks = heat_kernel(esd, 0.03);
  auto Kts = heat_kernel(esd, 0.08);
  auto comp = kernel_compose(Kd, Ks);
  double worst = 0.0;
  for (int i = 0; i < Kd.n(); ++i)
    for (int j = 0; j < Kd.n(); ++j) worst = std::max(worst, std::abs(comp.K(i, j) - Kts.K(i, j)));
  CHECK(worst <= 1e-9 * Kts.K.max_abs());

  CHECK(kernel_negative_mass(Kd) <= 1e-6);
}

TEST_CASE("heat kernel matches the image-sum oracle") {
  auto es = interval_es(201);
  const double t = 0.02;
  auto K = heat_kernel(es, t);
  const Geometry& g = *es.geom;
  double peak = 0.0;
  for (int i = 0; i < K.n(); ++i) peak = std::max(peak, K.K(i, i));
  double worst = 0.0;
  for (int i = 0; i < K.n(); i += 7)
    for (int j = 0; j < K.n(); j += 7)
      worst = std::max(worst,
                       std::abs(K.K(i, j) - image_sum_heat(t, g.x[i][0], g.x[j][0])));
  CHECK(worst <= 2e-2 * peak);
}

TEST_CASE("subordination: scalar oracle and operator agreement") {
  for (double mu : {0.5, 4.0, 30.0})
    for (double t : {0.3, 1.0}) {
      const double lhs = subordination_raw(t, mu);
      const double rhs = 2.0 * std::sqrt(kPi) * std::exp(-t * std::sqrt(mu));
      CHECK(std::abs(lhs - rhs) <= 1e-10 * rhs);
    }

  auto es = interval_es(65);
  const double t = 0.4;
  auto direct = poisson_direct(es, t);
  auto sub = poisson_subordinated(es, t);
  KernelMatrix diff;
  diff.geom = direct.geom;
  diff.K = Matrix(direct.n(), direct.n());
  for (int i = 0; i < direct.n(); ++i)
    for (int j = 0; j < direct.n(); ++j) diff.K(i, j) = direct.K(i, j) - sub.K(i, j);
  const double rel = operator_norm(diff, NormType::L2) / operator_norm(direct, NormType::L2);
  CHECK(rel <= 1e-6);

  // Strong continuity at small t on the bounded part of the spectrum.
  auto small = poisson_direct(es, 1e-3);
  auto ident = identity_kernel(es.geom);
  // Compare actions on the lowest eigenvector.
  Field v0(es.n());
  for (int i = 0; i < es.n(); ++i) v0[i] = es.vecs(i, 0);
  const Field a = small.apply(v0), b = ident.apply(v0);
  double err = 0.0;
  for (int i = 0; i < es.n(); ++i) err = std::max(err, std::abs(a[i] - b[i]));
  CHECK(err <= 1e-3);

  // Poisson semigroup law.
  auto p1 = poisson_direct(es, 0.3), p2 = poisson_direct(es, 0.5), p3 = poisson_direct(es, 0.8);
  auto comp = kernel_compose(p1, p2);
  double worst = 0.0;
  for (int i = 0; i < es.n(); ++i)
    for (int j = 0; j < es.n(); ++j) worst = std::max(worst, std::abs(comp.K(i, j) - p3.K(i, j)));
  CHECK(worst <= 1e-8 * p3.K.max_abs());
}

TEST_CASE("Gaussian bound fit on the interval") {
  auto es = interval_es(201);
  const auto t_grid = geometric_grid(2e-3, 0.05, 6);

  auto fit = fit_gaussian_bound(es, t_grid, false);
  CHECK(fit.kappa_hat >= 0.2);
  CHECK(fit.kappa_hat <= 0.26);
  CHECK(fit.r2 >= 0.98);
  CHECK(fit.prefactor_exponent == doctest::Approx(-0.5).epsilon(0.2));

  auto gfit = fit_gaussian_bound(es, t_grid, true);
  CHECK(gfit.kappa_hat > 0.0);
  CHECK(gfit.r2 >= 0.9);
  CHECK(std::abs(gfit.prefactor_exponent - (-1.0)) <= 0.15);

  CHECK_THROWS_AS(fit_gaussian_bound(es, {0.9}, false, {.d_min_factor = 400.0}), config_error);
}

TEST_CASE("norm-scaling exponents match their targets on the interval") {
  auto es = interval_es(201);
  const double h = es.geom->h;
  const int n = 1;

  struct Case {
    const char* kind;
    double lo, hi, tol;
  };
  const Case cases[] = {
      {"heat-2inf", 1e-3, 0.05, 0.1},
      {"heat-2lip", 1e-3, 0.05, 0.15},
      {"poisson-2inf", 4 * h, 0.4, 0.1},
      {"poisson-2lip", 4 * h, 0.4, 0.15},
      {"resolvent-2inf", 4 * h, 0.4, 0.15},
      {"L-poisson-2inf", 4 * h, 0.4, 0.15},
      {"bk-2inf", 4 * h, 0.5, 0.15},
      {"L-bk-2inf", 4 * h, 0.5, 0.15},
      {"grad-heat-sq", 1e-3, 0.05, 0.15},
  };
  for (const auto& c : cases) {
    auto fam = norm_family(es, c.kind);
    auto fit = fit_norm_exponent(fam, geometric_grid(c.lo, c.hi, 7), c.kind, "auto",
                                 norm_family_target(c.kind, n));
    INFO(c.kind << ": slope " << fit.slope << " target " << fit.target);
    CHECK(std::abs(fit.slope - fit.target) <= c.tol);
  }

  CHECK_THROWS_AS(
      fit_norm_exponent([](double) { return 1.0; }, {0.1, 0.2}, "f", "n", 0.0), config_error);
}

TEST_CASE("Bessel multiplier kernels: small-s limit and quadrature oracle") {
  auto es = interval_es(65);
  for (int k = 1; k <= 3; ++k) {
    auto F = bk_diag(es, 1e-3, k);
    const double j0 = bessel_J(k, 0.0);
    for (double d : F.diag) CHECK(std::abs(d - j0) <= 2e-3);

    const double s = 0.37;
    auto Fk = bk_diag(es, s, k);
    for (int m = 0; m < es.n(); ++m) {
      const double lam = std::sqrt(std::max(0.0, es.mu[m]));
      CHECK(std::abs(Fk.diag[m] - bessel_J_moment(k, s * lam, 20000)) <= 1e-8);
    }
  }
  CHECK_THROWS_AS(bk_kernel(es, 2.0, 1), config_error);
}
