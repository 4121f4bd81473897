#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "speclab/eigen.hpp"

using namespace speclab;

namespace {

constexpr double kPi = 3.14159265358979323846;

EigenSystem dirichlet_interval(int n_axis, double len = kPi) {
  auto mesh = build_mesh(1, len, n_axis);
  OperatorSpec spec;
  spec.bc = BoundaryCondition::Dirichlet;
  return eigendecompose(assemble_operator(mesh, spec));
}

// Analytic spectrum of the 3-point Dirichlet stencil on [0, len].
double stencil_eigenvalue(int k, double h, double len) {
  const double s = std::sin(0.5 * k * kPi * h / len);
  return 4.0 / (h * h) * s * s;
}

}  // namespace

TEST_CASE("Jacobi reproduces the analytic Dirichlet stencil spectrum") {
  const int n_axis = 101;
  auto es = dirichlet_interval(n_axis);
  const double h = kPi / (n_axis - 1);
  REQUIRE(es.n() == n_axis - 2);
  for (int k = 1; k <= es.n(); ++k) {
    const double exact = stencil_eigenvalue(k, h, kPi);
    CHECK(std::abs(es.mu[k - 1] - exact) <= 1e-10 * exact);
  }
}

TEST_CASE("eigenvectors are weighted-orthonormal and reconstruct L") {
  auto mesh = build_mesh(1, kPi, 65);
  OperatorSpec spec;
  spec.bc = BoundaryCondition::Neumann;
  spec.a_fn = [](double x, double) { return 1.0 + 0.25 * std::cos(x); };
  auto op = assemble_operator(mesh, spec);
  auto es = eigendecompose(op);
  const int n = es.n();
  const auto& w = es.geom->w;

  double ortho = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += w[i] * es.vecs(i, a) * es.vecs(i, b);
      ortho = std::max(ortho, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  CHECK(ortho <= 1e-9);

  // L + sum_k mu_k v_k v_k^T W should vanish.
  double mu_max = std::abs(es.mu.back());
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = op.matrix(i, j);
      for (int k = 0; k < n; ++k) s += es.mu[k] * es.vecs(i, k) * es.vecs(j, k) * w[j];
      worst = std::max(worst, std::abs(s));
    }
  CHECK(worst <= 1e-8 * mu_max);
}

TEST_CASE("Neumann ground state is the constant") {
  auto mesh = build_mesh(1, kPi, 49);
  OperatorSpec spec;
  spec.bc = BoundaryCondition::Neumann;
  auto es = eigendecompose(assemble_operator(mesh, spec));
  CHECK(std::abs(es.mu[0]) <= 1e-10);
  const double c = es.vecs(0, 0);
  for (int i = 0; i < es.n(); ++i) CHECK(std::abs(es.vecs(i, 0) - c) <= 1e-9 * std::abs(c));
}

TEST_CASE("diagonal shift moves the whole spectrum") {
  auto mesh = build_mesh(1, kPi, 33);
  OperatorSpec spec;
  spec.bc = BoundaryCondition::Dirichlet;
  auto op = assemble_operator(mesh, spec);
  auto es0 = eigendecompose(op);
  const double c = 3.75;
  for (int i = 0; i < op.n(); ++i) op.matrix(i, i) -= c;  // L - cI, so -L shifts by +c
  auto es1 = eigendecompose(op);
  for (int k = 0; k < op.n(); ++k)
    CHECK(std::abs(es1.mu[k] - (es0.mu[k] + c)) <= 1e-10 * (1.0 + es0.mu[k] + c));
}

TEST_CASE("rescaling divides the spectrum by r^2") {
  auto mesh = build_mesh(1, kPi, 41);
  OperatorSpec spec;
  spec.bc = BoundaryCondition::Dirichlet;
  auto op = assemble_operator(mesh, spec);
  auto es = eigendecompose(op);
  auto es2 = eigendecompose(rescale_operator(op, 2.0));
  for (int k = 0; k < op.n(); ++k)
    CHECK(std::abs(es2.mu[k] - 0.25 * es.mu[k]) <= 1e-12 * std::max(1.0, es.mu[k]));
}

TEST_CASE("Dirichlet eigenvalues converge to k^2 at second order") {
  // Fit the convergence order of mu_1..mu_4 on [0, pi] through three meshes.
  const int sizes[3] = {33, 65, 129};
  double err[3];
  for (int s = 0; s < 3; ++s) {
    auto es = dirichlet_interval(sizes[s]);
    double e = 0.0;
    for (int k = 1; k <= 4; ++k) e = std::max(e, std::abs(es.mu[k - 1] - double(k) * k));
    err[s] = e;
  }
  const double order1 = std::log2(err[0] / err[1]);
  const double order2 = std::log2(err[1] / err[2]);
  CHECK(order1 >= 1.8);
  CHECK(order1 <= 2.2);
  CHECK(order2 >= 1.8);
  CHECK(order2 <= 2.2);
}

TEST_CASE("apply_function obeys the spectral calculus") {
  auto es = dirichlet_interval(41);
  const auto& w = es.geom->w;
  const int n = es.n();

  auto ident = apply_function(es, [](double) { return 1.0; });
  // K W = I
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      worst = std::max(worst, std::abs(ident.K(i, j) * w[j] - (i == j ? 1.0 : 0.0)));
  CHECK(worst <= 1e-9);

  auto cos0 = apply_function(es, [](double lam) { return std::cos(0.0 * lam); });
  worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(cos0.K(i, j) - ident.K(i, j)));
  CHECK(worst <= 1e-12);

  CHECK_THROWS_AS(apply_function(es, [](double lam) { return 1.0 / (lam - lam); }), numeric_error);

  // Multiplicativity: e^{-lam^2} twice equals e^{-2 lam^2}.
  auto g1 = apply_function(es, [](double lam) { return std::exp(-lam * lam); });
  auto g2 = apply_function(es, [](double lam) { return std::exp(-2.0 * lam * lam); });
  auto comp = kernel_compose(g1, g1);
  worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(comp.K(i, j) - g2.K(i, j)));
  CHECK(worst <= 1e-8);
}

TEST_CASE("operator norms on reference kernels") {
  auto es = dirichlet_interval(41);
  auto ident = apply_function(es, [](double) { return 1.0; });

  CHECK(operator_norm(ident, NormType::L2) == doctest::Approx(1.0).epsilon(1e-9));

  double wmin = 1e300;
  for (double wi : es.geom->w) wmin = std::min(wmin, wi);
  CHECK(operator_norm(ident, NormType::L2ToLinf) ==
        doctest::Approx(1.0 / std::sqrt(wmin)).epsilon(1e-9));

  const double t = 0.37;
  auto heat = apply_function(es, [&](double lam) { return std::exp(-t * lam * lam); });
  CHECK(operator_norm(heat, NormType::L2) ==
        doctest::Approx(std::exp(-t * es.mu[0])).epsilon(1e-10));

  // Diagonal fast paths agree with the materialized kernel.
  auto F = apply_diag(es, [&](double lam) { return std::exp(-t * lam * lam); });
  for (auto type : {NormType::L2, NormType::L2ToLinf, NormType::L2ToLip, NormType::L1ToL2})
    CHECK(operator_norm(F, type) == doctest::Approx(operator_norm(heat, type)).epsilon(1e-9));

  // p = 2 norm of a multiplier equals the spectral sup. The diagonal path is
  // exact; power iteration on the materialized kernel can only resolve the
  // top of this spectrum to the width of its cluster.
  auto phi = [](double lam) { return lam * lam / (1.0 + lam * lam); };
  auto Fm = apply_diag(es, phi);
  CHECK(operator_norm(Fm, NormType::L2) == doctest::Approx(spectral_sup(es, phi)).epsilon(1e-12));
  auto mult = apply_function(es, phi);
  CHECK(operator_norm(mult, NormType::L2) == doctest::Approx(spectral_sup(es, phi)).epsilon(1e-4));
}

TEST_CASE("dense size limit is enforced") {
  auto mesh = build_mesh(1, 1.0, 64);
  OperatorSpec spec;
  auto op = assemble_operator(mesh, spec);
  EigenOptions opts;
  opts.dense_limit = 10;
  CHECK_THROWS_AS(eigendecompose(op, opts), config_error);
}
