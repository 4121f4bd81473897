#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "speclab/mesh.hpp"

using namespace speclab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("mesh weights sum to the domain volume") {
  auto m1 = build_mesh(1, kPi, 201);
  const double s1 = std::accumulate(m1.weights.begin(), m1.weights.end(), 0.0);
  CHECK(std::abs(s1 - kPi) <= 1e-12);

  auto m2 = build_mesh(2, 1.0, 41);
  const double s2 = std::accumulate(m2.weights.begin(), m2.weights.end(), 0.0);
  CHECK(std::abs(s2 - 1.0) <= 1e-12);
}

TEST_CASE("mesh distances are metric") {
  auto m = build_mesh(1, 1.0, 9);
  CHECK(m.dist(0, 8) == 1.0);

  auto m2 = build_mesh(2, 1.0, 9);
  const int n = m2.size();
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int trial = 0; trial < 500; ++trial) {
    const int a = pick(rng), b = pick(rng), c = pick(rng);
    CHECK(m2.dist(a, b) == m2.dist(b, a));
    CHECK(m2.dist(a, a) == 0.0);
    CHECK(m2.dist(a, c) <= m2.dist(a, b) + m2.dist(b, c) + 1e-14);
  }
}

TEST_CASE("mesh boundary mask marks exactly the boundary") {
  auto m = build_mesh(2, 1.0, 9);
  int count = 0;
  for (int i = 0; i < m.nx; ++i)
    for (int j = 0; j < m.ny; ++j) {
      const bool expect = i == 0 || j == 0 || i == m.nx - 1 || j == m.ny - 1;
      CHECK(bool(m.boundary_mask[m.index(i, j)]) == expect);
      count += m.boundary_mask[m.index(i, j)];
    }
  CHECK(count == 4 * (9 - 1));
}

TEST_CASE("mesh rejects bad configuration") {
  CHECK_THROWS_AS(build_mesh(1, -1.0, 21), config_error);
  CHECK_THROWS_AS(build_mesh(1, 1.0, 4), config_error);
  CHECK_THROWS_AS(build_mesh(3, 1.0, 21), config_error);
}

TEST_CASE("operator is weighted self-adjoint and negative semidefinite") {
  auto mesh = build_mesh(1, kPi, 41);
  OperatorSpec spec;
  spec.bc = BoundaryCondition::Neumann;
  spec.a_fn = [](double x, double) { return 1.0 + 0.5 * std::sin(x); };
  spec.H.assign(mesh.size(), 0.0);
  for (int i = 0; i < mesh.size(); ++i) spec.H[i] = 0.3 * (1.0 + std::cos(mesh.points[i][0]));
  auto op = assemble_operator(mesh, spec);

  const int n = op.n();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      worst = std::max(worst, std::abs(op.geom->w[i] * op.matrix(i, j) - op.geom->w[j] * op.matrix(j, i)));
  CHECK(worst <= 1e-12);

  std::mt19937 rng(11);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 100; ++trial) {
    Field f(n);
    for (auto& v : f) v = gauss(rng);
    const Field Lf = op.apply(f);
    double q = 0.0;
    for (int i = 0; i < n; ++i) q += op.geom->w[i] * (-Lf[i]) * f[i];
    CHECK(q >= -1e-10);
  }
}

TEST_CASE("Dirichlet eliminates the boundary; Neumann keeps it") {
  auto mesh = build_mesh(2, 1.0, 9);
  OperatorSpec spec;
  spec.bc = BoundaryCondition::Dirichlet;
  auto opd = assemble_operator(mesh, spec);
  CHECK(opd.n() == 7 * 7);
  spec.bc = BoundaryCondition::Neumann;
  auto opn = assemble_operator(mesh, spec);
  CHECK(opn.n() == 9 * 9);
  Field ones(opn.n(), 1.0);
  const Field Lones = opn.apply(ones);
  double m = 0.0;
  for (double v : Lones) m = std::max(m, std::abs(v));
  CHECK(m <= 1e-12);
}

TEST_CASE("potential shifts the operator diagonally") {
  auto mesh = build_mesh(1, kPi, 33);
  OperatorSpec base;
  base.bc = BoundaryCondition::Dirichlet;
  auto op0 = assemble_operator(mesh, base);
  OperatorSpec shifted = base;
  shifted.H.assign(mesh.size(), 2.5);
  auto opc = assemble_operator(mesh, shifted);
  for (int i = 0; i < op0.n(); ++i)
    for (int j = 0; j < op0.n(); ++j) {
      const double expect = op0.matrix(i, j) - (i == j ? 2.5 : 0.0);
      CHECK(std::abs(opc.matrix(i, j) - expect) <= 1e-14);
    }
}

TEST_CASE("operator rejects bad coefficients") {
  auto mesh = build_mesh(1, 1.0, 21);
  OperatorSpec spec;
  spec.a_const = 0.0;
  CHECK_THROWS_AS(assemble_operator(mesh, spec), config_error);
  spec.a_const = 1.0;
  spec.H.assign(mesh.size(), -0.1);
  CHECK_THROWS_AS(assemble_operator(mesh, spec), config_error);
}

TEST_CASE("rescaling transforms metric quantities exactly") {
  auto mesh = build_mesh(1, kPi, 33);
  OperatorSpec spec;
  spec.bc = BoundaryCondition::Dirichlet;
  auto op = assemble_operator(mesh, spec);

  auto same = rescale_operator(op, 1.0);
  CHECK(same.matrix(3, 3) == op.matrix(3, 3));
  CHECK(same.geom->h == op.geom->h);

  auto doubled = rescale_operator(op, 2.0);
  CHECK(doubled.geom->h == 2.0 * op.geom->h);
  CHECK(doubled.geom->w[5] == 2.0 * op.geom->w[5]);
  CHECK(doubled.geom->dist(0, 5) == 2.0 * op.geom->dist(0, 5));

  auto back = rescale_operator(doubled, 0.5);
  double worst = 0.0;
  for (int i = 0; i < op.n(); ++i)
    for (int j = 0; j < op.n(); ++j)
      worst = std::max(worst, std::abs(back.matrix(i, j) - op.matrix(i, j)));
  CHECK(worst <= 1e-12);
  CHECK_THROWS_AS(rescale_operator(op, -1.0), config_error);
}
