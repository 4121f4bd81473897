#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "speclab/bmo.hpp"
#include "speclab/semigroups.hpp"

using namespace speclab;

namespace {

constexpr double kPi = 3.14159265358979323846;

EigenSystem interval_es(int n_axis, BoundaryCondition bc) {
  auto mesh = build_mesh(1, kPi, n_axis);
  OperatorSpec spec;
  spec.bc = bc;
  return eigendecompose(assemble_operator(mesh, spec));
}

}  // namespace

TEST_CASE("constants have zero oscillation under Neumann, both variants") {
  auto es = interval_es(101, BoundaryCondition::Neumann);
  Field ones(es.n(), 1.0);
  BmoConfig heat{0.12, BmoVariant::Heat};
  BmoConfig avg{0.12, BmoVariant::Average};
  CHECK(bmo_norm(es, ones, heat) <= 1e-12);
  CHECK(bmo_norm(es, ones, avg) <= 1e-14);
}

TEST_CASE("first eigenmode oscillation matches the closed form") {
  auto es = interval_es(101, BoundaryCondition::Neumann);
  const Geometry& g = *es.geom;
  const int n = es.n();
  // v_1, the first nonconstant mode: f - e^{r^2 L} f = (1 - e^{-r^2 mu_1}) v_1.
  Field v1(n);
  for (int i = 0; i < n; ++i) v1[i] = es.vecs(i, 1);
  BmoConfig cfg{0.1, BmoVariant::Heat};

  double expect = 0.0;
  for (int m = 2; m * g.h <= cfg.epsilon; ++m) {
    const double r = m * g.h;
    const double damp = 1.0 - std::exp(-r * r * es.mu[1]);
    for (int y = 0; y < n; ++y) {
      double vol = 0.0, acc = 0.0;
      for (int x = 0; x < n; ++x) {
        if (g.dist(x, y) > r) continue;
        vol += g.w[x];
        acc += g.w[x] * std::abs(v1[x]) * damp;
      }
      expect = std::max(expect, acc / vol);
    }
  }
  CHECK(bmo_norm(es, v1, cfg) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("bmo norm is monotone in the radius cap and bounded by the sup norm") {
  auto es = interval_es(101, BoundaryCondition::Dirichlet);
  Field f(es.n());
  for (int i = 0; i < es.n(); ++i) f[i] = std::sin(5.0 * es.geom->x[i][0]);
  BmoConfig small{0.08, BmoVariant::Heat};
  BmoConfig big{0.16, BmoVariant::Heat};
  const double ns = bmo_norm(es, f, small);
  const double nb = bmo_norm(es, f, big);
  CHECK(nb >= ns);

  // bmo(f) <= max_r (1 + ||e^{r^2 L}||_{inf->inf}) ||f||_inf.
  double sup = 0.0;
  for (double v : f) sup = std::max(sup, std::abs(v));
  double bound = 0.0;
  for (int m = 2; m * es.geom->h <= big.epsilon; ++m) {
    const double r = m * es.geom->h;
    const double heat_inf = operator_norm(heat_kernel(es, r * r), NormType::Linf);
    bound = std::max(bound, (1.0 + heat_inf) * sup);
  }
  CHECK(nb <= bound);
}

TEST_CASE("epsilon independence on a mixed corpus") {
  auto es = interval_es(101, BoundaryCondition::Dirichlet);
  auto corpus = bmo_corpus(es, 25, 777);
  const double R = 0.09;  // caps 0.3 and 0.42, diameter pi
  auto rep = epsilon_independence_check(es, corpus, R);
  CHECK(rep.pass);
  CHECK(rep.max_ratio <= 10.0);
  for (double r : rep.ratios) CHECK(r >= 1.0 - 1e-12);

  // Constant field under Neumann: both norms zero, ratio pinned to 1.
  auto esn = interval_es(65, BoundaryCondition::Neumann);
  std::vector<Field> ones = {Field(esn.n(), 2.5)};
  auto rep1 = epsilon_independence_check(esn, ones, R);
  CHECK(rep1.ratios[0] == 1.0);

  CHECK_THROWS_AS(epsilon_independence_check(es, corpus, 4.0), config_error);
}

TEST_CASE("Linf -> BMO estimate: identity and heat smoothing") {
  auto es = interval_es(65, BoundaryCondition::Dirichlet);
  BmoConfig cfg{0.15, BmoVariant::Heat};

  auto ident = identity_kernel(es.geom);
  auto e_id = linf_to_bmo_norm(es, ident, cfg, 64);
  CHECK(e_id.value > 0.0);

  auto h1 = heat_kernel(es, 0.1);
  auto h2 = heat_kernel(es, 0.4);
  auto e1 = linf_to_bmo_norm(es, h1, cfg, 64);
  auto e2 = linf_to_bmo_norm(es, h2, cfg, 64);
  CHECK(e1.value <= e_id.value);
  CHECK(e2.value <= e1.value);

  CHECK_THROWS_AS(linf_to_bmo_norm(es, ident, cfg, 8), config_error);
}

TEST_CASE("Lp norms: exact endpoints, interpolation sandwich") {
  auto es = interval_es(65, BoundaryCondition::Dirichlet);
  auto ident = identity_kernel(es.geom);
  const double inf = std::numeric_limits<double>::infinity();

  auto tab = lp_norms(ident, {1.0, 1.5, 2.0, 3.0, 4.0, 6.0, inf});
  for (const auto& e : tab) {
    if (e.exact) {
      CHECK(e.lower == e.upper);
      CHECK(e.lower == doctest::Approx(1.0).epsilon(1e-9));
    } else {
      CHECK(e.lower <= e.upper * (1.0 + 1e-12));
      CHECK(e.upper <= 1.0 + 1e-9);
    }
  }

  // A genuine multiplier: p = 2 equals the spectral sup; sandwich holds.
  auto phi = [](double lam) { return lam * lam / (1.0 + lam * lam); };
  auto K = apply_function(es, phi);
  auto tk = lp_norms(K, {1.0, 1.5, 2.0, 4.0, inf});
  CHECK(tk[2].lower == doctest::Approx(spectral_sup(es, phi)).epsilon(1e-4));
  for (const auto& e : tk)
    if (!e.exact) CHECK(e.lower <= e.upper * (1.0 + 1e-12));

  CHECK_THROWS_AS(lp_norms(K, {0.5}), config_error);
}
