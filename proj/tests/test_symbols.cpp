#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "speclab/special.hpp"
#include "speclab/symbols.hpp"

using namespace speclab;

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kSqrt2OverPi = std::sqrt(2.0 / kPi);

// Independent transform oracle: two integrations by parts turn the cosine
// transform of an even decaying f (with f'(0) = 0) into the absolutely
// convergent integral
//   int_0^inf f cos(t lam) dlam = -(1/t^2) int_0^inf f'' cos(t lam) dlam,
// evaluated by Simpson with an analytic second derivative.
double fhat_oracle(const std::function<double(double)>& f2, double t, double Lambda, double h) {
  int n = static_cast<int>(Lambda / h);
  if (n % 2) ++n;
  const double step = Lambda / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double lam = i * step;
    const double wt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += wt * f2(lam) * std::cos(t * lam);
  }
  acc *= step / 3.0;
  return -kSqrt2OverPi * acc / (t * t);
}

}  // namespace

TEST_CASE("cutoff profile matches its defining constraints") {
  CutoffSpec cut;
  CHECK(cut.theta(0.0) == 1.0);
  CHECK(cut.theta(0.5) == 1.0);
  CHECK(cut.theta(-0.3) == 1.0);
  CHECK(cut.theta(1.0) == 0.0);
  CHECK(cut.theta(2.0) == 0.0);
  for (double t = 0.51; t < 1.0; t += 0.017) {
    CHECK(cut.theta(t) >= 0.0);
    CHECK(cut.theta(t) <= 1.0);
    CHECK(cut.theta(t) == cut.theta(-t));
    const double h = 1e-6;
    const double fd = (cut.theta(t + h) - cut.theta(t - h)) / (2 * h);
    CHECK(std::abs(cut.theta_prime(t) - fd) <= 1e-5 * (1.0 + std::abs(fd)));
  }
}

TEST_CASE("builtin transforms match the quadrature oracle") {
  auto syms = builtin_symbols();

  const Symbol& highpass = find_symbol(syms, "highpass");
  for (double t : {0.5, 1.0, 2.0, 4.0}) {
    // f = -(1+lam^2)^{-1}: f'' = 2/u^2 - 8 lam^2/u^3, u = 1 + lam^2.
    const double oracle = fhat_oracle(
        [](double lam) {
          const double u = 1.0 + lam * lam;
          return 2.0 / (u * u) - 8.0 * lam * lam / (u * u * u);
        },
        t, 800.0, 5e-3);
    CHECK(std::abs(highpass.fhat_closed(t) - oracle) <= 1e-7);
    CHECK(std::abs(highpass.fhat_closed(t) + std::sqrt(kPi / 2) * std::exp(-t)) <= 1e-12);
  }

  const Symbol& gauss = find_symbol(syms, "gauss");
  for (double t : {0.3, 1.0, 3.0}) {
    // Direct Simpson; the integrand is Schwartz.
    double acc = 0.0;
    const int n = 20000;
    const double step = 12.0 / n;
    for (int i = 0; i <= n; ++i) {
      const double lam = i * step;
      const double wt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      acc += wt * std::exp(-lam * lam) * std::cos(t * lam);
    }
    acc *= kSqrt2OverPi * step / 3.0;
    CHECK(std::abs(gauss.fhat_closed(t) - acc) <= 1e-10);
    CHECK(std::abs(gauss.fhat_closed(t) - std::exp(-0.25 * t * t) / std::sqrt(2.0)) <= 1e-14);
  }

  const Symbol& invsqrt = find_symbol(syms, "invsqrt");
  for (double t : {0.5, 1.0, 2.0}) {
    // f = u^{-1/2}: f'' = -u^{-3/2} + 3 lam^2 u^{-5/2}.
    const double oracle = fhat_oracle(
        [](double lam) {
          const double u = 1.0 + lam * lam;
          return -std::pow(u, -1.5) + 3.0 * lam * lam * std::pow(u, -2.5);
        },
        t, 6000.0, 5e-3);
    CHECK(std::abs(invsqrt.fhat_closed(t) - oracle) <= 2e-7);
  }
}

TEST_CASE("imaginary-power transforms match their gamma-function asymptotics") {
  // Small-t form of the analytic continuation, derived purely from the K_nu
  // expansion: the transform behaves like
  //   sqrt(2/pi) Re[ sqrt(pi)/2 ( Gamma(-1/2 - ig)/Gamma(-ig)
  //                 + Gamma(1/2 + ig)/Gamma(-ig) (t/2)^{-1-2ig} ) ].
  auto syms = builtin_symbols();
  for (double gamma : {0.5, 1.0}) {
    const Symbol& cl = find_symbol(syms, gamma == 0.5 ? "coslog-half" : "coslog-one");
    const std::complex<double> ig(0.0, gamma);
    const std::complex<double> c0 =
        0.5 * std::sqrt(kPi) * gamma_complex(-0.5 - ig) / gamma_complex(-ig);
    const std::complex<double> c1 =
        0.5 * std::sqrt(kPi) * gamma_complex(0.5 + ig) / gamma_complex(-ig);
    for (double t : {1e-3, 1e-4, 1e-5}) {
      const std::complex<double> osc =
          c1 * std::polar(2.0 / t, -2.0 * gamma * std::log(0.5 * t));
      const double asym = kSqrt2OverPi * (c0 + osc).real();
      CHECK(std::abs(cl.fhat_closed(t) - asym) <= 1e-2 * std::abs(asym) + 1e-3);
    }
  }
}

TEST_CASE("generic transform path agrees with closed forms") {
  auto syms = builtin_symbols();
  Symbol hp_numeric = find_symbol(syms, "highpass");
  const auto closed = hp_numeric.fhat_closed;
  hp_numeric.fhat_closed = nullptr;
  for (double t : {0.5, 1.0, 3.0, 6.0})
    CHECK(std::abs(fhat_value(hp_numeric, t) - closed(t)) <= 1e-7);

  Symbol g_numeric = find_symbol(syms, "gauss");
  const auto gclosed = g_numeric.fhat_closed;
  g_numeric.fhat_closed = nullptr;
  for (double t : {0.5, 2.0, 5.0})
    CHECK(std::abs(fhat_value(g_numeric, t) - gclosed(t)) <= 1e-8);

  Symbol bad = find_symbol(syms, "invsqrt");
  bad.fhat_closed = nullptr;  // decay_order 1: not absolutely integrable
  CHECK_THROWS_AS(fhat_value(bad, 1.0), config_error);
}

TEST_CASE("tables: constant symbol is pure delta, split is exact") {
  auto syms = builtin_symbols();
  auto tab = fourier_transform(find_symbol(syms, "one"), 8.0, 2000, 512);
  for (double v : tab.fhat) CHECK(v == 0.0);
  CHECK(tab.source.c_inf == 1.0);

  auto tab2 = fourier_transform(find_symbol(syms, "highpass"), 8.0, 2000, 512);
  CutoffSpec cut;
  split(tab2, cut);
  for (size_t i = 0; i < tab2.t.size(); ++i) {
    CHECK(tab2.fhat_sharp[i] + tab2.fhat_flat[i] == tab2.fhat[i]);
    if (std::abs(tab2.t[i]) >= cut.a) CHECK(tab2.fhat_sharp[i] == 0.0);
  }

  // Degenerate wide cutoff: everything lands in the sharp part.
  CutoffSpec wide;
  wide.a = 1e6;
  auto tab3 = fourier_transform(find_symbol(syms, "highpass"), 8.0, 2000, 512);
  split(tab3, wide);
  for (double v : tab3.fhat_flat) CHECK(v == 0.0);

  CHECK_THROWS_AS(fourier_transform(find_symbol(syms, "gauss"), 4.0, 2000, 512), config_error);
}

TEST_CASE("psi ladder: level zero, analytic level one, weighted sup") {
  auto syms = builtin_symbols();
  auto tab = fourier_transform(find_symbol(syms, "gauss"), 8.0, 2000, 4096);
  CutoffSpec cut;
  split(tab, cut);
  psi_ladder(tab, 3);

  for (size_t i = 0; i < tab.t.size(); ++i) CHECK(tab.psi[0][i] == tab.fhat_sharp[i]);

  // psi_1 = -t d/dt [theta fhat]; fhat = exp(-t^2/4)/sqrt(2).
  double worst = 0.0;
  for (size_t i = 0; i < tab.t.size(); ++i) {
    const double t = tab.t[i];
    if (std::abs(t) > cut.a) continue;
    const double fh = std::exp(-0.25 * t * t) / std::sqrt(2.0);
    const double dfh = -0.5 * t * fh;
    const double exact = -t * (cut.theta_prime(t) * fh + cut.theta(t) * dfh);
    worst = std::max(worst, std::abs(tab.psi[1][i] - exact));
  }
  CHECK(worst <= 1e-6);

  for (int k = 0; k <= 3; ++k) {
    const double sup = psi_weighted_sup(tab, k, 1e-3);
    CHECK(sup >= 0.0);
    CHECK(std::isfinite(sup));
  }

  // Coarse grids must be rejected.
  auto coarse = fourier_transform(find_symbol(syms, "gauss"), 8.0, 2000, 512);
  split(coarse, cut);
  CHECK_THROWS_AS(psi_ladder(coarse, 3), numeric_error);
}

TEST_CASE("psi_value agrees with the table ladder away from zero") {
  auto syms = builtin_symbols();
  for (const char* name : {"gauss", "highpass", "coslog-half"}) {
    const Symbol& sym = find_symbol(syms, name);
    auto tab = fourier_transform(sym, 8.0, 2000, 4096);
    CutoffSpec cut;
    split(tab, cut);
    psi_ladder(tab, 3);
    double scale = 0.0;
    for (double v : tab.psi[2]) scale = std::max(scale, std::abs(v));
    for (size_t i = 0; i < tab.t.size(); i += 97) {
      const double t = tab.t[i];
      if (t < 0.05 || t > 0.98) continue;
      CHECK(std::abs(psi_value(sym, cut, 2, t) - tab.psi[2][i]) <= 2e-5 * scale);
    }
  }
}

TEST_CASE("normalized Bessel functions: values, limits, moment oracle") {
  CHECK(std::abs(bessel_J(1, 0.0) - std::sqrt(2.0 / kPi)) <= 1e-14);
  CHECK(std::abs(bessel_J(1, kPi)) <= 1e-14);  // sin(pi)/pi scaled
  CHECK(std::abs(bessel_J(2, 0.0) - std::sqrt(2.0 / kPi) / 3.0) <= 1e-14);

  // Both branches around the series/closed-form switch agree with the oracle.
  for (int k = 1; k <= 4; ++k)
    for (double lam : {0.4999, 0.5001})
      CHECK(std::abs(bessel_J(k, lam) - bessel_J_moment(k, lam, 20000)) <= 1e-10);

  for (int k = 1; k <= 4; ++k)
    for (double lam = 0.0; lam <= 50.0; lam += 1.7)
      CHECK(std::abs(bessel_J(k, lam) - bessel_J_moment(k, lam, 20000)) <= 1e-8);

  CHECK_THROWS_AS(bessel_J(0, 1.0), config_error);
  CHECK_THROWS_AS(bessel_J(5, 1.0), config_error);
}

TEST_CASE("S01 certificates of the builtins are finite and flat for the constant") {
  auto syms = builtin_symbols();
  for (const auto& sym : syms) {
    auto cert = s01_certificate(sym, 100.0);
    CHECK(std::isfinite(cert.c0));
    CHECK(std::isfinite(cert.c1));
    CHECK(std::isfinite(cert.c2));
    CHECK(cert.c0 <= 1.0 + 1e-12);
  }
  auto cert1 = s01_certificate(find_symbol(syms, "one"), 100.0);
  CHECK(cert1.c1 == 0.0);
  CHECK(cert1.c2 == 0.0);
}

TEST_CASE("Parseval spot check for the Gaussian symbol") {
  auto syms = builtin_symbols();
  const Symbol& gauss = find_symbol(syms, "gauss");
  // (1/sqrt(2pi)) int fhat(t) cos(t lam) dt over the line reproduces phi.
  for (double lam : {0.0, 0.5, 1.5, 3.0}) {
    double acc = 0.0;
    const int n = 40000;
    const double step = 30.0 / n;
    for (int i = 0; i <= n; ++i) {
      const double t = i * step;
      const double wt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      acc += wt * gauss.fhat_closed(t) * std::cos(t * lam);
    }
    acc *= kSqrt2OverPi * step / 3.0;
    CHECK(std::abs(acc - gauss.eval(lam)) <= 1e-7);
  }
}

TEST_CASE("sharp + flat reconstructs every builtin symbol") {
  auto syms = builtin_symbols();
  CutoffSpec cut;
  std::vector<double> lambdas = {0.0, 0.3, 1.0, 2.5, 7.0, 20.0, 60.0, 127.0, 254.0};
  for (const auto& sym : syms) {
    const auto sharp = sharp_symbol_values(sym, cut, lambdas);
    const auto flat = flat_symbol_values(sym, cut, lambdas);
    for (size_t i = 0; i < lambdas.size(); ++i) {
      const double recon = sharp[i] + flat[i];
      const double exact = sym.phi(lambdas[i]);
      INFO(sym.name << " at lambda = " << lambdas[i]);
      CHECK(std::abs(recon - exact) <= 3e-6);
    }
  }
}

TEST_CASE("flat part of the pure constant vanishes") {
  auto syms = builtin_symbols();
  CutoffSpec cut;
  const auto flat = flat_symbol_values(find_symbol(syms, "one"), cut, {0.0, 1.0, 10.0});
  for (double v : flat) CHECK(std::abs(v) <= 1e-14);
  const auto sharp = sharp_symbol_values(find_symbol(syms, "one"), cut, {0.0, 1.0, 10.0});
  for (double v : sharp) CHECK(std::abs(v - 1.0) <= 1e-12);
}
