#include "speclab/special.hpp"

#include <cmath>

#include "speclab/core.hpp"

namespace speclab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::complex<double> bessel_K(std::complex<double> nu, double t) {
  if (!(t > 0.0)) throw config_error("bessel_K: t must be positive");
  // Integrand decays like exp(-t e^u / 2); truncate once that is below 1e-320.
  const double U = std::acosh(std::max(2.0, 745.0 / t));
  const int n = std::max(400, static_cast<int>(U / 0.01));
  const double du = U / n;
  // Trapezoid; the integrand has vanishing odd derivatives at u = 0 and is
  // numerically zero at U, so the rule converges spectrally here.
  std::complex<double> sum = 0.5 * std::exp(-t);  // u = 0 term: cosh(0) = 1
  for (int i = 1; i < n; ++i) {
    const double u = i * du;
    sum += std::exp(-t * std::cosh(u)) * std::cosh(nu * u);
  }
  return sum * du;
}

double bessel_K0(double t) { return bessel_K(std::complex<double>(0.0, 0.0), t).real(); }

std::complex<double> gamma_complex(std::complex<double> z) {
  static const double p[] = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z).
    return kPi / (std::sin(kPi * z) * gamma_complex(1.0 - z));
  }
  z -= 1.0;
  std::complex<double> x = p[0];
  for (int i = 1; i < 9; ++i) x += p[i] / (z + std::complex<double>(i, 0));
  const std::complex<double> t = z + 7.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

double bessel_J_normalized_zero(int k) {
  if (k < 1 || k > 4) throw config_error("bessel_J: order index k must lie in 1..4");
  return std::pow(2.0, -(k - 0.5)) / std::tgamma(k + 0.5);
}

double bessel_J_normalized(int k, double lambda) {
  if (k < 1 || k > 4) throw config_error("bessel_J: order index k must lie in 1..4");
  const double x = std::abs(lambda);
  if (x < 0.5) {
    // Power series of lambda^{-nu} J_nu, nu = k - 1/2.
    const double q = 0.25 * x * x;
    double term = bessel_J_normalized_zero(k);
    double sum = term;
    for (int m = 1; m <= 12; ++m) {
      term *= -q / (m * (m + k - 0.5));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  // Spherical Bessel closed forms: J_{k-1/2}(x) = sqrt(2x/pi) j_{k-1}(x).
  const double s = std::sin(x), c = std::cos(x);
  double j;
  switch (k) {
    case 1: j = s / x; break;
    case 2: j = s / (x * x) - c / x; break;
    case 3: j = (3.0 / (x * x) - 1.0) * s / x - 3.0 * c / (x * x); break;
    default:
      j = (15.0 / (x * x * x) - 6.0 / x) * s / x - (15.0 / (x * x) - 1.0) * c / x;
      break;
  }
  return std::sqrt(2.0 / kPi) * j / std::pow(x, k - 1);
}

}  // namespace speclab
