#pragma once

#include <complex>

namespace speclab {

/// Modified Bessel K_nu(t) for t > 0 and complex order, via the Laplace-type
/// representation K_nu(t) = int_0^inf exp(-t cosh u) cosh(nu u) du.
std::complex<double> bessel_K(std::complex<double> nu, double t);

/// K_0(t), t > 0.
double bessel_K0(double t);

/// Gamma function for complex argument (Lanczos).
std::complex<double> gamma_complex(std::complex<double> z);

/// Normalized Bessel function J_nu(lambda)/lambda^nu at half-integer order
/// nu = k - 1/2, k = 1..4, with the removable singularity at 0 filled by the
/// power series. Even in lambda.
double bessel_J_normalized(int k, double lambda);

/// Value at lambda = 0, i.e. 2^{-(k-1/2)} / Gamma(k + 1/2).
double bessel_J_normalized_zero(int k);

}  // namespace speclab
