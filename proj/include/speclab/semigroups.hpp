#pragma once

#include "speclab/eigen.hpp"

namespace speclab {

KernelMatrix heat_kernel(const EigenSystem& es, double t);
SpectralFunction heat_diag(const EigenSystem& es, double t);

/// Weighted mass of the negative part of a kernel relative to its total
/// absolute mass; discrete heat kernels carry a small one.
double kernel_negative_mass(const KernelMatrix& K);

KernelMatrix poisson_direct(const EigenSystem& es, double t);

/// e^{-t sqrt(-L)} through the subordination integral
///   (1/(2 sqrt(pi))) int_0^inf t e^{-t^2/4s} s^{-3/2} e^{sL} ds,
/// evaluated per eigenvalue with the substitution s = t^2/(4v^2) and refined
/// until the diagonal stabilizes. Throws numeric_error with step diagnostics
/// on non-convergence.
KernelMatrix poisson_subordinated(const EigenSystem& es, double t, int quad_steps = 2000);

/// Integral kernel of the normalized Bessel multiplier J_{k-1/2}(s sqrt(-L)).
KernelMatrix bk_kernel(const EigenSystem& es, double s, int k);
SpectralFunction bk_diag(const EigenSystem& es, double s, int k);

struct GaussianFit {
  double kappa_hat = 0.0;          // -slope of log|p| + (n/2) log t against d^2/t
  double prefactor_exponent = 0.0; // fitted power of t (target -n/2, gradient -n/2-1/2)
  double r2 = 0.0;
  int samples = 0;
  double d_min = 0.0, chi_max = 0.0;  // admissibility window actually used
};

struct GaussianFitOptions {
  double d_min_factor = 4.0;  // d >= factor * h
  double chi_max = 40.0;      // d^2/t cap (underflow guard)
  int max_pairs_per_t = 4000;
};

GaussianFit fit_gaussian_bound(const EigenSystem& es, const std::vector<double>& t_grid,
                               bool use_gradient, const GaussianFitOptions& opts = {});

struct ExponentFit {
  std::string family;
  std::string norm;
  double slope = 0.0;
  double target = 0.0;
  double residual = 0.0;  // rms residual in log-log
  std::vector<double> s;
  std::vector<double> value;
};

/// Least squares slope of log value against log s. Requires >= 5 points.
ExponentFit fit_norm_exponent(const std::function<double(double)>& family,
                              const std::vector<double>& s_grid, const std::string& family_name,
                              const std::string& norm_name, double target);

/// Scalar families F(s) realizing the semigroup norm-scaling laws, all built
/// on the spectral oracle. `kind` is one of:
///   heat-2inf, heat-2lip, poisson-2inf, poisson-2lip, resolvent-2inf,
///   L-poisson-2inf, bk-2inf, L-bk-2inf, grad-heat-sq
/// bk families take the Bessel index k; grad-heat-sq is
/// max_x sum_y w_y |grad_x p(s,x,y)|^2.
std::function<double(double)> norm_family(const EigenSystem& es, const std::string& kind,
                                          int k = 3);

/// Target exponent of `kind` in dimension n.
double norm_family_target(const std::string& kind, int n);

std::vector<double> geometric_grid(double lo, double hi, int points);

}  // namespace speclab
