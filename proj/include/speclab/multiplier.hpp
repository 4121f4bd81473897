#pragma once

#include "speclab/eigen.hpp"
#include "speclab/symbols.hpp"

namespace speclab {

enum class SharpRoute { Wave, Bessel };

/// phi(sqrt(-L)) assembled as sharp + flat under the cutoff split. The two
/// sharp routes (cosine-transform quadrature and the Bessel transference
/// formula) are independent quadratures of the same operator and are
/// cross-checked against each other on every build.
struct MultiplierBuild {
  KernelMatrix sharp;
  KernelMatrix flat;
  KernelMatrix total;  // sharp + flat, entrywise
  SpectralFunction sharp_diag;
  SpectralFunction flat_diag;
  std::string symbol;
  SharpRoute route = SharpRoute::Wave;
  CutoffSpec cut;
  int quad_steps = 4096;
  int bessel_k = 0;  // 0 for the wave route
};

/// Sharp part by quadrature of theta(t) fhat(t) cos(t sqrt(-L)) over [-a, a],
/// the symbolic delta contributing c_inf * I. Halving the quadrature step must
/// move the result by <= 1e-7 in the L2 -> L2 norm (numeric_error otherwise).
SpectralFunction build_sharp_wave_diag(const EigenSystem& es, const SymbolTables& tables,
                                       int quad_steps = 4096);
KernelMatrix build_sharp_wave(const EigenSystem& es, const SymbolTables& tables,
                              int quad_steps = 4096);

/// Sharp part by the transference formula int_0^a psi_k(t) J_{k-1/2}(t sqrt(-L)) dt,
/// k in 1..3, with geometric grading near t = 0 (|t psi_k| stays bounded).
/// Disagreement with the wave route beyond 1e-4 raises numeric_error.
SpectralFunction build_sharp_bessel_diag(const EigenSystem& es, const SymbolTables& tables,
                                         int k, int quad_steps = 2048);
KernelMatrix build_sharp_bessel(const EigenSystem& es, const SymbolTables& tables, int k,
                                int quad_steps = 2048);

/// Flat part phi^b(sqrt(-L)), computed two ways: directly from the scalar
/// quadrature of the flat transform, and through the factorization
/// (I - L)^{-s/2} psi^b(sqrt(-L)) with s = n + 2. Path disagreement beyond
/// 1e-7 raises numeric_error. Returns the direct path.
SpectralFunction build_flat_diag(const EigenSystem& es, const SymbolTables& tables);
KernelMatrix build_flat(const EigenSystem& es, const SymbolTables& tables);

MultiplierBuild build_multiplier(const EigenSystem& es, const SymbolTables& tables,
                                 SharpRoute route, int bessel_k = 2, int quad_steps = 4096);

struct SupportReport {
  double cutoff_distance = 0.0;  // speed * a + 5h
  double outside_mass = 0.0;     // |k#| mass fraction beyond it
  double tol = 1e-6;
  bool pass = false;
};

/// Near-diagonal support of the sharp kernel: weighted |k#| mass beyond
/// distance speed * a + 5h as a fraction of the total.
SupportReport support_check(const KernelMatrix& sharp, double speed, double cutoff_a,
                            double tol = 1e-6);

struct KeyLemmaProfile {
  std::vector<double> t;
  std::vector<double> value;      // I(t) = sup_y int_{d(x,y) > sqrt(t)} |k# - k_t| dx
  std::vector<bool> admissible;   // t >= h^2
  double epsilon = 0.0;
};

/// I(t) over t = eps, eps/2, ..., eps/2^levels with k_t = e^{tL} applied to
/// the first argument of k#.
KeyLemmaProfile key_lemma_profile(const EigenSystem& es, const KernelMatrix& sharp,
                                  double epsilon, int levels);

}  // namespace speclab
