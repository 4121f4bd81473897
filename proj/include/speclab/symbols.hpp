#pragma once

#include <functional>
#include <string>
#include <vector>

#include "speclab/core.hpp"

namespace speclab {

/// Even smooth cutoff: theta == 1 on [-a/2, a/2], supp theta in (-a, a),
/// built from the exp(-1/x) transition so runs are reproducible.
struct CutoffSpec {
  double a = 1.0;
  double theta(double t) const;
  double theta_prime(double t) const;
};

/// An even symbol phi(lambda) of product type phi = c_inf + decaying part.
/// The constant part is carried symbolically throughout (it contributes
/// c_inf * Identity to any multiplier); fhat_closed, when set, evaluates the
/// cosine transform of the decaying part pointwise.
struct Symbol {
  std::string name;
  double c_inf = 0.0;
  int decay_order = 0;           // m with |phi - c_inf| <~ (1+lambda)^{-m}
  bool oscillatory_at_zero = false;  // transform has a non-integrable oscillating
                                     // finite part at t = 0 (imaginary-power type)
  std::function<double(double)> eval;         // phi(lambda) for lambda >= 0
  std::function<double(double)> fhat_closed;  // optional, t != 0

  double phi(double lam) const { return eval(std::abs(lam)); }
  double decaying(double lam) const { return eval(std::abs(lam)) - c_inf; }
};

std::vector<Symbol> builtin_symbols();
const Symbol& find_symbol(const std::vector<Symbol>& list, const std::string& name);

/// Sampled transform tables on a symmetric uniform midpoint grid over [-T, T]
/// (the grid never contains t = 0, where several transforms are singular).
struct SymbolTables {
  Symbol source;
  CutoffSpec cut;
  bool has_split = false;
  double T = 0.0;
  double dt = 0.0;
  std::vector<double> t;
  std::vector<double> fhat;        // decaying part only
  std::vector<double> fhat_sharp;  // theta * fhat, exact zeros outside [-a, a]
  std::vector<double> fhat_flat;   // fhat - fhat_sharp
  std::vector<std::vector<double>> psi;  // psi[k], k = 0..k_max, on the same grid
};

/// Samples the transform of the decaying part. `steps` is the lambda-space
/// quadrature resolution of the generic transform; symbols with fhat_closed
/// ignore it. samples_per_unit fixes the t-grid density (>= 4096 keeps the
/// default grid fine enough for the derivative ladder).
SymbolTables fourier_transform(const Symbol& sym, double T, int steps,
                               int samples_per_unit = 4096);

/// Populates fhat_sharp / fhat_flat. Additivity is exact by construction.
void split(SymbolTables& tables, const CutoffSpec& cut);

/// psi_k = prod_{j=1..k} (-t d/dt + 2j - 2) applied to fhat_sharp with
/// 4th-order central differences, k = 0..k_max. Throws numeric_error if the
/// grid cannot support the differentiation.
void psi_ladder(SymbolTables& tables, int k_max);

/// Pointwise transform of the decaying part at t (closed form when available,
/// otherwise a tapered Filon cosine transform of eval - c_inf).
double fhat_value(const Symbol& sym, double t, int steps = 120000);

/// Normalized Bessel function J_{k-1/2}(lambda) / lambda^{k-1/2}, k = 1..4.
double bessel_J(int k, double lambda);

/// Independent oracle: the (1-s^2)^{k-1} cosine moment, normalized to match
/// bessel_J at lambda = 0.
double bessel_J_moment(int k, double lambda, int steps = 4000);

/// phi^b(lambda): transform of (1 - theta) * fhat over |t| >= a/2. Never
/// includes the symbolic constant part.
std::vector<double> flat_symbol_values(const Symbol& sym, const CutoffSpec& cut,
                                       const std::vector<double>& lambdas);
double flat_symbol_value(const Symbol& sym, const CutoffSpec& cut, double lambda);

/// phi^#(lambda): transform of theta * fhat over [-a, a] plus the constant
/// part. Symbols flagged oscillatory_at_zero are integrated in the anchored
/// form phi^#(0) + int theta fhat (cos(t lambda) - 1) dt, which is their
/// finite-part meaning.
std::vector<double> sharp_symbol_values(const Symbol& sym, const CutoffSpec& cut,
                                        const std::vector<double>& lambdas,
                                        int quad_steps = 4096);
double sharp_symbol_value(const Symbol& sym, const CutoffSpec& cut, double lambda,
                          int quad_steps = 4096);

/// psi_k(t) evaluated directly from the symbol by differentiation in log t;
/// resolves scales far below any uniform table. Used by the Bessel-route
/// quadrature near t = 0.
double psi_value(const Symbol& sym, const CutoffSpec& cut, int k, double t);

/// Sampled S^0_1 certificate: sup over a lambda grid of (1+lambda)^k |phi^(k)|.
struct S01Certificate {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
};
S01Certificate s01_certificate(const Symbol& sym, double lambda_max);

/// sup over [t_lo, a] of |t psi_k(t)| from the tables.
double psi_weighted_sup(const SymbolTables& tables, int k, double t_lo);

}  // namespace speclab
