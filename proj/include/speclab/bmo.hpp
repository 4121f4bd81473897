#pragma once

#include "speclab/eigen.hpp"

namespace speclab {

enum class BmoVariant { Heat, Average };

/// Ball family for the oscillation norms: all dofs as centers, radii on the
/// mesh-quantized grid {2h, 3h, ...} up to epsilon, t = radius^2.
struct BmoConfig {
  double epsilon = 0.05;
  BmoVariant variant = BmoVariant::Heat;
};

/// sup over centers y and radii r <= epsilon of the mean deviation
/// (1/|B|_w) sum_{x in B_r(y)} w_x |f(x) - (A f)(x)|, with A = e^{r^2 L}
/// (heat variant) or the ball average around the evaluation point.
double bmo_norm(const EigenSystem& es, const Field& f, const BmoConfig& cfg);

struct EpsilonIndependenceReport {
  std::vector<double> ratios;  // per corpus member, convention 0/0 -> 1
  double max_ratio = 0.0;
  double c_check = 10.0;
  bool pass = false;
};

/// ||f||_{BMO, cap sqrt(2R)} / ||f||_{BMO, cap sqrt(R)} over a corpus; the
/// caps must fit in the domain (sqrt(2R) <= diameter / 2).
EpsilonIndependenceReport epsilon_independence_check(const EigenSystem& es,
                                                     const std::vector<Field>& corpus, double R,
                                                     BmoVariant variant = BmoVariant::Heat,
                                                     double c_check = 10.0);

struct LinfBmoEstimate {
  double value = 0.0;       // max over the corpus of bmo(K f) / ||f||_inf
  double rough = 0.0;       // breakdown: random sign fields
  double bumps = 0.0;       //            localized bumps
  double eigenmodes = 0.0;  //            sup-normalized eigenvectors
};

/// Corpus lower bound for the L_inf -> BMO_L operator norm of K. Deterministic
/// given the seed; trials >= 64.
LinfBmoEstimate linf_to_bmo_norm(const EigenSystem& es, const KernelMatrix& K,
                                 const BmoConfig& cfg, int trials, unsigned seed = 12345);

struct LpEntry {
  double p = 0.0;
  bool exact = false;
  double lower = 0.0;  // exact value when exact, corpus lower bound otherwise
  double upper = 0.0;  // equals lower when exact, interpolation bound otherwise
};

/// Weighted L^p operator norms: exact for p in {1, 2, inf} (column sums,
/// spectral, row sums) and corpus lower bound plus Riesz-Thorin style upper
/// bound for intermediate p. Kernels diagonal in the eigenbasis should pass
/// their spectral sup as p2_exact; power iteration cannot split clustered
/// singular values to full precision.
std::vector<LpEntry> lp_norms(const KernelMatrix& K, const std::vector<double>& p_list,
                              int trials = 64, unsigned seed = 12345, double p2_exact = -1.0);

/// Deterministic mixed corpus (random signs, bumps, low eigenmodes) scaled to
/// unit sup norm.
std::vector<Field> bmo_corpus(const EigenSystem& es, int trials, unsigned seed);

struct BmoBallRow {
  int center = 0;
  double radius = 0.0;
  double oscillation = 0.0;
};

/// Per-ball mean oscillation rows behind bmo_norm (their sup).
std::vector<BmoBallRow> bmo_report(const EigenSystem& es, const Field& f, const BmoConfig& cfg);

}  // namespace speclab
