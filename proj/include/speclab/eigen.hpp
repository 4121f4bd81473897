#pragma once

#include <functional>
#include <string>
#include <vector>

#include "speclab/mesh.hpp"

namespace speclab {

/// Full spectral data of -L in the weighted inner product: mu sorted
/// ascending, eigenvectors weighted-orthonormal. This is the exact oracle
/// behind every function of sqrt(-L) in the project.
struct EigenSystem {
  GeometryPtr geom;
  std::vector<double> mu;  // eigenvalues of -L, ascending, >= -1e-9
  Matrix vecs;             // vecs(i, k) = v_k(x_i)
  Matrix vecs_t;           // transposed copy, row k = v_k (kernel assembly order)
  int sweeps = 0;

  int n() const { return static_cast<int>(mu.size()); }
  double rho() const { return mu.front(); }  // bottom of Spec(-L); not forced positive
  double lambda_max() const;                 // sqrt of the largest eigenvalue

  Field project_apply(const std::vector<double>& diag, const Field& f) const;
};

/// Integral kernel with the convention Tf(x_i) = sum_j w_j K(i,j) f(x_j).
struct KernelMatrix {
  GeometryPtr geom;
  Matrix K;

  int n() const { return K.rows(); }
  Field apply(const Field& f) const;
};

/// A function of sqrt(-L) in diagonal form: cheap to combine and to take
/// row-norms of without materializing the N x N kernel.
struct SpectralFunction {
  const EigenSystem* es = nullptr;
  std::vector<double> diag;  // value at sqrt(mu_k)

  KernelMatrix materialize() const;
};

enum class NormType { L1, L2, Linf, L2ToLinf, L1ToL2, L2ToLip };

struct EigenOptions {
  int dense_limit = 4096;
  int max_sweeps = 60;
  double tol = 1e-14;  // relative off-diagonal Frobenius target
};

EigenSystem eigendecompose(const DiscreteOperator& op, const EigenOptions& opts = {});

/// K = sum_k f(sqrt(mu_k)) v_k v_k^T. Throws numeric_error naming the
/// offending eigenvalue if f is not finite on the spectrum.
KernelMatrix apply_function(const EigenSystem& es, const std::function<double(double)>& f);
SpectralFunction apply_diag(const EigenSystem& es, const std::function<double(double)>& f,
                            const std::string& what = "f");

double operator_norm(const KernelMatrix& K, NormType type);
double operator_norm(const SpectralFunction& F, NormType type);

/// Composition (A o B)(i,j) = sum_m A(i,m) w_m B(m,j).
KernelMatrix kernel_compose(const KernelMatrix& A, const KernelMatrix& B);

KernelMatrix identity_kernel(const GeometryPtr& geom);

/// Largest |f(sqrt(mu_k))| over the spectrum; the exact L2 -> L2 norm.
double spectral_sup(const EigenSystem& es, const std::function<double(double)>& f);

}  // namespace speclab
