#include "speclab/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace speclab {

namespace {

// Cyclic Jacobi with the classic small-rotation update. A is destroyed;
// eigenvectors accumulate as rows of vt. Deterministic: fixed sweep order,
// no pivot search.
int jacobi(Matrix& A, Matrix& vt, double tol, int max_sweeps) {
  const int n = A.rows();
  double fro2 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) fro2 += A(i, j) * A(i, j);
  const double stop = tol * std::sqrt(fro2);

  auto offdiag = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += 2.0 * A(i, j) * A(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    const double off = offdiag();
    if (off <= stop) return sweep;
    // Skip rotations well below the current off-diagonal scale; they get
    // revisited once the rest of the matrix has decayed.
    const double thresh = sweep < 3 ? 0.1 * off / n : 0.0;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (std::abs(apq) <= thresh) continue;
        const double app = A(p, p), aqq = A(q, q);
        if (std::abs(apq) < 1e-300) {
          A(p, q) = A(q, p) = 0.0;
          continue;
        }
        const double theta = 0.5 * (aqq - app) / apq;
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        double* rp = A.row(p);
        double* rq = A.row(q);
        for (int j = 0; j < n; ++j) {
          const double ap = rp[j], aq = rq[j];
          rp[j] = c * ap - s * aq;
          rq[j] = s * ap + c * aq;
        }
        for (int i = 0; i < n; ++i) {
          const double ap = A(i, p), aq = A(i, q);
          A(i, p) = c * ap - s * aq;
          A(i, q) = s * ap + c * aq;
        }
        A(p, q) = 0.0;
        A(q, p) = 0.0;

        double* vp = vt.row(p);
        double* vq = vt.row(q);
        for (int j = 0; j < n; ++j) {
          const double xp = vp[j], xq = vq[j];
          vp[j] = c * xp - s * xq;
          vq[j] = s * xp + c * xq;
        }
      }
    }
  }
  return -sweep;
}

}  // namespace

double EigenSystem::lambda_max() const { return std::sqrt(std::max(0.0, mu.back())); }

Field EigenSystem::project_apply(const std::vector<double>& diag, const Field& f) const {
  const int N = n();
  Field coeff(N, 0.0);
  const auto& w = geom->w;
  for (int k = 0; k < N; ++k) {
    const double* vk = vecs_t.row(k);
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += w[i] * vk[i] * f[i];
    coeff[k] = diag[k] * s;
  }
  Field out(N, 0.0);
  for (int k = 0; k < N; ++k) {
    if (coeff[k] == 0.0) continue;
    const double* vk = vecs_t.row(k);
    const double ck = coeff[k];
    for (int i = 0; i < N; ++i) out[i] += ck * vk[i];
  }
  return out;
}

Field KernelMatrix::apply(const Field& f) const {
  const int N = n();
  const auto& w = geom->w;
  Field wf(N);
  for (int i = 0; i < N; ++i) wf[i] = w[i] * f[i];
  Field out(N, 0.0);
  for (int i = 0; i < N; ++i) {
    const double* row = K.row(i);
    double s = 0.0;
    for (int j = 0; j < N; ++j) s += row[j] * wf[j];
    out[i] = s;
  }
  return out;
}

EigenSystem eigendecompose(const DiscreteOperator& op, const EigenOptions& opts) {
  const int n = op.n();
  if (n > opts.dense_limit)
    throw config_error("eigendecompose: problem size exceeds the dense limit");

  // Symmetrize -L in the weighted inner product: B = W^{1/2} (-L) W^{-1/2}.
  Matrix B(n, n);
  std::vector<double> sqw(n);
  for (int i = 0; i < n; ++i) sqw[i] = std::sqrt(op.geom->w[i]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = -op.matrix(i, j) * sqw[i] / sqw[j];
  // Enforce exact symmetry before rotating; the weighted symmetry of L makes
  // the asymmetry pure rounding.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double s = 0.5 * (B(i, j) + B(j, i));
      B(i, j) = s;
      B(j, i) = s;
    }

  Matrix vt(n, n);
  for (int i = 0; i < n; ++i) vt(i, i) = 1.0;
  const int sweeps = jacobi(B, vt, opts.tol, opts.max_sweeps);
  if (sweeps < 0)
    throw numeric_error("eigendecompose: Jacobi did not converge in " +
                        std::to_string(-sweeps) + " sweeps");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = B(i, i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });

  EigenSystem es;
  es.geom = op.geom;
  es.sweeps = sweeps;
  es.mu.resize(n);
  es.vecs = Matrix(n, n);
  es.vecs_t = Matrix(n, n);
  for (int k = 0; k < n; ++k) {
    const int src = order[k];
    es.mu[k] = d[src];
    // Un-scale to weighted orthonormality and fix the sign so output is
    // reproducible: largest-magnitude component positive.
    int imax = 0;
    double amax = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = vt(src, i) / sqw[i];
      if (std::abs(v) > amax) {
        amax = std::abs(v);
        imax = i;
      }
    }
    const double sign = vt(src, imax) / sqw[imax] >= 0.0 ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) {
      const double v = sign * vt(src, i) / sqw[i];
      es.vecs(i, k) = v;
      es.vecs_t(k, i) = v;
    }
  }
  if (es.mu.front() < -1e-9)
    throw numeric_error("eigendecompose: -L has an eigenvalue below -1e-9: " +
                        std::to_string(es.mu.front()));
  return es;
}

SpectralFunction apply_diag(const EigenSystem& es, const std::function<double(double)>& f,
                            const std::string& what) {
  SpectralFunction F;
  F.es = &es;
  F.diag.resize(es.n());
  for (int k = 0; k < es.n(); ++k) {
    const double lam = std::sqrt(std::max(0.0, es.mu[k]));
    const double v = f(lam);
    if (!std::isfinite(v))
      throw numeric_error("apply_function: " + what + " is not finite at mu_k = " +
                          std::to_string(es.mu[k]));
    F.diag[k] = v;
  }
  return F;
}

KernelMatrix SpectralFunction::materialize() const {
  const int n = es->n();
  KernelMatrix out;
  out.geom = es->geom;
  out.K = Matrix(n, n);
  for (int k = 0; k < n; ++k) {
    const double dk = diag[k];
    if (dk == 0.0) continue;
    const double* vk = es->vecs_t.row(k);
    for (int i = 0; i < n; ++i) {
      const double s = dk * vk[i];
      if (s == 0.0) continue;
      double* row = out.K.row(i);
      for (int j = 0; j < n; ++j) row[j] += s * vk[j];
    }
  }
  return out;
}

KernelMatrix apply_function(const EigenSystem& es, const std::function<double(double)>& f) {
  return apply_diag(es, f).materialize();
}

double spectral_sup(const EigenSystem& es, const std::function<double(double)>& f) {
  double m = 0.0;
  for (double mu : es.mu) m = std::max(m, std::abs(f(std::sqrt(std::max(0.0, mu)))));
  return m;
}

namespace {

double power_iteration_l2(const KernelMatrix& km) {
  // Largest singular value of T = K W in the weighted inner product, i.e. of
  // the symmetric A = W^{1/2} K W^{1/2}. Iterate with A^T A to cover kernels
  // that are only symmetric up to rounding.
  const int n = km.n();
  const auto& w = km.geom->w;
  std::vector<double> sqw(n);
  for (int i = 0; i < n; ++i) sqw[i] = std::sqrt(w[i]);

  auto apply_A = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (int i = 0; i < n; ++i) {
      const double* row = km.K.row(i);
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += row[j] * sqw[j] * x[j];
      y[i] = sqw[i] * s;
    }
  };
  auto apply_At = [&](const std::vector<double>& x, std::vector<double>& y) {
    std::fill(y.begin(), y.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      const double* row = km.K.row(i);
      const double xi = sqw[i] * x[i];
      if (xi == 0.0) continue;
      for (int j = 0; j < n; ++j) y[j] += row[j] * xi;
    }
    for (int j = 0; j < n; ++j) y[j] *= sqw[j];
  };

  std::vector<double> x(n), y(n), z(n);
  for (int i = 0; i < n; ++i) x[i] = 1.0 + 1e-3 * std::sin(2.39996322972865332 * (i + 1));
  double sigma = 0.0;
  for (int it = 0; it < 20000; ++it) {
    apply_A(x, y);
    apply_At(y, z);
    double nz = 0.0;
    for (double v : z) nz += v * v;
    nz = std::sqrt(nz);
    if (nz == 0.0) return 0.0;
    double dot = 0.0, nx = 0.0;
    for (int i = 0; i < n; ++i) {
      dot += x[i] * z[i];
      nx += x[i] * x[i];
    }
    const double next = std::sqrt(std::max(0.0, dot / nx));
    for (int i = 0; i < n; ++i) x[i] = z[i] / nz;
    if (it > 2 && std::abs(next - sigma) <= 1e-12 * (1.0 + next)) return next;
    sigma = next;
  }
  return sigma;
}

double lip_norm_rows(const Geometry& g, const Matrix& K) {
  double best = 0.0;
  for (const auto& [i, j] : g.adjacent) {
    const double* ri = K.row(i);
    const double* rj = K.row(j);
    double s = 0.0;
    for (int m = 0; m < K.cols(); ++m) {
      const double d = ri[m] - rj[m];
      s += g.w[m] * d * d;
    }
    best = std::max(best, std::sqrt(s) / g.dist(i, j));
  }
  return best;
}

}  // namespace

double operator_norm(const KernelMatrix& km, NormType type) {
  const int n = km.n();
  const auto& w = km.geom->w;
  switch (type) {
    case NormType::L1: {
      double best = 0.0;
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += w[i] * std::abs(km.K(i, j));
        best = std::max(best, s);
      }
      return best;
    }
    case NormType::Linf: {
      double best = 0.0;
      for (int i = 0; i < n; ++i) {
        const double* row = km.K.row(i);
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += w[j] * std::abs(row[j]);
        best = std::max(best, s);
      }
      return best;
    }
    case NormType::L2:
      return power_iteration_l2(km);
    case NormType::L2ToLinf: {
      double best = 0.0;
      for (int i = 0; i < n; ++i) {
        const double* row = km.K.row(i);
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += w[j] * row[j] * row[j];
        best = std::max(best, std::sqrt(s));
      }
      return best;
    }
    case NormType::L1ToL2: {
      double best = 0.0;
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += w[i] * km.K(i, j) * km.K(i, j);
        best = std::max(best, std::sqrt(s));
      }
      return best;
    }
    case NormType::L2ToLip:
      return lip_norm_rows(*km.geom, km.K);
  }
  throw config_error("operator_norm: unsupported norm type");
}

double operator_norm(const SpectralFunction& F, NormType type) {
  const EigenSystem& es = *F.es;
  const int n = es.n();
  switch (type) {
    case NormType::L2: {
      double m = 0.0;
      for (double d : F.diag) m = std::max(m, std::abs(d));
      return m;
    }
    case NormType::L2ToLinf:
    case NormType::L1ToL2: {
      // Row norm at x collapses to sum_k d_k^2 v_k(x)^2 by orthonormality.
      double best = 0.0;
      for (int i = 0; i < n; ++i) {
        const double* vi = es.vecs.row(i);
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += F.diag[k] * F.diag[k] * vi[k] * vi[k];
        best = std::max(best, std::sqrt(s));
      }
      return best;
    }
    case NormType::L2ToLip: {
      double best = 0.0;
      for (const auto& [i, j] : es.geom->adjacent) {
        const double* vi = es.vecs.row(i);
        const double* vj = es.vecs.row(j);
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
          const double d = F.diag[k] * (vi[k] - vj[k]);
          s += d * d;
        }
        best = std::max(best, std::sqrt(s) / es.geom->dist(i, j));
      }
      return best;
    }
    default:
      return operator_norm(F.materialize(), type);
  }
}

KernelMatrix kernel_compose(const KernelMatrix& A, const KernelMatrix& B) {
  const int n = A.n();
  const auto& w = A.geom->w;
  KernelMatrix out;
  out.geom = A.geom;
  out.K = Matrix(n, n);
  for (int i = 0; i < n; ++i) {
    const double* ra = A.K.row(i);
    double* rc = out.K.row(i);
    for (int m = 0; m < n; ++m) {
      const double s = ra[m] * w[m];
      if (s == 0.0) continue;
      const double* rb = B.K.row(m);
      for (int j = 0; j < n; ++j) rc[j] += s * rb[j];
    }
  }
  return out;
}

KernelMatrix identity_kernel(const GeometryPtr& geom) {
  const int n = geom->n();
  KernelMatrix out;
  out.geom = geom;
  out.K = Matrix(n, n);
  for (int i = 0; i < n; ++i) out.K(i, i) = 1.0 / geom->w[i];
  return out;
}

}  // namespace speclab
