#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace speclab {

/// Invalid parameters or inconsistent configuration. The CLI maps this to exit code 2.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed to reach its tolerance. The CLI maps this to exit code 1.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense row-major matrix of doubles. Deliberately minimal: the project only
/// needs storage, element access and a few BLAS-1 style loops, all written out
/// explicitly where they are used.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  double* row(int i) { return a_.data() + static_cast<size_t>(i) * cols_; }
  const double* row(int i) const { return a_.data() + static_cast<size_t>(i) * cols_; }

  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

  double max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

using Field = std::vector<double>;

inline double weighted_dot(const std::vector<double>& w, const Field& f, const Field& g) {
  double s = 0.0;
  for (size_t i = 0; i < w.size(); ++i) s += w[i] * f[i] * g[i];
  return s;
}

inline double weighted_norm(const std::vector<double>& w, const Field& f) {
  return std::sqrt(weighted_dot(w, f, f));
}

}  // namespace speclab
