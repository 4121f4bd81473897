#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "speclab/core.hpp"

namespace speclab {

/// Uniform tensor grid on an interval (dim 1) or a rectangle (dim 2),
/// endpoints included. Quadrature weights are the dual-cell volumes, so they
/// sum to the domain volume exactly; dist holds pairwise geodesic (straight
/// line) distances, which on these convex domains equal the Euclidean ones.
struct Mesh {
  int dim = 1;
  int nx = 0, ny = 1;                       // points per axis (ny == 1 in 1D)
  double spacing = 0.0;                     // h, identical on both axes
  std::array<double, 2> length = {0, 0};
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;
  std::vector<std::uint8_t> boundary_mask;  // 1 exactly on the points of the domain boundary
  Matrix dist;

  int size() const { return static_cast<int>(points.size()); }
  double volume() const { return dim == 1 ? length[0] : length[0] * length[1]; }
  int index(int i, int j) const { return i * ny + j; }
};

/// Boundary condition applied to the first-order factor D.
enum class BoundaryCondition { Dirichlet, Neumann };

/// Coefficients of the generalized Laplacian -L = D*D + H. `a` is the
/// first-order coefficient: constant, or evaluated at edge midpoints.
struct OperatorSpec {
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  double a_const = 1.0;
  std::function<double(double, double)> a_fn;  // optional a(x, y) at edge midpoints
  Field H;                                     // per-point potential samples, >= 0; empty means 0
  double scale = 1.0;
};

/// Geometry of the degrees of freedom an operator acts on. For Dirichlet
/// conditions the boundary rows and columns are eliminated, so the dof set is
/// the interior; for Neumann it is the full mesh. Shared immutably by
/// operators, eigensystems and kernels.
struct Geometry {
  int dim = 1;
  double h = 0.0;
  double diameter = 0.0;
  std::vector<double> w;                    // quadrature weight per dof
  Matrix dist;                              // pairwise distances between dofs
  std::vector<std::array<double, 2>> x;     // dof coordinates
  std::vector<int> mesh_index;              // dof -> mesh point
  std::vector<std::array<int, 2>> adjacent; // stencil-adjacent dof pairs (edges)
  std::vector<std::array<int, 2>> fwd;      // forward neighbor per axis, -1 past the far side

  int n() const { return static_cast<int>(w.size()); }
};

using GeometryPtr = std::shared_ptr<const Geometry>;

/// -L = D*D + H assembled in divergence form on the active dof set.
/// `matrix` holds L itself (negative semidefinite); weighted self-adjointness
/// w_i L_ij = w_j L_ji holds exactly by construction.
struct DiscreteOperator {
  GeometryPtr geom;
  Matrix matrix;           // L, acting on coefficient vectors
  OperatorSpec spec;
  std::vector<double> edge_coeff;  // a at edge midpoints, parallel to geom->adjacent
  double a_min = 1.0, a_max = 1.0;

  int n() const { return geom->n(); }
  double speed() const { return a_max; }  // propagation speed of cos(t sqrt(-L))

  Field apply(const Field& f) const;      // L f
};

Mesh build_mesh(int dim, std::array<double, 2> length, int points_per_axis);
inline Mesh build_mesh(int dim, double length, int points_per_axis) {
  return build_mesh(dim, {length, length}, points_per_axis);
}

DiscreteOperator assemble_operator(const Mesh& mesh, const OperatorSpec& spec);

/// Metric rescaling by r: distances scale by r, weights by r^n, the matrix of
/// L by 1/r^2, so spectrum(-L) scales by 1/r^2.
DiscreteOperator rescale_operator(const DiscreteOperator& op, double r);

}  // namespace speclab
