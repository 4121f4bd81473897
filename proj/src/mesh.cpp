#include "speclab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace speclab {

namespace {

// Dual-cell widths of a uniform 1D grid: h/2 at the two endpoints, h inside.
std::vector<double> dual_widths(int n, double h) {
  std::vector<double> w(n, h);
  w.front() = 0.5 * h;
  w.back() = 0.5 * h;
  return w;
}

}  // namespace

Mesh build_mesh(int dim, std::array<double, 2> length, int points_per_axis) {
  if (dim != 1 && dim != 2) throw config_error("build_mesh: dim must be 1 or 2");
  if (points_per_axis < 8) throw config_error("build_mesh: need at least 8 points per axis");
  for (int d = 0; d < dim; ++d)
    if (!(length[d] > 0.0) || !std::isfinite(length[d]))
      throw config_error("build_mesh: axis lengths must be positive");
  Mesh m;
  m.dim = dim;
  m.length = length;
  m.nx = points_per_axis;
  m.ny = dim == 2 ? points_per_axis : 1;
  const double hx = length[0] / (points_per_axis - 1);
  if (dim == 2) {
    const double hy = length[1] / (points_per_axis - 1);
    if (std::abs(hx - hy) > 1e-12 * hx)
      throw config_error("build_mesh: rectangle must have equal spacing on both axes");
  }
  m.spacing = hx;

  const int n = m.nx * m.ny;
  m.points.resize(n);
  m.weights.resize(n);
  m.boundary_mask.resize(n, 0);

  const auto wx = dual_widths(m.nx, hx);
  const auto wy = dim == 2 ? dual_widths(m.ny, hx) : std::vector<double>{1.0};
  for (int i = 0; i < m.nx; ++i) {
    for (int j = 0; j < m.ny; ++j) {
      const int id = m.index(i, j);
      m.points[id] = {i * hx, dim == 2 ? j * hx : 0.0};
      m.weights[id] = wx[i] * wy[dim == 2 ? j : 0];
      const bool bdry = (i == 0 || i == m.nx - 1) || (dim == 2 && (j == 0 || j == m.ny - 1));
      m.boundary_mask[id] = bdry ? 1 : 0;
    }
  }

  m.dist = Matrix(n, n);
  for (int p = 0; p < n; ++p) {
    m.dist(p, p) = 0.0;
    for (int q = p + 1; q < n; ++q) {
      const double dx = m.points[p][0] - m.points[q][0];
      const double dy = m.points[p][1] - m.points[q][1];
      const double d = std::sqrt(dx * dx + dy * dy);
      m.dist(p, q) = d;
      m.dist(q, p) = d;
    }
  }
  return m;
}

Field DiscreteOperator::apply(const Field& f) const {
  const int n = matrix.rows();
  Field out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double* row = matrix.row(i);
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += row[j] * f[j];
    out[i] = s;
  }
  return out;
}

DiscreteOperator assemble_operator(const Mesh& mesh, const OperatorSpec& spec) {
  const int nm = mesh.size();
  if (!spec.H.empty() && static_cast<int>(spec.H.size()) != nm)
    throw config_error("assemble_operator: H sample count does not match the mesh");
  for (double hv : spec.H)
    if (!(hv >= 0.0) || !std::isfinite(hv))
      throw config_error("assemble_operator: H must be nonnegative and finite");

  auto coeff = [&](double xm, double ym) {
    const double a = spec.a_fn ? spec.a_fn(xm, ym) : spec.a_const;
    if (!std::isfinite(a) || a < 1e-8 || a > 1e8)
      throw config_error("assemble_operator: coefficient a violates the ellipticity bounds");
    return a;
  };

  const bool dirichlet = spec.bc == BoundaryCondition::Dirichlet;

  // Active dofs: interior points under Dirichlet, all points under Neumann.
  std::vector<int> dof_of_mesh(nm, -1);
  auto geom = std::make_shared<Geometry>();
  geom->dim = mesh.dim;
  geom->h = mesh.spacing;
  for (int p = 0; p < nm; ++p) {
    if (dirichlet && mesh.boundary_mask[p]) continue;
    dof_of_mesh[p] = geom->n();
    geom->w.push_back(mesh.weights[p]);
    geom->x.push_back(mesh.points[p]);
    geom->mesh_index.push_back(p);
  }
  const int n = geom->n();
  geom->dist = Matrix(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double d = mesh.dist(geom->mesh_index[i], geom->mesh_index[j]);
      geom->dist(i, j) = d;
      geom->diameter = std::max(geom->diameter, d);
    }

  // Forward lattice neighbors of each dof, used by discrete gradients.
  geom->fwd.assign(n, {-1, -1});
  for (int d = 0; d < n; ++d) {
    const int p = geom->mesh_index[d];
    const int ix = p / mesh.ny, iy = p % mesh.ny;
    if (ix + 1 < mesh.nx) geom->fwd[d][0] = dof_of_mesh[mesh.index(ix + 1, iy)];
    if (mesh.dim == 2 && iy + 1 < mesh.ny) geom->fwd[d][1] = dof_of_mesh[mesh.index(ix, iy + 1)];
  }

  // Edge-wise assembly of the energy form sum_e w_e a_e^2 (du)(dv) / h^2,
  // w_e = h times the transverse dual widths. This keeps w_i L_ij = w_j L_ji
  // exact and makes Neumann the mirror (zero co-normal flux) closure.
  Matrix K(n, n);
  std::vector<double> edge_coeff;
  double a_min = 1e300, a_max = 0.0;
  const double h = mesh.spacing;
  const auto wy = mesh.dim == 2 ? dual_widths(mesh.ny, h) : std::vector<double>{1.0};
  const auto wx = dual_widths(mesh.nx, h);

  auto add_edge = [&](int p, int q, double w_e, double xm, double ym) {
    const double a = coeff(xm, ym);
    a_min = std::min(a_min, a);
    a_max = std::max(a_max, a);
    const double k = a * a * w_e / (h * h);
    const int dp = dof_of_mesh[p], dq = dof_of_mesh[q];
    if (dp >= 0) K(dp, dp) += k;
    if (dq >= 0) K(dq, dq) += k;
    if (dp >= 0 && dq >= 0) {
      K(dp, dq) -= k;
      K(dq, dp) -= k;
      geom->adjacent.push_back({dp, dq});
      edge_coeff.push_back(a);
    }
  };

  for (int i = 0; i < mesh.nx; ++i) {
    for (int j = 0; j < mesh.ny; ++j) {
      if (i + 1 < mesh.nx)  // edge along x
        add_edge(mesh.index(i, j), mesh.index(i + 1, j), h * (mesh.dim == 2 ? wy[j] : 1.0),
                 (i + 0.5) * h, mesh.dim == 2 ? j * h : 0.0);
      if (mesh.dim == 2 && j + 1 < mesh.ny)  // edge along y
        add_edge(mesh.index(i, j), mesh.index(i, j + 1), h * wx[i], i * h, (j + 0.5) * h);
    }
  }

  DiscreteOperator op;
  op.geom = geom;
  op.spec = spec;
  op.edge_coeff = std::move(edge_coeff);
  op.a_min = a_min;
  op.a_max = a_max;
  op.matrix = Matrix(n, n);
  for (int i = 0; i < n; ++i) {
    const double wi = geom->w[i];
    for (int j = 0; j < n; ++j) op.matrix(i, j) = -K(i, j) / wi;
    if (!spec.H.empty()) op.matrix(i, i) -= spec.H[geom->mesh_index[i]];
  }
  return op;
}

DiscreteOperator rescale_operator(const DiscreteOperator& op, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw config_error("rescale_operator: r must be positive");
  const double rn = op.geom->dim == 1 ? r : r * r;

  auto geom = std::make_shared<Geometry>(*op.geom);
  geom->h *= r;
  geom->diameter *= r;
  for (auto& wi : geom->w) wi *= rn;
  for (auto& xi : geom->x) {
    xi[0] *= r;
    xi[1] *= r;
  }
  const int n = geom->n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) geom->dist(i, j) *= r;

  DiscreteOperator out;
  out.geom = geom;
  out.spec = op.spec;
  out.edge_coeff = op.edge_coeff;
  out.spec.scale = op.spec.scale * r;
  out.a_min = op.a_min;
  out.a_max = op.a_max;
  out.matrix = op.matrix;
  const double inv_r2 = 1.0 / (r * r);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.matrix(i, j) *= inv_r2;
  return out;
}

}  // namespace speclab
