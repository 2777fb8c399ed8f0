// SPDX-License-Identifier: Apache-2.0

#include "feec/space.hpp"

#include <cmath>
#include <string>

#include "feec/assembly.hpp"
#include "feec/error.hpp"
#include "feec/quadrature.hpp"

namespace feec
{

std::string_view to_string(BoundaryCondition bc)
{
  switch (bc)
  {
    case BoundaryCondition::none:
      return "none";
    case BoundaryCondition::homogeneous_essential:
      return "homogeneous_essential";
    case BoundaryCondition::zero_mean:
      return "zero_mean";
  }
  return "unknown";
}

std::string_view to_string(DerivativeOp op)
{
  switch (op)
  {
    case DerivativeOp::grad:
      return "grad";
    case DerivativeOp::curl:
      return "curl";
    case DerivativeOp::div:
      return "div";
  }
  return "unknown";
}

FESpace::FESpace(std::shared_ptr<const Mesh> mesh, Family family, int k, BoundaryCondition bc)
    : mesh_(std::move(mesh)), family_(family), degree_(k), bc_(bc),
      element_(&reference_element(family, k))
{
  if (bc == BoundaryCondition::zero_mean && family != Family::dg)
  {
    throw ConfigError("bc zero_mean is only available for the dg family");
  }
  if (bc == BoundaryCondition::homogeneous_essential && family == Family::dg)
  {
    throw ConfigError("dg has no boundary degrees of freedom; use bc none or zero_mean");
  }
  const Mesh &m = *mesh_;
  const ReferenceElement &el = *element_;
  local_dofs_ = el.n_dofs();

  const int nv = el.dofs_per_entity(EntityKind::vertex);
  const int ne = el.dofs_per_entity(EntityKind::edge);
  const int nf = el.dofs_per_entity(EntityKind::face);
  const int nc = el.dofs_per_entity(EntityKind::cell);
  const int V = static_cast<int>(m.num_vertices());
  const int E = static_cast<int>(m.num_edges());
  const int F = static_cast<int>(m.num_faces());
  const int T = static_cast<int>(m.num_tets());
  const int edge_offset = nv * V;
  const int face_offset = edge_offset + ne * E;
  const int cell_offset = face_offset + nf * F;
  n_dofs_ = cell_offset + nc * T;

  constrained_.assign(n_dofs_, 0);
  if (bc == BoundaryCondition::homogeneous_essential)
  {
    for (int v = 0; v < V; v++)
    {
      for (int j = 0; j < nv; j++)
      {
        constrained_[nv * v + j] = m.is_boundary_vertex(v);
      }
    }
    for (int e = 0; e < E; e++)
    {
      for (int j = 0; j < ne; j++)
      {
        constrained_[edge_offset + ne * e + j] = m.is_boundary_edge(e);
      }
    }
    for (int f = 0; f < F; f++)
    {
      for (int j = 0; j < nf; j++)
      {
        constrained_[face_offset + nf * f + j] = m.is_boundary_face(f);
      }
    }
  }
  free_index_.assign(n_dofs_, -1);
  for (int i = 0; i < n_dofs_; i++)
  {
    if (!constrained_[i])
    {
      free_index_[i] = static_cast<int>(free_dofs_.size());
      free_dofs_.push_back(i);
    }
  }

  cell_dofs_.resize(static_cast<std::size_t>(T) * local_dofs_);
  cell_signs_.assign(cell_dofs_.size(), 1);
  const auto descriptors = el.dofs();
  for (int t = 0; t < T; t++)
  {
    const auto s = m.sorted_tet(t);
    for (int i = 0; i < local_dofs_; i++)
    {
      const auto &d = descriptors[i];
      int id = 0;
      switch (d.kind)
      {
        case EntityKind::vertex:
          id = nv * s[d.entity] + d.moment;
          break;
        case EntityKind::edge:
        {
          const auto &le = kTetEdges[d.entity];
          id = edge_offset + ne * m.edge_of(t, s[le[0]], s[le[1]]) + d.moment;
          break;
        }
        case EntityKind::face:
        {
          const auto &lf = kTetFaces[d.entity];
          id = face_offset + nf * m.face_of(t, s[lf[0]], s[lf[1]], s[lf[2]]) + d.moment;
          break;
        }
        case EntityKind::cell:
          id = cell_offset + nc * t + d.moment;
          break;
      }
      cell_dofs_[static_cast<std::size_t>(t) * local_dofs_ + i] = id;
    }
  }
}

Vector FESpace::extend(const Vector &free_values) const
{
  if (free_values.size() != n_free())
  {
    throw UsageError("free-DOF vector has the wrong length");
  }
  Vector full = Vector::Zero(n_dofs_);
  for (int i = 0; i < n_free(); i++)
  {
    full[free_dofs_[i]] = free_values[i];
  }
  return full;
}

Vector FESpace::restrict(const Vector &full) const
{
  if (full.size() != n_dofs_)
  {
    throw UsageError("coefficient vector has the wrong length");
  }
  Vector r(n_free());
  for (int i = 0; i < n_free(); i++)
  {
    r[i] = full[free_dofs_[i]];
  }
  return r;
}

FESpace build_space(std::shared_ptr<const Mesh> mesh, Family family, int k,
                    BoundaryCondition bc)
{
  return FESpace(std::move(mesh), family, k, bc);
}

VectorField as_vector_field(ScalarField f)
{
  return [f = std::move(f)](const Point &x) { return Vec3{f(x), 0.0, 0.0}; };
}

FEFunction canonical_interpolate(const FESpace &space, const VectorField &field, int points,
                                 Execution exec)
{
  const Mesh &mesh = space.mesh();
  const ReferenceElement &el = space.element();
  const DofPlan plan = el.dof_plan(points);
  const int T = static_cast<int>(mesh.num_tets());
  const int nl = space.local_dofs();
  std::vector<double> local(static_cast<std::size_t>(T) * nl);

  auto cell_kernel = [&](int t) {
    const CellGeometry g = cell_geometry(mesh, t);
    const auto vals = el.apply_dofs(plan, [&](const Vec3 &xi) {
      return pull_back(space.family(), g, field(g.map(xi)));
    });
    std::copy(vals.begin(), vals.end(), local.begin() + static_cast<std::ptrdiff_t>(t) * nl);
  };
  if (exec == Execution::parallel)
  {
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (int t = 0; t < T; t++)
    {
      cell_kernel(t);
    }
  }
  else
  {
    for (int t = 0; t < T; t++)
    {
      cell_kernel(t);
    }
  }

  // Shared DOFs take the value computed by the first cell that sees them.
  FEFunction u(space);
  std::vector<std::uint8_t> seen(space.n_dofs(), 0);
  for (int t = 0; t < T; t++)
  {
    const auto dofs = space.cell_dofs(t);
    const auto signs = space.cell_signs(t);
    for (int i = 0; i < nl; i++)
    {
      if (!seen[dofs[i]])
      {
        seen[dofs[i]] = 1;
        u.coeffs[dofs[i]] = signs[i] * local[static_cast<std::size_t>(t) * nl + i];
      }
    }
  }
  for (int i = 0; i < space.n_dofs(); i++)
  {
    if (space.is_constrained(i))
    {
      u.coeffs[i] = 0.0;
    }
  }
  return u;
}

double commuting_residual(DerivativeOp op, const FESpace &from, const FESpace &to,
                          const VectorField &field, const VectorField &derivative)
{
  if (from.mesh_ptr() != to.mesh_ptr())
  {
    throw UsageError("commuting_residual: spaces live on different meshes");
  }
  const SparseMatrix D = derivative_matrix(op, from, to);
  const FEFunction lower = canonical_interpolate(from, field);
  const FEFunction upper = canonical_interpolate(to, derivative);
  const FEFunction diff(to, D * lower.coeffs - upper.coeffs);
  return l2_norm(diff);
}

namespace
{

// Physical basis values of cell t at reference points.
void cell_tabulation(const FESpace &space, int t, const Tabulation &ref, Tabulation &phys,
                     CellGeometry &geom)
{
  geom = cell_geometry(space.mesh(), t);
  push_forward(space.element(), geom, ref, phys);
}

}  // namespace

PointValue evaluate(const FEFunction &u, int t, const Vec3 &ref)
{
  const FESpace &space = *u.space;
  const Tabulation tab = space.element().tabulate(std::span<const Vec3>(&ref, 1));
  Tabulation phys;
  CellGeometry g;
  cell_tabulation(space, t, tab, phys, g);
  PointValue pv;
  const auto dofs = space.cell_dofs(t);
  const auto signs = space.cell_signs(t);
  for (int i = 0; i < phys.n_dofs; i++)
  {
    const double c = signs[i] * u.coeffs[dofs[i]];
    for (int d = 0; d < phys.value_dim; d++)
    {
      pv.value[d] += c * phys.value(0, i, d);
    }
    for (int d = 0; d < phys.deriv_dim; d++)
    {
      pv.deriv[d] += c * phys.deriv(0, i, d);
    }
  }
  return pv;
}

int locate_cell(const Mesh &mesh, const Point &x, double tol)
{
  for (int t = 0; t < static_cast<int>(mesh.num_tets()); t++)
  {
    const CellGeometry g = cell_geometry(mesh, t);
    const Vec3 xi = g.pull(x);
    if (xi[0] >= -tol && xi[1] >= -tol && xi[2] >= -tol && xi[0] + xi[1] + xi[2] <= 1.0 + tol)
    {
      return t;
    }
  }
  return -1;
}

PointValue evaluate_at(const FEFunction &u, const Point &x)
{
  const int t = locate_cell(u.space->mesh(), x);
  if (t < 0)
  {
    throw UsageError("evaluation point outside the mesh");
  }
  return evaluate(u, t, cell_geometry(u.space->mesh(), t).pull(x));
}

double l2_error(const FEFunction &u, const VectorField &exact, int order, Quantity quantity,
                Execution exec)
{
  const FESpace &space = *u.space;
  const Mesh &mesh = space.mesh();
  const QuadratureRule rule = make_quadrature(order);
  const Tabulation ref = space.element().tabulate(rule.points);
  const int dim = quantity == Quantity::value ? ref.value_dim : ref.deriv_dim;
  const int T = static_cast<int>(mesh.num_tets());
  std::vector<double> contrib(T, 0.0);

  auto cell_kernel = [&](int t, Tabulation &phys) {
    CellGeometry g;
    cell_tabulation(space, t, ref, phys, g);
    const auto dofs = space.cell_dofs(t);
    const auto signs = space.cell_signs(t);
    double s = 0.0;
    for (int q = 0; q < phys.n_points; q++)
    {
      Vec3 v{};
      for (int i = 0; i < phys.n_dofs; i++)
      {
        const double c = signs[i] * u.coeffs[dofs[i]];
        for (int d = 0; d < dim; d++)
        {
          v[d] += c * (quantity == Quantity::value ? phys.value(q, i, d) : phys.deriv(q, i, d));
        }
      }
      if (exact)
      {
        const Vec3 e = exact(g.map(rule.points[q]));
        for (int d = 0; d < dim; d++)
        {
          v[d] -= e[d];
        }
      }
      double sq = 0.0;
      for (int d = 0; d < dim; d++)
      {
        sq += v[d] * v[d];
      }
      s += rule.weights[q] * sq;
    }
    contrib[t] = s * std::abs(g.det);
  };
  if (exec == Execution::parallel)
  {
#pragma omp parallel num_threads(thread_count())
    {
      Tabulation phys;
#pragma omp for schedule(static)
      for (int t = 0; t < T; t++)
      {
        cell_kernel(t, phys);
      }
    }
  }
  else
  {
    Tabulation phys;
    for (int t = 0; t < T; t++)
    {
      cell_kernel(t, phys);
    }
  }
  double total = 0.0;
  for (double c : contrib)
  {
    total += c;
  }
  return std::sqrt(total);
}

double l2_norm(const FEFunction &u, Quantity quantity)
{
  return l2_error(u, nullptr, 2 * u.space->degree() + 2, quantity);
}

Vec3 integrate(const FEFunction &u)
{
  const FESpace &space = *u.space;
  const QuadratureRule rule = make_quadrature(space.degree() + 1);
  const Tabulation ref = space.element().tabulate(rule.points);
  Vec3 total{};
  Tabulation phys;
  for (int t = 0; t < static_cast<int>(space.mesh().num_tets()); t++)
  {
    CellGeometry g;
    cell_tabulation(space, t, ref, phys, g);
    const auto dofs = space.cell_dofs(t);
    const auto signs = space.cell_signs(t);
    for (int q = 0; q < phys.n_points; q++)
    {
      for (int i = 0; i < phys.n_dofs; i++)
      {
        const double c = signs[i] * u.coeffs[dofs[i]] * rule.weights[q] * std::abs(g.det);
        for (int d = 0; d < phys.value_dim; d++)
        {
          total[d] += c * phys.value(q, i, d);
        }
      }
    }
  }
  return total;
}

}  // namespace feec
