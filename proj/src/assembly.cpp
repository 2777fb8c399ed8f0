// SPDX-License-Identifier: Apache-2.0

#include "feec/assembly.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "feec/error.hpp"
#include "feec/quadrature.hpp"
#include "feec/solver.hpp"

namespace feec
{

std::string_view to_string(BilinearForm kind)
{
  switch (kind)
  {
    case BilinearForm::mass:
      return "mass";
    case BilinearForm::divdiv:
      return "divdiv";
    case BilinearForm::curl_coupling:
      return "curl_coupling";
    case BilinearForm::div_pressure:
      return "div_pressure";
  }
  return "unknown";
}

std::string_view to_string(AdjointOp op)
{
  switch (op)
  {
    case AdjointOp::curl_h:
      return "curl_h";
    case AdjointOp::curl_h0:
      return "curl_h0";
    case AdjointOp::grad_h:
      return "grad_h";
    case AdjointOp::grad_h0:
      return "grad_h0";
    case AdjointOp::div_h:
      return "div_h";
    case AdjointOp::div_h0:
      return "div_h0";
  }
  return "unknown";
}

const BlockLayout &SaddleSystem::block(std::string_view name) const
{
  for (const auto &b : layout)
  {
    if (b.name == name)
    {
      return b;
    }
  }
  throw UsageError("no block named " + std::string(name));
}

Vector SaddleSystem::sign_vector() const
{
  Vector s(size());
  for (const auto &b : layout)
  {
    s.segment(b.offset, b.size).setConstant(b.sign);
  }
  return s;
}

namespace
{

void require_same_mesh(const FESpace &a, const FESpace &b)
{
  if (a.mesh_ptr() != b.mesh_ptr())
  {
    throw UsageError("spaces live on different meshes");
  }
  if (a.degree() != b.degree())
  {
    throw UsageError("spaces have different degrees");
  }
}

std::vector<int> traversal(int n_cells, std::span<const int> order)
{
  if (order.empty())
  {
    std::vector<int> all(n_cells);
    std::iota(all.begin(), all.end(), 0);
    return all;
  }
  if (static_cast<int>(order.size()) != n_cells)
  {
    throw UsageError("cell order must list every cell exactly once");
  }
  std::vector<char> seen(n_cells, 0);
  for (int t : order)
  {
    if (t < 0 || t >= n_cells || seen[t])
    {
      throw UsageError("cell order must list every cell exactly once");
    }
    seen[t] = 1;
  }
  return {order.begin(), order.end()};
}

// Runs kernel(t) for every cell, either with OpenMP or serially.
template <class Kernel>
void for_each_cell(int n_cells, Execution exec, Kernel &&kernel)
{
  if (exec == Execution::parallel)
  {
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (int t = 0; t < n_cells; t++)
    {
      kernel(t);
    }
  }
  else
  {
    for (int t = 0; t < n_cells; t++)
    {
      kernel(t);
    }
  }
}

}  // namespace

SparseMatrix derivative_matrix(DerivativeOp op, const FESpace &from, const FESpace &to)
{
  require_same_mesh(from, to);
  Family expected_from = Family::lagrange;
  switch (op)
  {
    case DerivativeOp::grad:
      expected_from = Family::lagrange;
      break;
    case DerivativeOp::curl:
      expected_from = Family::nedelec1;
      break;
    case DerivativeOp::div:
      expected_from = Family::raviart_thomas;
      break;
  }
  if (from.family() != expected_from || to.family() != next_family(expected_from))
  {
    throw UsageError(std::string(to_string(op)) + " maps " +
                     std::string(to_string(expected_from)) + " to " +
                     std::string(to_string(next_family(expected_from))));
  }
  const Eigen::MatrixXd local = reference_derivative_matrix(from.family(), from.degree());
  const Mesh &mesh = from.mesh();
  const int T = static_cast<int>(mesh.num_tets());

  // Each global row is owned by the first cell containing it; every cell sharing the row
  // yields the same entries, so values are set rather than summed.
  std::vector<char> owned(to.n_dofs(), 0);
  std::vector<Triplet> trip;
  for (int t = 0; t < T; t++)
  {
    const double scale = op == DerivativeOp::div ? 1.0 / cell_geometry(mesh, t).det : 1.0;
    const auto rows = to.cell_dofs(t);
    const auto rsign = to.cell_signs(t);
    const auto cols = from.cell_dofs(t);
    const auto csign = from.cell_signs(t);
    for (int i = 0; i < static_cast<int>(rows.size()); i++)
    {
      if (owned[rows[i]])
      {
        continue;
      }
      owned[rows[i]] = 1;
      for (int j = 0; j < static_cast<int>(cols.size()); j++)
      {
        const double v = local(i, j);
        if (v != 0.0)
        {
          trip.push_back({rows[i], cols[j], rsign[i] * csign[j] * scale * v});
        }
      }
    }
  }
  return SparseMatrix::from_triplets(to.n_dofs(), from.n_dofs(), std::move(trip));
}

SparseMatrix assemble_bilinear(BilinearForm kind, const FESpace &trial, const FESpace &test,
                               const AssemblyOptions &options)
{
  require_same_mesh(trial, test);
  // Which tabulated quantity enters the integrand on each side.
  bool trial_deriv = false;
  bool test_deriv = false;
  bool ok = false;
  switch (kind)
  {
    case BilinearForm::mass:
      ok = trial.family() == test.family();
      break;
    case BilinearForm::divdiv:
      ok = trial.family() == Family::raviart_thomas && test.family() == Family::raviart_thomas;
      trial_deriv = test_deriv = true;
      break;
    case BilinearForm::curl_coupling:
      ok = trial.family() == Family::nedelec1 && test.family() == Family::raviart_thomas;
      trial_deriv = true;
      break;
    case BilinearForm::div_pressure:
      ok = trial.family() == Family::raviart_thomas && test.family() == Family::dg;
      trial_deriv = true;
      break;
  }
  if (!ok)
  {
    throw UsageError(std::string("bilinear form ") + std::string(to_string(kind)) +
                     " does not accept trial " + std::string(to_string(trial.family())) +
                     " and test " + std::string(to_string(test.family())));
  }

  const int k = trial.degree();
  const QuadratureRule rule =
      make_quadrature(options.quad_order >= 0 ? options.quad_order : 2 * k + 2);
  const Tabulation ref_trial = trial.element().tabulate(rule.points);
  const Tabulation ref_test = test.element().tabulate(rule.points);
  const int dim = trial_deriv ? ref_trial.deriv_dim : ref_trial.value_dim;
  const Mesh &mesh = trial.mesh();
  const int T = static_cast<int>(mesh.num_tets());
  const int nr = test.local_dofs();
  const int nc = trial.local_dofs();
  std::vector<double> element(static_cast<std::size_t>(T) * nr * nc, 0.0);

  auto kernel = [&](int t, Tabulation &phys_trial, Tabulation &phys_test) {
    const CellGeometry g = cell_geometry(mesh, t);
    push_forward(trial.element(), g, ref_trial, phys_trial);
    push_forward(test.element(), g, ref_test, phys_test);
    const double vol = std::abs(g.det);
    double *out = element.data() + static_cast<std::size_t>(t) * nr * nc;
    for (int q = 0; q < static_cast<int>(rule.size()); q++)
    {
      const double w = rule.weights[q] * vol;
      for (int i = 0; i < nr; i++)
      {
        for (int j = 0; j < nc; j++)
        {
          double s = 0.0;
          for (int d = 0; d < dim; d++)
          {
            const double a = trial_deriv ? phys_trial.deriv(q, j, d) : phys_trial.value(q, j, d);
            const double b = test_deriv ? phys_test.deriv(q, i, d) : phys_test.value(q, i, d);
            s += a * b;
          }
          out[i * nc + j] += w * s;
        }
      }
    }
  };
  if (options.exec == Execution::parallel)
  {
#pragma omp parallel num_threads(thread_count())
    {
      Tabulation a, b;
#pragma omp for schedule(static)
      for (int t = 0; t < T; t++)
      {
        kernel(t, a, b);
      }
    }
  }
  else
  {
    Tabulation a, b;
    for (int t = 0; t < T; t++)
    {
      kernel(t, a, b);
    }
  }

  // Serial scatter in traversal order keeps the summation order fixed.
  std::vector<Triplet> trip;
  trip.reserve(element.size());
  for (int t : traversal(T, options.cell_order))
  {
    const auto rows = test.cell_dofs(t);
    const auto rs = test.cell_signs(t);
    const auto cols = trial.cell_dofs(t);
    const auto cs = trial.cell_signs(t);
    const double *el = element.data() + static_cast<std::size_t>(t) * nr * nc;
    for (int i = 0; i < nr; i++)
    {
      for (int j = 0; j < nc; j++)
      {
        trip.push_back({rows[i], cols[j], rs[i] * cs[j] * el[i * nc + j]});
      }
    }
  }
  return SparseMatrix::from_triplets(test.n_dofs(), trial.n_dofs(), std::move(trip));
}

Vector assemble_load(const VectorField &f, const FESpace &space, int quad_order, Execution exec)
{
  const int k = space.degree();
  const QuadratureRule rule = make_quadrature(quad_order >= 0 ? quad_order : 2 * k + 6);
  const Tabulation ref = space.element().tabulate(rule.points);
  const Mesh &mesh = space.mesh();
  const int T = static_cast<int>(mesh.num_tets());
  const int nl = space.local_dofs();
  std::vector<double> local(static_cast<std::size_t>(T) * nl, 0.0);

  auto kernel = [&](int t) {
    const CellGeometry g = cell_geometry(mesh, t);
    Tabulation phys;
    push_forward(space.element(), g, ref, phys);
    const double vol = std::abs(g.det);
    double *out = local.data() + static_cast<std::size_t>(t) * nl;
    for (int q = 0; q < static_cast<int>(rule.size()); q++)
    {
      const Vec3 fv = f(g.map(rule.points[q]));
      const double w = rule.weights[q] * vol;
      for (int i = 0; i < nl; i++)
      {
        double s = 0.0;
        for (int d = 0; d < phys.value_dim; d++)
        {
          s += fv[d] * phys.value(q, i, d);
        }
        out[i] += w * s;
      }
    }
  };
  for_each_cell(T, exec, kernel);

  Vector b = Vector::Zero(space.n_dofs());
  for (int t = 0; t < T; t++)
  {
    const auto dofs = space.cell_dofs(t);
    const auto signs = space.cell_signs(t);
    for (int i = 0; i < nl; i++)
    {
      b[dofs[i]] += signs[i] * local[static_cast<std::size_t>(t) * nl + i];
    }
  }
  return b;
}

Vector basis_integrals(const FESpace &space)
{
  if (space.element().value_dim() != 1)
  {
    throw UsageError("basis integrals are defined for scalar spaces only");
  }
  return assemble_load([](const Point &) { return Vec3{1.0, 0.0, 0.0}; }, space,
                       space.degree() + 1);
}

namespace
{

void add_block(std::vector<Triplet> &out, const SparseMatrix &m, int row_offset, int col_offset,
               double scale)
{
  for (const auto &t : m.triplets())
  {
    out.push_back({t.row + row_offset, t.col + col_offset, scale * t.value});
  }
}

std::vector<int> all_dofs(const FESpace &s)
{
  std::vector<int> ids(s.n_dofs());
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

// Vorticity/velocity blocks shared by both formulations. Returns the coupling used for the
// transposed (vorticity test) block; it differs from sys.curl_coupling only in the naive
// variant, where all vorticity test functions are kept.
SparseMatrix assemble_vorticity_velocity(SaddleSystem &sys, const FESpace &sigma,
                                         const FESpace &velocity, const AssemblyOptions &options)
{
  if (sigma.family() != Family::nedelec1 || velocity.family() != Family::raviart_thomas)
  {
    throw UsageError("vorticity space must be nedelec1 and velocity space raviart_thomas");
  }
  if (velocity.bc() != BoundaryCondition::homogeneous_essential)
  {
    throw UsageError("velocity space must carry homogeneous essential conditions");
  }
  require_same_mesh(sigma, velocity);
  sys.sigma = &sigma;
  sys.velocity = &velocity;
  sys.naive_vorticity = sigma.bc() == BoundaryCondition::homogeneous_essential;

  const std::vector<int> mu_ids = all_dofs(sigma);
  const auto u_ids = velocity.free_dofs();
  SparseMatrix m = assemble_bilinear(BilinearForm::mass, sigma, sigma, options);
  const SparseMatrix k =
      assemble_bilinear(BilinearForm::curl_coupling, sigma, velocity, options)
          .submatrix(u_ids, mu_ids);
  SparseMatrix k_trial = k;
  if (sys.naive_vorticity)
  {
    // Trial vorticities restricted to Sigma_{h,0}: drop the constrained trial columns.
    auto drop_constrained = [&](const SparseMatrix &a) {
      std::vector<Triplet> kept;
      for (const auto &t : a.triplets())
      {
        if (!sigma.is_constrained(t.col))
        {
          kept.push_back(t);
        }
      }
      return SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(kept));
    };
    m = drop_constrained(m);
    k_trial = drop_constrained(k);
  }
  sys.mass_sigma = m.submatrix(mu_ids, mu_ids);
  sys.curl_coupling = k_trial;
  sys.divdiv =
      assemble_bilinear(BilinearForm::divdiv, velocity, velocity, options).submatrix(u_ids, u_ids);
  sys.layout = {{"mu", 0, static_cast<int>(mu_ids.size()), 1},
                {"u", static_cast<int>(mu_ids.size()), static_cast<int>(u_ids.size()), -1}};
  return k;
}

}  // namespace

SaddleSystem assemble_hodge_laplace_system(const FESpace &sigma, const FESpace &velocity,
                                           const VectorField &f, const AssemblyOptions &options)
{
  SaddleSystem sys;
  sys.kind = SystemKind::hodge_laplace;
  const SparseMatrix k_test = assemble_vorticity_velocity(sys, sigma, velocity, options);
  const int n_mu = sys.layout[0].size;
  const int n_u = sys.layout[1].size;

  std::vector<Triplet> trip;
  add_block(trip, sys.mass_sigma, 0, 0, 1.0);
  add_block(trip, k_test.transpose(), 0, n_mu, -1.0);
  add_block(trip, sys.curl_coupling, n_mu, 0, 1.0);
  add_block(trip, sys.divdiv, n_mu, n_mu, 1.0);
  sys.matrix = SparseMatrix::from_triplets(n_mu + n_u, n_mu + n_u, std::move(trip));

  sys.rhs = Vector::Zero(n_mu + n_u);
  sys.rhs.segment(n_mu, n_u) = velocity.restrict(assemble_load(f, velocity, -1, options.exec));
  return sys;
}

SaddleSystem assemble_stokes_vvp_system(const FESpace &sigma, const FESpace &velocity,
                                        const FESpace &pressure, const VectorField &f,
                                        const ScalarField &g, const AssemblyOptions &options)
{
  if (pressure.family() != Family::dg || pressure.bc() != BoundaryCondition::zero_mean)
  {
    throw UsageError("pressure space must be dg with zero_mean");
  }
  if (sigma.bc() != BoundaryCondition::none)
  {
    throw UsageError("the stokes system needs a vorticity space without boundary conditions");
  }
  require_same_mesh(velocity, pressure);
  SaddleSystem sys;
  sys.kind = SystemKind::stokes_vvp;
  assemble_vorticity_velocity(sys, sigma, velocity, options);
  sys.pressure = &pressure;
  const int n_mu = sys.layout[0].size;
  const int n_u = sys.layout[1].size;
  const int n_p = pressure.n_dofs();
  const std::vector<int> p_ids = all_dofs(pressure);
  sys.div_pressure = assemble_bilinear(BilinearForm::div_pressure, velocity, pressure, options)
                         .submatrix(p_ids, velocity.free_dofs());
  sys.mean_row = basis_integrals(pressure);
  sys.layout.push_back({"p", n_mu + n_u, n_p, 1});
  sys.layout.push_back({"lambda", n_mu + n_u + n_p, 1, 1});

  const int n = n_mu + n_u + n_p + 1;
  std::vector<Triplet> trip;
  add_block(trip, sys.mass_sigma, 0, 0, 1.0);
  add_block(trip, sys.curl_coupling.transpose(), 0, n_mu, -1.0);
  add_block(trip, sys.curl_coupling, n_mu, 0, 1.0);
  add_block(trip, sys.divdiv, n_mu, n_mu, 1.0);
  add_block(trip, sys.div_pressure.transpose(), n_mu, n_mu + n_u, -1.0);
  add_block(trip, sys.div_pressure, n_mu + n_u, n_mu, 1.0);
  const int lam = n - 1;
  for (int i = 0; i < n_p; i++)
  {
    trip.push_back({n_mu + n_u + i, lam, sys.mean_row[i]});
    trip.push_back({lam, n_mu + n_u + i, sys.mean_row[i]});
  }
  sys.matrix = SparseMatrix::from_triplets(n, n, std::move(trip));

  sys.rhs = Vector::Zero(n);
  sys.rhs.segment(n_mu, n_u) = velocity.restrict(assemble_load(f, velocity, -1, options.exec));
  sys.rhs.segment(n_mu + n_u, n_p) =
      assemble_load(as_vector_field(g), pressure, -1, options.exec);
  return sys;
}

FEFunction apply_discrete_adjoint(AdjointOp op, const FEFunction &input, const FESpace &target)
{
  const FESpace &source = *input.space;
  require_same_mesh(source, target);
  const bool zero_variant =
      op == AdjointOp::curl_h0 || op == AdjointOp::grad_h0 || op == AdjointOp::div_h0;
  const bool target_bc = target.bc() == BoundaryCondition::homogeneous_essential;
  if (zero_variant != target_bc)
  {
    throw UsageError(std::string(to_string(op)) +
                     (zero_variant ? " needs a target with essential boundary conditions"
                                   : " needs a target without boundary conditions"));
  }

  // rhs = sign * D^T M_source x, where D maps target -> source.
  Vector rhs;
  switch (op)
  {
    case AdjointOp::curl_h:
    case AdjointOp::curl_h0:
    {
      if (source.family() != Family::raviart_thomas || target.family() != Family::nedelec1)
      {
        throw UsageError("curl adjoint maps raviart_thomas to nedelec1");
      }
      const SparseMatrix c = derivative_matrix(DerivativeOp::curl, target, source);
      const SparseMatrix m = assemble_bilinear(BilinearForm::mass, source, source);
      rhs = c.transpose() * (m * input.coeffs);
      break;
    }
    case AdjointOp::grad_h:
    case AdjointOp::grad_h0:
    {
      if (source.family() != Family::dg || target.family() != Family::raviart_thomas)
      {
        throw UsageError("grad adjoint maps dg to raviart_thomas");
      }
      const SparseMatrix d = derivative_matrix(DerivativeOp::div, target, source);
      const SparseMatrix m = assemble_bilinear(BilinearForm::mass, source, source);
      rhs = -(d.transpose() * (m * input.coeffs));
      break;
    }
    case AdjointOp::div_h:
    case AdjointOp::div_h0:
    {
      if (source.family() != Family::nedelec1 || target.family() != Family::lagrange)
      {
        throw UsageError("div adjoint maps nedelec1 to lagrange");
      }
      const SparseMatrix g = derivative_matrix(DerivativeOp::grad, target, source);
      const SparseMatrix m = assemble_bilinear(BilinearForm::mass, source, source);
      rhs = -(g.transpose() * (m * input.coeffs));
      break;
    }
  }
  const auto free = target.free_dofs();
  const SparseMatrix mt = assemble_bilinear(BilinearForm::mass, target, target).submatrix(free, free);
  const Vector r = target.restrict(rhs);
  SolveResult res = solve_sparse(mt, r, 1e-10);
  if (res.report.status != SolveStatus::ok)
  {
    throw SolverError("mass solve for " + std::string(to_string(op)) + " failed: " +
                      res.report.message);
  }
  return FEFunction(target, target.extend(res.x));
}

}  // namespace feec
