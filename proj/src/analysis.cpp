// SPDX-License-Identifier: Apache-2.0

#include "feec/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include <Eigen/Dense>

#include "feec/error.hpp"
#include "feec/solver.hpp"

namespace feec
{

namespace
{

using Dense = Eigen::MatrixXd;

constexpr DerivativeOp kOps[3] = {DerivativeOp::grad, DerivativeOp::curl, DerivativeOp::div};

std::vector<int> all_dofs(const FESpace &space)
{
  std::vector<int> ids(space.n_dofs());
  for (int i = 0; i < space.n_dofs(); i++)
  {
    ids[i] = i;
  }
  return ids;
}

std::vector<int> free_list(const FESpace &space)
{
  return {space.free_dofs().begin(), space.free_dofs().end()};
}

void require_dense(const FESpace &space, const char *what)
{
  if (space.n_free() > kDenseLimit)
  {
    throw CapabilityError(std::string(what) + ": " + std::to_string(space.n_free()) +
                          " free DOFs exceed the dense limit of " + std::to_string(kDenseLimit));
  }
}

Dense mass_free(const FESpace &space)
{
  const auto free = free_list(space);
  return assemble_bilinear(BilinearForm::mass, space, space).submatrix(free, free).to_dense();
}

// Derivative from `from` into `to` restricted to the free DOFs of both.
Dense derivative_free(const FESpace &from, const FESpace &to)
{
  const auto rows = free_list(to);
  const auto cols = free_list(from);
  return derivative_matrix(kOps[form_level(from.family())], from, to)
      .submatrix(rows, cols)
      .to_dense();
}

double max_abs(const Dense &a)
{
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

}  // namespace

FESpace sequence_space(std::shared_ptr<const Mesh> mesh, int level, int k, BoundaryCondition bc)
{
  switch (level)
  {
    case 0:
      return build_space(std::move(mesh), Family::lagrange, k, bc);
    case 1:
      return build_space(std::move(mesh), Family::nedelec1, k, bc);
    case 2:
      return build_space(std::move(mesh), Family::raviart_thomas, k, bc);
    case 3:
      return build_space(std::move(mesh), Family::dg, k, BoundaryCondition::none);
    default:
      throw UsageError("form level must be in 0..3, got " + std::to_string(level));
  }
}

int form_level(Family family)
{
  switch (family)
  {
    case Family::lagrange:
      return 0;
    case Family::nedelec1:
      return 1;
    case Family::raviart_thomas:
      return 2;
    case Family::dg:
      return 3;
  }
  return -1;
}

HarmonicBasis harmonic_basis(std::shared_ptr<const Mesh> mesh, int level, BoundaryCondition bc,
                             int k)
{
  if (level < 0 || level > 2)
  {
    throw UsageError("harmonic forms are computed for levels 0..2");
  }
  if (bc == BoundaryCondition::zero_mean)
  {
    throw UsageError("harmonic forms take bc none or homogeneous_essential");
  }
  HarmonicBasis basis;
  basis.level = level;
  basis.bc = bc;
  basis.space = std::make_shared<const FESpace>(sequence_space(mesh, level, k, bc));
  const FESpace &v = *basis.space;
  require_dense(v, "harmonic_basis");
  const int nv = v.n_free();
  if (nv == 0)
  {
    return basis;
  }
  const Dense m = mass_free(v);

  // Each block is scaled to unit max entry so the threshold sees comparable rows.
  const FESpace next = sequence_space(mesh, level + 1, k, bc);
  Dense d = derivative_free(v, next);
  Dense adj(0, nv);
  if (level > 0)
  {
    const FESpace prev = sequence_space(mesh, level - 1, k, bc);
    adj = derivative_free(prev, v).transpose() * m;
  }
  if (max_abs(d) > 0.0)
  {
    d /= max_abs(d);
  }
  if (max_abs(adj) > 0.0)
  {
    adj /= max_abs(adj);
  }
  Dense stacked(d.rows() + adj.rows(), nv);
  stacked << d, adj;

  Dense null;
  if (stacked.rows() == 0)
  {
    null = Dense::Identity(nv, nv);
  }
  else
  {
    const Eigen::BDCSVD<Dense> svd(stacked, Eigen::ComputeFullV);
    const auto &s = svd.singularValues();
    const double threshold = 1e-8 * (s.size() > 0 ? s[0] : 0.0);
    int rank = 0;
    while (rank < s.size() && s[rank] > threshold)
    {
      rank++;
    }
    null = svd.matrixV().rightCols(nv - rank);
  }
  if (null.cols() == 0)
  {
    return basis;
  }
  // L2-orthonormalize: B = N L^{-T} with N^T M N = L L^T.
  const Dense gram = null.transpose() * m * null;
  const Eigen::LLT<Dense> llt(gram);
  const Dense orth = llt.matrixU().solve(null.transpose()).transpose();
  for (int j = 0; j < orth.cols(); j++)
  {
    basis.vectors.push_back(v.extend(orth.col(j)));
  }
  return basis;
}

HodgeParts hodge_decompose(const FEFunction &input, const HarmonicBasis &basis)
{
  const FESpace &v = *input.space;
  if (basis.space->n_dofs() != v.n_dofs() || basis.space->family() != v.family() ||
      basis.space->bc() != v.bc() || &basis.space->mesh() != &v.mesh())
  {
    throw UsageError("hodge_decompose: harmonic basis lives on a different space");
  }
  require_dense(v, "hodge_decompose");
  const Dense m = mass_free(v);
  const Vector x = v.restrict(input.coeffs);

  Vector harmonic = Vector::Zero(x.size());
  for (const Vector &b : basis.vectors)
  {
    const Vector bf = v.restrict(b);
    harmonic += bf.dot(m * x) * bf;
  }

  // Exact part: L2 projection onto the image of the previous derivative, as a least
  // squares problem in the mass-weighted norm (the derivative has a kernel).
  Vector exact = Vector::Zero(x.size());
  if (basis.level > 0)
  {
    const FESpace prev = sequence_space(v.mesh_ptr(), basis.level - 1, v.degree(), v.bc());
    const Dense d = derivative_free(prev, v);
    if (d.cols() > 0)
    {
      const Eigen::LLT<Dense> llt(m);
      const Dense r = llt.matrixU();
      const Eigen::CompleteOrthogonalDecomposition<Dense> cod(r * d);
      exact = d * cod.solve(r * x);
    }
  }
  const Vector coexact = x - exact - harmonic;
  return {FEFunction(v, v.extend(exact)), FEFunction(v, v.extend(harmonic)),
          FEFunction(v, v.extend(coexact))};
}

FEFunction project_pi_circle(const FEFunction &tau, const FESpace &sigma0)
{
  const FESpace &sigma = *tau.space;
  if (sigma.family() != Family::nedelec1 || sigma0.family() != Family::nedelec1 ||
      sigma0.bc() != BoundaryCondition::homogeneous_essential ||
      sigma.degree() != sigma0.degree() || &sigma.mesh() != &sigma0.mesh())
  {
    throw UsageError("project_pi_circle maps nedelec1 to nedelec1 with essential bc on the "
                     "same mesh and degree");
  }
  const auto mesh = sigma0.mesh_ptr();
  const int k = sigma0.degree();
  const FESpace rt = sequence_space(mesh, 2, k, BoundaryCondition::none);
  const FESpace p0 = sequence_space(mesh, 0, k, BoundaryCondition::homogeneous_essential);
  const HarmonicBasis harm = harmonic_basis(mesh, 1, BoundaryCondition::homogeneous_essential, k);

  const auto s0 = free_list(sigma0);
  const auto rt_all = all_dofs(rt);
  const SparseMatrix curl = derivative_matrix(DerivativeOp::curl, sigma, rt);
  const SparseMatrix c0 = curl.submatrix(rt_all, s0);
  const SparseMatrix m_rt = assemble_bilinear(BilinearForm::mass, rt, rt);
  const SparseMatrix m_s0 =
      assemble_bilinear(BilinearForm::mass, sigma0, sigma0).submatrix(s0, s0);
  const SparseMatrix grad0 =
      derivative_matrix(DerivativeOp::grad, p0, sigma0).submatrix(s0, free_list(p0));

  const SparseMatrix a = multiply(c0.transpose(), multiply(m_rt, c0));
  const SparseMatrix mg = multiply(m_s0, grad0);
  const int ns = static_cast<int>(s0.size());
  const int ng = mg.cols();
  const int nh = harm.dimension();
  const int n = ns + ng + nh;

  // [ C0^T M C0   M G   M H ] [tau0 ]   [ C0^T M C tau ]
  // [ G^T M       0     0   ] [phi  ] = [ 0            ]
  // [ H^T M       0     0   ] [alpha]   [ 0            ]
  std::vector<Triplet> trip = a.triplets();
  for (const Triplet &t : mg.triplets())
  {
    trip.push_back({t.row, ns + t.col, t.value});
    trip.push_back({ns + t.col, t.row, t.value});
  }
  for (int j = 0; j < nh; j++)
  {
    const Vector mh = m_s0 * sigma0.restrict(harm.vectors[j]);
    for (int i = 0; i < ns; i++)
    {
      if (mh[i] != 0.0)
      {
        trip.push_back({i, ns + ng + j, mh[i]});
        trip.push_back({ns + ng + j, i, mh[i]});
      }
    }
  }
  const SparseMatrix sys = SparseMatrix::from_triplets(n, n, std::move(trip));
  Vector rhs = Vector::Zero(n);
  rhs.head(ns) = c0.transpose() * (m_rt * (curl * tau.coeffs));
  if (rhs.norm() == 0.0)
  {
    return FEFunction(sigma0);
  }
  const SolveResult res = solve_sparse(sys, rhs, 1e-10);
  if (res.report.status != SolveStatus::ok)
  {
    throw SolverError("pi-circle projection: " + res.report.message);
  }
  return FEFunction(sigma0, sigma0.extend(res.x.head(ns)));
}

double curl_dual_norm(const FEFunction &tau, const FESpace &velocity0)
{
  const FESpace &sigma = *tau.space;
  if (velocity0.family() != Family::raviart_thomas ||
      velocity0.bc() != BoundaryCondition::homogeneous_essential)
  {
    throw UsageError("curl_dual_norm needs raviart_thomas with essential bc");
  }
  const auto v0 = free_list(velocity0);
  const SparseMatrix m = assemble_bilinear(BilinearForm::mass, velocity0, velocity0);
  const SparseMatrix dd = assemble_bilinear(BilinearForm::divdiv, velocity0, velocity0);
  const SparseMatrix riesz = add(m, dd, 1.0, 1.0).submatrix(v0, v0);
  // r_i = (curl tau, v_i)
  const SparseMatrix k = assemble_bilinear(BilinearForm::curl_coupling, sigma, velocity0);
  const Vector r = velocity0.restrict(k * tau.coeffs);
  if (r.norm() == 0.0)
  {
    return 0.0;
  }
  const SolveResult z = solve_sparse(riesz, r, 1e-10);
  if (z.report.status != SolveStatus::ok)
  {
    throw SolverError("H(div) Riesz problem: " + z.report.message);
  }
  return std::sqrt(std::max(0.0, r.dot(z.x)));
}

std::vector<NormEquivalenceRow> norm_equivalence_report(const std::vector<int> &levels, int k)
{
  if (levels.size() < 2)
  {
    throw UsageError("norm equivalence report needs at least two levels");
  }
  constexpr double pi = std::numbers::pi;
  struct Sample
  {
    const char *name;
    VectorField field;
  };
  const Sample samples[] = {
      {"rotational",
       [](const Point &x) {
         return Vec3{std::sin(pi * x[1]) * x[2], std::cos(pi * x[2]) * x[0],
                     std::sin(pi * x[0]) * x[1] * x[1]};
       }},
      {"gradient",
       [](const Point &x) {
         // grad of sin(pi x) y z
         return Vec3{pi * std::cos(pi * x[0]) * x[1] * x[2], std::sin(pi * x[0]) * x[2],
                     std::sin(pi * x[0]) * x[1]};
       }},
  };
  std::vector<NormEquivalenceRow> rows;
  for (int n : levels)
  {
    auto mesh = std::make_shared<const Mesh>(build_structured_cube(n));
    const FESpace sigma = sequence_space(mesh, 1, k, BoundaryCondition::none);
    const FESpace sigma0 = sequence_space(mesh, 1, k, BoundaryCondition::homogeneous_essential);
    const FESpace velocity0 =
        sequence_space(mesh, 2, k, BoundaryCondition::homogeneous_essential);
    for (const Sample &s : samples)
    {
      const FEFunction tau = canonical_interpolate(sigma, s.field);
      const FEFunction pi_tau = project_pi_circle(tau, sigma0);
      NormEquivalenceRow row;
      row.n = n;
      row.h_max = mesh->h_max();
      row.sample = s.name;
      row.tau_l2 = l2_norm(tau);
      row.curl_pi_circle = l2_norm(pi_tau, Quantity::derivative);
      row.pi_circle_hcurl = std::hypot(l2_norm(pi_tau), row.curl_pi_circle);
      row.dual_norm = curl_dual_norm(tau, velocity0);
      row.ratio = (row.tau_l2 + row.pi_circle_hcurl) / (row.tau_l2 + row.dual_norm);
      rows.push_back(row);
    }
  }
  return rows;
}

void write_norm_equivalence_csv(std::ostream &os, const std::vector<NormEquivalenceRow> &rows)
{
  os << "n,h_max,sample,tau_l2,pi_circle_hcurl,curl_pi_circle,dual_norm,ratio\n";
  char buf[512];
  for (const auto &r : rows)
  {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%s,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.n, r.h_max,
                  r.sample.c_str(), r.tau_l2, r.pi_circle_hcurl, r.curl_pi_circle, r.dual_norm,
                  r.ratio);
    os << buf;
  }
}

SchurSolution solve_schur_form(const FESpace &sigma, const FESpace &velocity,
                               const VectorField &f)
{
  if (sigma.bc() != BoundaryCondition::none ||
      velocity.bc() != BoundaryCondition::homogeneous_essential)
  {
    throw UsageError("solve_schur_form needs Sigma_h without bc and V_h with essential bc");
  }
  require_dense(velocity, "solve_schur_form");
  const auto v0 = free_list(velocity);
  const int nv = static_cast<int>(v0.size());
  // (curl tau_j, v_i) and (div u_j, div v_i) on the free velocity DOFs.
  const SparseMatrix k = assemble_bilinear(BilinearForm::curl_coupling, sigma, velocity);
  const Dense d = assemble_bilinear(BilinearForm::divdiv, velocity, velocity)
                      .submatrix(v0, v0)
                      .to_dense();

  // Column j of K curl_h applied to the j-th basis function.
  Dense s(nv, nv);
  for (int j = 0; j < nv; j++)
  {
    FEFunction e(velocity);
    e.coeffs[v0[j]] = 1.0;
    const FEFunction mu = apply_discrete_adjoint(AdjointOp::curl_h, e, sigma);
    s.col(j) = velocity.restrict(k * mu.coeffs);
  }
  s += d;
  const Vector load = velocity.restrict(assemble_load(f, velocity));
  const Eigen::PartialPivLU<Dense> lu(s);
  const Vector u = lu.solve(load);
  const double res = (s * u - load).norm() / std::max(load.norm(), 1e-300);
  if (!std::isfinite(res) || res > 1e-8)
  {
    throw SolverError("schur form: relative residual " + std::to_string(res));
  }
  SchurSolution out{FEFunction(sigma), FEFunction(velocity, velocity.extend(u))};
  out.mu = apply_discrete_adjoint(AdjointOp::curl_h, out.u, sigma);
  return out;
}

}  // namespace feec
