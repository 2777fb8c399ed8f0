// SPDX-License-Identifier: Apache-2.0

#include "feec/solver.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include <Eigen/LU>
#include <umfpack.h>

#include "feec/error.hpp"

namespace feec
{

std::string_view to_string(SolveStatus status)
{
  switch (status)
  {
    case SolveStatus::ok:
      return "ok";
    case SolveStatus::singular:
      return "singular";
    case SolveStatus::breakdown:
      return "breakdown";
  }
  return "unknown";
}

namespace
{

// Frees UMFPACK objects on every exit path.
struct UmfpackHandles
{
  void *symbolic = nullptr;
  void *numeric = nullptr;
  ~UmfpackHandles()
  {
    if (numeric)
    {
      umfpack_di_free_numeric(&numeric);
    }
    if (symbolic)
    {
      umfpack_di_free_symbolic(&symbolic);
    }
  }
};

bool has_empty_row_or_col(const SparseMatrix &a)
{
  std::vector<char> col_used(a.cols(), 0);
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  for (int r = 0; r < a.rows(); r++)
  {
    if (rp[r] == rp[r + 1])
    {
      return true;
    }
    for (int p = rp[r]; p < rp[r + 1]; p++)
    {
      col_used[ci[p]] = 1;
    }
  }
  for (char c : col_used)
  {
    if (!c)
    {
      return true;
    }
  }
  return false;
}

}  // namespace

namespace
{

// LU factorization that can be reused for several right-hand sides.
class LuFactor
{
public:
  explicit LuFactor(const SparseMatrix &a) : a_(a) {}

  // Fills the status fields of `rep`; returns false if no usable factorization exists.
  bool factor(SolveReport &rep)
  {
    const int n = a_.rows();
    if (has_empty_row_or_col(a_))
    {
      rep.status = SolveStatus::singular;
      rep.message = "structurally singular (empty row or column)";
      return false;
    }
    // The CSR arrays of A are the CSC arrays of A^T; UMFPACK_At then solves A x = b.
    umfpack_di_defaults(control_);
    control_[UMFPACK_ORDERING] = UMFPACK_ORDERING_METIS;
    double info[UMFPACK_INFO];
    int status = umfpack_di_symbolic(n, n, ap(), ai(), ax(), &h_.symbolic, control_, info);
    if (status != UMFPACK_OK)
    {
      rep.status = SolveStatus::singular;
      rep.message = "symbolic factorization failed (status " + std::to_string(status) + ")";
      return false;
    }
    status = umfpack_di_numeric(ap(), ai(), ax(), h_.symbolic, &h_.numeric, control_, info);
    rep.rcond = info[UMFPACK_RCOND];
    rep.factor_nnz = static_cast<long>(info[UMFPACK_LNZ] + info[UMFPACK_UNZ]);
    if (status != UMFPACK_OK && status != UMFPACK_WARNING_singular_matrix)
    {
      rep.status = SolveStatus::singular;
      rep.message = "numeric factorization failed (status " + std::to_string(status) + ")";
      return false;
    }
    if (status == UMFPACK_WARNING_singular_matrix || !(rep.rcond >= kSingularRcond))
    {
      rep.status = SolveStatus::singular;
      rep.message = "numerically singular (rcond " + std::to_string(rep.rcond) + ")";
      return false;
    }
    return true;
  }

  // Returns false on a failed triangular solve.
  bool solve(const Vector &b, Vector &x, SolveReport &rep)
  {
    x.resize(a_.rows());
    double info[UMFPACK_INFO];
    const int status = umfpack_di_solve(UMFPACK_At, ap(), ai(), ax(), x.data(), b.data(),
                                        h_.numeric, control_, info);
    if (status != UMFPACK_OK && status != UMFPACK_WARNING_singular_matrix)
    {
      rep.status = SolveStatus::breakdown;
      rep.message = "triangular solve failed (status " + std::to_string(status) + ")";
      return false;
    }
    return true;
  }

private:
  const int *ap() const { return a_.row_ptr().data(); }
  const int *ai() const { return a_.col_idx().data(); }
  const double *ax() const { return a_.values().data(); }

  const SparseMatrix &a_;
  UmfpackHandles h_;
  double control_[UMFPACK_CONTROL];
};

void check_residual(const SparseMatrix &a, const Vector &b, const Vector &x, double tol,
                    SolveReport &rep)
{
  const double bnorm = b.norm();
  const double rnorm = (a * x - b).norm();
  rep.relative_residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
  rep.status = rep.relative_residual < tol ? SolveStatus::ok : SolveStatus::breakdown;
  if (rep.status == SolveStatus::breakdown)
  {
    rep.message = "relative residual " + std::to_string(rep.relative_residual) +
                  " above tolerance";
  }
}

// Stokes system with the zero-mean border [A0 c; c^T 0] (c = (0, 0, m)). Its dense border
// wrecks the fill of a direct LU, so we factor A1 = A0 + e e^T instead, with e the unit
// vector of a pressure DOF on which the constant has a nonzero coefficient (A1 is then
// nonsingular), and recover x, lambda from three solves and a 2x2 system:
//   x = A1^{-1} (r - c lambda + e w),  c^T x = s,  w = e^T x.
// The residual is still measured on the monolithic matrix.
SolveResult solve_bordered(const SaddleSystem &sys, double tol)
{
  const auto start = std::chrono::steady_clock::now();
  const BlockLayout &p_block = sys.block("p");
  const int lam = sys.block("lambda").offset;
  const int n0 = lam;

  std::vector<int> keep(n0);
  for (int i = 0; i < n0; i++)
  {
    keep[i] = i;
  }
  const FEFunction one = canonical_interpolate(
      *sys.pressure, as_vector_field([](const Point &) { return 1.0; }));
  int pivot = 0;
  for (int i = 1; i < p_block.size; i++)
  {
    if (std::abs(one.coeffs[i]) > std::abs(one.coeffs[pivot]))
    {
      pivot = i;
    }
  }
  const int j0 = p_block.offset + pivot;
  std::vector<Triplet> trip = sys.matrix.submatrix(keep, keep).triplets();
  trip.push_back({j0, j0, 1.0});
  const SparseMatrix a1 = SparseMatrix::from_triplets(n0, n0, std::move(trip));

  SolveResult result;
  SolveReport &rep = result.report;
  auto finish = [&] {
    rep.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  };
  LuFactor lu(a1);
  if (!lu.factor(rep))
  {
    return finish();
  }
  Vector c = Vector::Zero(n0), e = Vector::Zero(n0);
  c.segment(p_block.offset, p_block.size) = sys.mean_row;
  e[j0] = 1.0;
  Vector yr, yc, ye;
  if (!lu.solve(sys.rhs.head(n0), yr, rep) || !lu.solve(c, yc, rep) || !lu.solve(e, ye, rep))
  {
    return finish();
  }
  // [ -c.yc  c.ye     ] [lambda]   [ s - c.yr ]
  // [ -e.yc  e.ye - 1 ] [w     ] = [ -e.yr    ]
  const double s = sys.rhs[lam];
  Eigen::Matrix2d m;
  m << -c.dot(yc), c.dot(ye), -e.dot(yc), e.dot(ye) - 1.0;
  const Eigen::Vector2d rhs(s - c.dot(yr), -e.dot(yr));
  const Eigen::FullPivLU<Eigen::Matrix2d> small(m);
  if (!small.isInvertible())
  {
    rep.status = SolveStatus::singular;
    rep.message = "zero-mean border is singular";
    return finish();
  }
  const Eigen::Vector2d lw = small.solve(rhs);
  Vector x(n0 + 1);
  x.head(n0) = yr - lw[0] * yc + lw[1] * ye;
  x[lam] = lw[0];
  check_residual(sys.matrix, sys.rhs, x, tol, rep);
  result.x = std::move(x);
  return finish();
}

}  // namespace

SolveResult solve_sparse(const SparseMatrix &a, const Vector &b, double tol)
{
  if (a.rows() != a.cols() || b.size() != a.rows())
  {
    throw UsageError("solve_sparse: matrix must be square and match the right-hand side");
  }
  const auto start = std::chrono::steady_clock::now();
  SolveResult result;
  SolveReport &rep = result.report;
  if (a.rows() == 0)
  {
    result.x = Vector::Zero(0);
    return result;
  }
  LuFactor lu(a);
  Vector x;
  if (lu.factor(rep) && lu.solve(b, x, rep))
  {
    check_residual(a, b, x, tol, rep);
    result.x = std::move(x);
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

SystemSolution::SystemSolution(const SaddleSystem &sys) : mu(*sys.sigma), u(*sys.velocity)
{
  if (sys.pressure)
  {
    p.emplace(*sys.pressure);
  }
}

SystemSolution solve_system(const SaddleSystem &sys, double tol)
{
  SystemSolution sol(sys);
  SolveResult r = sys.kind == SystemKind::stokes_vvp ? solve_bordered(sys, tol)
                                                     : solve_sparse(sys.matrix, sys.rhs, tol);
  sol.report = r.report;
  if (r.x.size() == 0 || r.report.status == SolveStatus::singular)
  {
    return sol;
  }
  sol.x = std::move(r.x);
  const auto &mu_block = sys.block("mu");
  const auto &u_block = sys.block("u");
  // The naive variant keeps every vorticity DOF as an unknown.
  const Vector mu = sol.x.segment(mu_block.offset, mu_block.size);
  sol.mu.coeffs = mu_block.size == sys.sigma->n_dofs() ? mu : sys.sigma->extend(mu);
  sol.u.coeffs = sys.velocity->extend(sol.x.segment(u_block.offset, u_block.size));
  if (sys.pressure)
  {
    const auto &p_block = sys.block("p");
    sol.p->coeffs = sys.pressure->extend(sol.x.segment(p_block.offset, p_block.size));
    sol.multiplier = sol.x[sys.block("lambda").offset];
  }
  return sol;
}

}  // namespace feec
