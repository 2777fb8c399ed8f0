// SPDX-License-Identifier: Apache-2.0

#ifndef FEEC_SOLVER_HPP
#define FEEC_SOLVER_HPP

#include <optional>
#include <string>
#include <string_view>

#include "feec/assembly.hpp"
#include "feec/sparse.hpp"

namespace feec
{

enum class SolveStatus
{
  ok,
  singular,   // structurally or numerically singular; no solution returned
  breakdown   // factorization succeeded but the residual exceeds the tolerance
};

std::string_view to_string(SolveStatus status);

struct SolveReport
{
  SolveStatus status = SolveStatus::ok;
  double relative_residual = 0.0;
  double rcond = 0.0;
  long factor_nnz = 0;
  double seconds = 0.0;
  std::string message;
};

struct SolveResult
{
  Vector x;  // empty unless a factorization was obtained
  SolveReport report;
};

// Pivots below this reciprocal condition estimate are treated as singular.
inline constexpr double kSingularRcond = 1e-13;

// Sparse LU with partial pivoting and a nested-dissection (METIS) fill-reducing ordering.
SolveResult solve_sparse(const SparseMatrix &a, const Vector &b, double tol = 1e-10);

struct SystemSolution
{
  explicit SystemSolution(const SaddleSystem &sys);

  FEFunction mu;
  FEFunction u;
  std::optional<FEFunction> p;  // stokes only
  double multiplier = 0.0;      // zero-mean multiplier (stokes only)
  Vector x;                     // monolithic solution
  SolveReport report;
};

// Solves and unpacks per the layout. On failure the fields stay zero and the report says
// why.
SystemSolution solve_system(const SaddleSystem &sys, double tol = 1e-10);

}  // namespace feec

#endif  // FEEC_SOLVER_HPP
