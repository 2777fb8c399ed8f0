// SPDX-License-Identifier: Apache-2.0

#ifndef FEEC_ASSEMBLY_HPP
#define FEEC_ASSEMBLY_HPP

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "feec/parallel.hpp"
#include "feec/space.hpp"
#include "feec/sparse.hpp"

namespace feec
{

// Coefficient-level derivative grad: P -> Sigma, curl: Sigma -> V or div: V -> S, on the
// full (unconstrained) numberings. Exact: the derivative of every discrete field lies in the
// target space. Raises UsageError for an invalid pair.
SparseMatrix derivative_matrix(DerivativeOp op, const FESpace &from, const FESpace &to);

enum class BilinearForm
{
  mass,           // (phi_j, psi_i), same family
  divdiv,         // (div phi_j, div psi_i), raviart_thomas
  curl_coupling,  // (curl tau_j, v_i), trial nedelec1, test raviart_thomas
  div_pressure    // (q_i, div v_j), trial raviart_thomas, test dg
};

std::string_view to_string(BilinearForm kind);

struct AssemblyOptions
{
  int quad_order = -1;  // -1: 2k + 2
  Execution exec = Execution::parallel;
  // Optional cell traversal order (a permutation of all cells); empty means 0..T-1.
  std::span<const int> cell_order{};
};

// Rows are test DOFs, columns trial DOFs, both on the full numbering.
SparseMatrix assemble_bilinear(BilinearForm kind, const FESpace &trial, const FESpace &test,
                               const AssemblyOptions &options = {});

// <f, phi_i> on the full numbering; default rule order 2k + 6.
Vector assemble_load(const VectorField &f, const FESpace &space, int quad_order = -1,
                     Execution exec = Execution::parallel);

// Integrals of the basis functions (scalar spaces).
Vector basis_integrals(const FESpace &space);

// Named slice of the monolithic unknown vector. `sign` is the entry of the diagonal sign
// matrix S with A^T = S A S.
struct BlockLayout
{
  std::string name;
  int offset = 0;
  int size = 0;
  int sign = 1;
};

enum class SystemKind
{
  hodge_laplace,
  stokes_vvp
};

//
// Monolithic mixed system with its blocks (all restricted to the unknowns of the layout).
//
struct SaddleSystem
{
  SystemKind kind = SystemKind::hodge_laplace;
  SparseMatrix matrix;
  Vector rhs;
  std::vector<BlockLayout> layout;

  SparseMatrix mass_sigma;     // M_Sigma
  SparseMatrix curl_coupling;  // K
  SparseMatrix divdiv;         // D
  SparseMatrix div_pressure;   // B (stokes only)
  Vector mean_row;             // m (stokes only)

  const FESpace *sigma = nullptr;
  const FESpace *velocity = nullptr;
  const FESpace *pressure = nullptr;
  // True for the Petrov-Galerkin variant with essential conditions on the vorticity trial
  // space (kept only as a negative example; it is singular).
  bool naive_vorticity = false;

  const BlockLayout &block(std::string_view name) const;
  Vector sign_vector() const;
  int size() const { return matrix.rows(); }
};

// Unknowns (mu_h, u_h) with mu_h in sigma (bc none) and u_h in velocity (essential bc):
//   [ M_Sigma  -K^T ] [mu]   [   0    ]
//   [ K         D   ] [u ] = [ <f,v>  ]
// Passing a sigma space with essential bc selects the naive variant: trial vorticities
// from Sigma_{h,0}, tests from Sigma_h, realized by zero columns for the constrained
// trial functions.
SaddleSystem assemble_hodge_laplace_system(const FESpace &sigma, const FESpace &velocity,
                                           const VectorField &f,
                                           const AssemblyOptions &options = {});

// Unknowns (mu_h, u_h, p_h, lambda) with the zero-mean pressure multiplier lambda:
//   [ M  -K^T   0   0 ]
//   [ K   D   -B^T  0 ]
//   [ 0   B    0    m ]
//   [ 0   0   m^T   0 ]
// and right-hand side (0, <f,v>, (g,q), 0).
SaddleSystem assemble_stokes_vvp_system(const FESpace &sigma, const FESpace &velocity,
                                        const FESpace &pressure, const VectorField &f,
                                        const ScalarField &g,
                                        const AssemblyOptions &options = {});

enum class AdjointOp
{
  curl_h,
  curl_h0,
  grad_h,
  grad_h0,
  div_h,
  div_h0
};

std::string_view to_string(AdjointOp op);

// Discrete adjoint of a derivative, realized by a mass solve in `target`:
//   curl_h:  (curl_h v, tau) = (v, curl tau)    for all tau in target (Sigma_h or Sigma_{h,0})
//   grad_h:  (-grad_h q, v)  = (q, div v)       for all v in target (V_h or V_{h,0})
//   div_h:   (-div_h tau, w) = (tau, grad w)    for all w in target (P_h or P_{h,0})
// The variants ending in 0 require a target with essential bc, the others one without.
FEFunction apply_discrete_adjoint(AdjointOp op, const FEFunction &input, const FESpace &target);

}  // namespace feec

#endif  // FEEC_ASSEMBLY_HPP
