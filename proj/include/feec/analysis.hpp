// SPDX-License-Identifier: Apache-2.0

#ifndef FEEC_ANALYSIS_HPP
#define FEEC_ANALYSIS_HPP

#include <iosfwd>
#include <memory>
#include <vector>

#include "feec/assembly.hpp"
#include "feec/space.hpp"

namespace feec
{

// Spaces of the discrete sequence by form level:
//   0 lagrange_k -> 1 nedelec1_k -> 2 raviart_thomas_k -> 3 dg_k
// dg never carries essential conditions, so `bc` is dropped at level 3.
FESpace sequence_space(std::shared_ptr<const Mesh> mesh, int level, int k, BoundaryCondition bc);

// Form level of a family (inverse of sequence_space).
int form_level(Family family);

// Dense null-space computations refuse spaces with more free DOFs than this.
inline constexpr int kDenseLimit = 8000;

// L2-orthonormal basis of the discrete harmonic forms at one level: fields with zero
// derivative that are L2-orthogonal to the image of the previous derivative. Coefficient
// vectors use the full numbering of `space`.
struct HarmonicBasis
{
  int level = 0;
  BoundaryCondition bc = BoundaryCondition::none;
  std::shared_ptr<const FESpace> space;
  std::vector<Vector> vectors;

  int dimension() const { return static_cast<int>(vectors.size()); }
};

// Null space of [D_level; D_{level-1}^T M_level] by dense SVD (threshold 1e-8 sigma_max).
// Raises CapabilityError above kDenseLimit free DOFs.
HarmonicBasis harmonic_basis(std::shared_ptr<const Mesh> mesh, int level, BoundaryCondition bc,
                             int k);

struct HodgeParts
{
  FEFunction exact;
  FEFunction harmonic;
  FEFunction coexact;
};

// L2-orthogonal splitting of `input` into image of the previous derivative, harmonic forms
// and the remainder (image of the discrete adjoint). `basis` must live on input's space.
HodgeParts hodge_decompose(const FEFunction &input, const HarmonicBasis &basis);

// Pi-circle projection of tau in Sigma_h onto `sigma0` (nedelec1 with essential bc):
//   (curl tau0, curl psi) = (curl tau, curl psi)  for all psi in sigma0,
// with tau0 L2-orthogonal to grad P_{h,0} and to the harmonic fields of sigma0.
FEFunction project_pi_circle(const FEFunction &tau, const FESpace &sigma0);

// Discrete dual norm sup_{v in V_{h,0}} (curl tau, v) / ||v||_{H(div)}.
double curl_dual_norm(const FEFunction &tau, const FESpace &velocity0);

struct NormEquivalenceRow
{
  int n = 0;
  double h_max = 0.0;
  std::string sample;
  double tau_l2 = 0.0;
  double pi_circle_hcurl = 0.0;  // ||Pi tau||_{H(curl)}
  double curl_pi_circle = 0.0;   // ||curl Pi tau||
  double dual_norm = 0.0;        // ||curl tau||_{V'_{h,0}}
  // (||tau|| + ||Pi tau||_{H(curl)}) / (||tau|| + ||curl tau||_{V'_{h,0}})
  double ratio = 0.0;
};

// One row per (level, sample) on the unit cube. Samples: a smooth rotational field and a
// gradient field. Raises UsageError for fewer than two levels.
std::vector<NormEquivalenceRow> norm_equivalence_report(const std::vector<int> &levels, int k);

void write_norm_equivalence_csv(std::ostream &os, const std::vector<NormEquivalenceRow> &rows);

struct SchurSolution
{
  FEFunction mu;
  FEFunction u;
};

// Vorticity eliminated: find u in V_{h,0} with
//   (curl curl_h u, v) + (div u, div v) = (f, v),  mu = curl_h u,
// built densely from the discrete adjoint. Small meshes only (CapabilityError otherwise).
SchurSolution solve_schur_form(const FESpace &sigma, const FESpace &velocity,
                               const VectorField &f);

}  // namespace feec

#endif  // FEEC_ANALYSIS_HPP
