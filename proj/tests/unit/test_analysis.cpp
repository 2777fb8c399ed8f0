// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include <gtest/gtest.h>

#include "feec/analysis.hpp"
#include "feec/error.hpp"
#include "feec/manufactured.hpp"
#include "feec/solver.hpp"
#include "../support/generators.hpp"

namespace feec
{
namespace
{

using testing::Gen;
constexpr auto kNone = BoundaryCondition::none;
constexpr auto kEss = BoundaryCondition::homogeneous_essential;

std::shared_ptr<const Mesh> cube(int n)
{
  return std::make_shared<const Mesh>(build_structured_cube(n));
}

std::shared_ptr<const Mesh> void_cube(int n)
{
  return std::make_shared<const Mesh>(build_cube_with_void(n));
}

double inner(const FEFunction &a, const FEFunction &b)
{
  const SparseMatrix m = assemble_bilinear(BilinearForm::mass, *a.space, *a.space);
  return a.coeffs.dot(m * b.coeffs);
}

TEST(HarmonicBasis, DimensionExamples)
{
  EXPECT_EQ(harmonic_basis(cube(2), 2, kNone, 1).dimension(), 0);
  EXPECT_EQ(harmonic_basis(void_cube(3), 2, kNone, 1).dimension(), 1);
  EXPECT_EQ(harmonic_basis(void_cube(3), 1, kNone, 1).dimension(), 0);
}

TEST(HarmonicBasis, BettiTriples)
{
  for (int n : {2, 3})
  {
    const auto mesh = cube(n);
    EXPECT_EQ(harmonic_basis(mesh, 0, kNone, 1).dimension(), 1);
    EXPECT_EQ(harmonic_basis(mesh, 1, kNone, 1).dimension(), 0);
    EXPECT_EQ(harmonic_basis(mesh, 2, kNone, 1).dimension(), 0);
  }
  const auto mesh = void_cube(3);
  const int expected[] = {1, 0, 1};
  for (int level = 0; level < 3; level++)
  {
    EXPECT_EQ(harmonic_basis(mesh, level, kNone, 1).dimension(), expected[level]);
  }
}

TEST(HarmonicBasis, IndependentOfRefinementAndDegree)
{
  EXPECT_EQ(harmonic_basis(cube(2), 0, kNone, 2).dimension(), 1);
  EXPECT_EQ(harmonic_basis(cube(2), 1, kNone, 2).dimension(), 0);
  EXPECT_EQ(harmonic_basis(cube(2), 2, kNone, 2).dimension(), 0);
  EXPECT_EQ(harmonic_basis(cube(4), 2, kNone, 1).dimension(), 0);
}

TEST(HarmonicBasis, EssentialVariantOnVoidCube)
{
  // With boundary conditions the counts swap roles: (b3, b2, b1) = (0, 1, 0).
  const auto mesh = void_cube(3);
  EXPECT_EQ(harmonic_basis(mesh, 0, kEss, 1).dimension(), 0);
  EXPECT_EQ(harmonic_basis(mesh, 1, kEss, 1).dimension(), 1);
  EXPECT_EQ(harmonic_basis(mesh, 2, kEss, 1).dimension(), 0);
}

TEST(HarmonicBasis, BasisInvariants)
{
  const auto mesh = void_cube(3);
  for (auto [level, bc] : {std::pair{2, kNone}, std::pair{1, kEss}, std::pair{0, kNone}})
  {
    const HarmonicBasis b = harmonic_basis(mesh, level, bc, 1);
    const FESpace &v = *b.space;
    for (int i = 0; i < b.dimension(); i++)
    {
      const FEFunction hi(v, b.vectors[i]);
      EXPECT_NEAR(inner(hi, hi), 1.0, 1e-10);
      for (int j = 0; j < i; j++)
      {
        EXPECT_NEAR(inner(hi, FEFunction(v, b.vectors[j])), 0.0, 1e-10);
      }
      // Zero derivative.
      const FESpace next = sequence_space(mesh, level + 1, 1, bc);
      const DerivativeOp op[] = {DerivativeOp::grad, DerivativeOp::curl, DerivativeOp::div};
      EXPECT_LT((derivative_matrix(op[level], v, next) * hi.coeffs).norm(), 1e-8);
      // Zero discrete adjoint: orthogonal to the image of the previous derivative.
      if (level > 0)
      {
        const FESpace prev = sequence_space(mesh, level - 1, 1, bc);
        const SparseMatrix m = assemble_bilinear(BilinearForm::mass, v, v);
        const Vector r =
            prev.restrict(derivative_matrix(op[level - 1], prev, v).transpose() * (m * hi.coeffs));
        EXPECT_LT(r.norm(), 1e-8);
      }
    }
  }
}

TEST(HarmonicBasis, LargeMeshRaisesCapabilityError)
{
  EXPECT_THROW(harmonic_basis(cube(12), 1, kNone, 1), CapabilityError);
}

TEST(HodgeDecompose, GradientIsExact)
{
  const auto mesh = void_cube(3);
  const HarmonicBasis b = harmonic_basis(mesh, 1, kNone, 1);
  const FESpace p = sequence_space(mesh, 0, 1, kNone);
  Gen gen(1);
  const Vector r = gen.vector(p.n_dofs());
  const FEFunction g(*b.space, derivative_matrix(DerivativeOp::grad, p, *b.space) * r);
  const HodgeParts parts = hodge_decompose(g, b);
  EXPECT_LT(l2_norm(parts.harmonic), 1e-9);
  EXPECT_LT(l2_norm(parts.coexact), 1e-9);
  EXPECT_LT((parts.exact.coeffs - g.coeffs).norm(), 1e-9);
}

TEST(HodgeDecompose, HarmonicFieldIsHarmonic)
{
  const HarmonicBasis b = harmonic_basis(void_cube(3), 2, kNone, 1);
  ASSERT_EQ(b.dimension(), 1);
  const HodgeParts parts = hodge_decompose(FEFunction(*b.space, b.vectors[0]), b);
  EXPECT_LT(l2_norm(parts.exact), 1e-9);
  EXPECT_LT(l2_norm(parts.coexact), 1e-9);
}

TEST(HodgeDecompose, RandomInputReconstructsOrthogonally)
{
  Gen gen(2);
  for (auto [mesh, level] : {std::pair{cube(2), 1}, std::pair{cube(2), 2},
                             std::pair{void_cube(3), 2}, std::pair{void_cube(3), 1}})
  {
    const HarmonicBasis b = harmonic_basis(mesh, level, kNone, 1);
    const FEFunction u(*b.space, gen.vector(b.space->n_dofs()));
    const HodgeParts parts = hodge_decompose(u, b);
    EXPECT_LT((parts.exact.coeffs + parts.harmonic.coeffs + parts.coexact.coeffs - u.coeffs)
                  .lpNorm<Eigen::Infinity>(),
              1e-9);
    EXPECT_NEAR(inner(parts.exact, parts.harmonic), 0.0, 1e-9);
    EXPECT_NEAR(inner(parts.exact, parts.coexact), 0.0, 1e-9);
    EXPECT_NEAR(inner(parts.harmonic, parts.coexact), 0.0, 1e-9);
    EXPECT_GT(l2_norm(parts.exact), 1e-3);
    EXPECT_GT(l2_norm(parts.coexact), 1e-3);

    // Projection triple: each part decomposes into itself.
    const HodgeParts again = hodge_decompose(parts.coexact, b);
    EXPECT_LT(l2_norm(again.exact) + l2_norm(again.harmonic), 1e-9);
    EXPECT_LT((again.coexact.coeffs - parts.coexact.coeffs).norm(), 1e-9);
    const HodgeParts ex = hodge_decompose(parts.exact, b);
    EXPECT_LT(l2_norm(ex.coexact) + l2_norm(ex.harmonic), 1e-9);
  }
}

TEST(HodgeDecompose, EssentialVariantOnVoidCube)
{
  Gen gen(3);
  const HarmonicBasis b = harmonic_basis(void_cube(3), 1, kEss, 1);
  const FESpace &s0 = *b.space;
  const FEFunction u(s0, s0.extend(gen.vector(s0.n_free())));
  const HodgeParts parts = hodge_decompose(u, b);
  EXPECT_GT(l2_norm(parts.harmonic), 1e-6);
  EXPECT_LT((parts.exact.coeffs + parts.harmonic.coeffs + parts.coexact.coeffs - u.coeffs).norm(),
            1e-9);
  EXPECT_NEAR(inner(parts.exact, parts.coexact), 0.0, 1e-9);
  EXPECT_NEAR(inner(parts.harmonic, parts.coexact), 0.0, 1e-9);
}

class PiCircle : public ::testing::Test
{
protected:
  PiCircle()
      : mesh(void_cube(3)),
        sigma(sequence_space(mesh, 1, 1, kNone)),
        sigma0(sequence_space(mesh, 1, 1, kEss)),
        rt(sequence_space(mesh, 2, 1, kNone))
  {
  }

  // (curl a, curl psi_i) for all free psi_i of sigma0.
  Vector curl_moments(const FEFunction &a) const
  {
    const SparseMatrix c = derivative_matrix(DerivativeOp::curl, *a.space, rt);
    const SparseMatrix c0 = derivative_matrix(DerivativeOp::curl, sigma0, rt);
    const SparseMatrix m = assemble_bilinear(BilinearForm::mass, rt, rt);
    return sigma0.restrict(c0.transpose() * (m * (c * a.coeffs)));
  }

  std::shared_ptr<const Mesh> mesh;
  FESpace sigma, sigma0, rt;
};

TEST_F(PiCircle, GradientMapsToZero)
{
  const FESpace p = sequence_space(mesh, 0, 1, kNone);
  Gen gen(4);
  const FEFunction g(sigma, derivative_matrix(DerivativeOp::grad, p, sigma) *
                                gen.vector(p.n_dofs()));
  EXPECT_LT(project_pi_circle(g, sigma0).coeffs.norm(), 1e-9);
}

TEST_F(PiCircle, GalerkinIdentityOrthogonalityAndIdempotence)
{
  Gen gen(5);
  const FEFunction tau(sigma, gen.vector(sigma.n_dofs()));
  const FEFunction t0 = project_pi_circle(tau, sigma0);
  for (int i = 0; i < sigma0.n_dofs(); i++)
  {
    if (sigma0.is_constrained(i))
    {
      EXPECT_EQ(t0.coeffs[i], 0.0);
    }
  }
  const Vector lhs = curl_moments(FEFunction(sigma, t0.coeffs));
  const Vector rhs = curl_moments(tau);
  EXPECT_LT((lhs - rhs).norm(), 1e-9 * std::max(1.0, rhs.norm()));

  // Orthogonal to grad P_{h,0} and to the harmonic fields of Sigma_{h,0}.
  const FESpace p0 = sequence_space(mesh, 0, 1, kEss);
  const SparseMatrix m = assemble_bilinear(BilinearForm::mass, sigma0, sigma0);
  const Vector mt = m * t0.coeffs;
  EXPECT_LT(p0.restrict(derivative_matrix(DerivativeOp::grad, p0, sigma0).transpose() * mt).norm(),
            1e-9);
  const HarmonicBasis h = harmonic_basis(mesh, 1, kEss, 1);
  ASSERT_EQ(h.dimension(), 1);
  EXPECT_NEAR(h.vectors[0].dot(mt), 0.0, 1e-9);

  // Energy bound and idempotence.
  EXPECT_LE(l2_norm(t0, Quantity::derivative), l2_norm(tau, Quantity::derivative) + 1e-9);
  const FEFunction t00 = project_pi_circle(FEFunction(sigma, t0.coeffs), sigma0);
  EXPECT_LT((t00.coeffs - t0.coeffs).norm(), 1e-9);
}

TEST_F(PiCircle, KernelOrthogonalElementIsFixed)
{
  // The range of the projection is exactly the kernel-orthogonal part of Sigma_{h,0}.
  Gen gen(6);
  const FEFunction seed(sigma, gen.vector(sigma.n_dofs()));
  const FEFunction t0 = project_pi_circle(seed, sigma0);
  const FEFunction again = project_pi_circle(FEFunction(sigma, t0.coeffs), sigma0);
  EXPECT_LT((again.coeffs - t0.coeffs).lpNorm<Eigen::Infinity>(), 1e-9);
}

TEST_F(PiCircle, RejectsWrongTarget)
{
  EXPECT_THROW(project_pi_circle(FEFunction(sigma), sigma), UsageError);
}

TEST(NormEquivalence, RatiosAndDualBound)
{
  const auto rows = norm_equivalence_report({2, 4}, 1);
  ASSERT_EQ(rows.size(), 4u);
  double lo = 1e300, hi = 0.0;
  for (const auto &r : rows)
  {
    EXPECT_LE(r.curl_pi_circle, r.dual_norm + 1e-8) << r.sample << " n=" << r.n;
    if (r.sample == "gradient")
    {
      EXPECT_NEAR(r.ratio, 1.0, 1e-9);
      EXPECT_LT(r.dual_norm, 1e-9);
    }
    else
    {
      lo = std::min(lo, r.ratio);
      hi = std::max(hi, r.ratio);
    }
  }
  EXPECT_LT(hi / lo, 10.0);
  std::ostringstream os;
  write_norm_equivalence_csv(os, rows);
  const std::string csv = os.str();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST(NormEquivalence, NeedsTwoLevels)
{
  EXPECT_THROW(norm_equivalence_report({2}, 1), UsageError);
}

TEST(SchurForm, MatchesMixedSystem)
{
  const auto mesh = cube(2);
  const FESpace s = build_space(mesh, Family::nedelec1, 1, kNone);
  const FESpace v = build_space(mesh, Family::raviart_thomas, 1, kEss);
  const ManufacturedCase mc = make_case(CaseId::II);
  const SchurSolution schur = solve_schur_form(s, v, mc.f);
  const SystemSolution mixed = solve_system(assemble_hodge_laplace_system(s, v, mc.f));
  ASSERT_EQ(mixed.report.status, SolveStatus::ok);
  EXPECT_LT(l2_norm(FEFunction(v, schur.u.coeffs - mixed.u.coeffs)), 1e-8);
  EXPECT_LT(l2_norm(FEFunction(s, schur.mu.coeffs - mixed.mu.coeffs)), 1e-8);
}

}  // namespace
}  // namespace feec
