// SPDX-License-Identifier: Apache-2.0

#ifndef FEEC_SPACE_HPP
#define FEEC_SPACE_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "feec/mesh.hpp"
#include "feec/parallel.hpp"
#include "feec/reference_element.hpp"
#include "feec/sparse.hpp"

namespace feec
{

enum class BoundaryCondition
{
  none,
  homogeneous_essential,
  zero_mean
};

std::string_view to_string(BoundaryCondition bc);

//
// Global finite element space on a mesh.
//
// Numbering: DOFs of an entity are contiguous and entities are numbered by kind in the
// order vertices, edges, faces, cells (only kinds carrying DOFs are present). Every cell
// uses the reference map of its ascending vertex order, which makes all local-to-global
// signs +1; they are kept explicit so assembly code does not depend on that convention.
//
// With homogeneous_essential, DOFs on boundary entities are constrained; systems are
// assembled on the complement (free DOFs). zero_mean is metadata only: assembly adds a
// Lagrange multiplier for the mean.
//
class FESpace
{
public:
  FESpace(std::shared_ptr<const Mesh> mesh, Family family, int k, BoundaryCondition bc);

  const Mesh &mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh> &mesh_ptr() const { return mesh_; }
  Family family() const { return family_; }
  int degree() const { return degree_; }
  BoundaryCondition bc() const { return bc_; }
  const ReferenceElement &element() const { return *element_; }

  int n_dofs() const { return n_dofs_; }
  int local_dofs() const { return local_dofs_; }
  std::span<const int> cell_dofs(int t) const
  {
    return {cell_dofs_.data() + static_cast<std::size_t>(t) * local_dofs_,
            static_cast<std::size_t>(local_dofs_)};
  }
  std::span<const std::int8_t> cell_signs(int t) const
  {
    return {cell_signs_.data() + static_cast<std::size_t>(t) * local_dofs_,
            static_cast<std::size_t>(local_dofs_)};
  }

  bool is_constrained(int dof) const { return constrained_[dof] != 0; }
  int n_constrained() const { return n_dofs_ - static_cast<int>(free_dofs_.size()); }
  std::span<const int> free_dofs() const { return free_dofs_; }
  int n_free() const { return static_cast<int>(free_dofs_.size()); }
  // Position of a DOF among the free DOFs, -1 if constrained.
  int free_index(int dof) const { return free_index_[dof]; }
  bool has_mean_constraint() const { return bc_ == BoundaryCondition::zero_mean; }

  // Scatters free-DOF values into a full coefficient vector (constrained entries zero).
  Vector extend(const Vector &free_values) const;
  Vector restrict(const Vector &full) const;

private:
  std::shared_ptr<const Mesh> mesh_;
  Family family_;
  int degree_;
  BoundaryCondition bc_;
  const ReferenceElement *element_;
  int n_dofs_ = 0;
  int local_dofs_ = 0;
  std::vector<int> cell_dofs_;
  std::vector<std::int8_t> cell_signs_;
  std::vector<std::uint8_t> constrained_;
  std::vector<int> free_dofs_;
  std::vector<int> free_index_;
};

// Raises ConfigError for zero_mean on a non-dg family and for essential conditions on dg.
FESpace build_space(std::shared_ptr<const Mesh> mesh, Family family, int k,
                    BoundaryCondition bc);

// Coefficients of a discrete field; non-owning reference to its space.
struct FEFunction
{
  explicit FEFunction(const FESpace &s) : space(&s), coeffs(Vector::Zero(s.n_dofs())) {}
  FEFunction(const FESpace &s, Vector c) : space(&s), coeffs(std::move(c)) {}

  const FESpace *space;
  Vector coeffs;
};

using VectorField = std::function<Vec3(const Point &)>;
using ScalarField = std::function<double(const Point &)>;

// Wraps a scalar field into component 0 of a vector field.
VectorField as_vector_field(ScalarField f);

// Quadrature points per direction for the entity moments of interpolation.
inline constexpr int kInterpolationPoints = 16;

// Canonical (DOF-moment) interpolation. For dg this is the L2 projection. Constrained
// DOFs are set to zero.
FEFunction canonical_interpolate(const FESpace &space, const VectorField &field,
                                 int points = kInterpolationPoints,
                                 Execution exec = Execution::parallel);

enum class DerivativeOp
{
  grad,
  curl,
  div
};

std::string_view to_string(DerivativeOp op);

// L2 norm of (derivative of the interpolant - interpolant of the derivative). `from` and
// `to` must be consecutive spaces of the sequence on the same mesh.
double commuting_residual(DerivativeOp op, const FESpace &from, const FESpace &to,
                          const VectorField &field, const VectorField &derivative);

struct PointValue
{
  Vec3 value{};
  Vec3 deriv{};  // grad, curl or (div, 0, 0)
};

// Value of a discrete field at a reference point of cell t.
PointValue evaluate(const FEFunction &u, int t, const Vec3 &ref);

// Brute-force point location; returns -1 outside the mesh.
int locate_cell(const Mesh &mesh, const Point &x, double tol = 1e-12);
PointValue evaluate_at(const FEFunction &u, const Point &x);

enum class Quantity
{
  value,
  derivative
};

// ||u_h - exact||_{L2} (or of the derivative) with a degree-`order` rule. A null exact
// field gives the norm of u_h.
double l2_error(const FEFunction &u, const VectorField &exact, int order,
                Quantity quantity = Quantity::value, Execution exec = Execution::parallel);
double l2_norm(const FEFunction &u, Quantity quantity = Quantity::value);

// Integral of a discrete field (component-wise; scalar fields use component 0).
Vec3 integrate(const FEFunction &u);

}  // namespace feec

#endif  // FEEC_SPACE_HPP
