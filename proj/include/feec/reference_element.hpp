// SPDX-License-Identifier: Apache-2.0

#ifndef FEEC_REFERENCE_ELEMENT_HPP
#define FEEC_REFERENCE_ELEMENT_HPP

#include <array>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "feec/mesh.hpp"
#include "feec/polynomial.hpp"

namespace feec
{

// The four element families of the lowest-order-first (P^-_k) de Rham sequence:
// H1 -> H(curl) -> H(div) -> L2.
enum class Family
{
  lagrange,
  nedelec1,
  raviart_thomas,
  dg
};

std::string_view to_string(Family family);

enum class EntityKind
{
  vertex,
  edge,
  face,
  cell
};

struct DofDescriptor
{
  EntityKind kind;
  int entity;  // local vertex/edge/face index, 0 for the cell
  int moment;  // index within the entity
};

using Vec3 = std::array<double, 3>;

// A linear functional sum_q w_q . f(x_q) over reference points.
struct DofFunctional
{
  std::vector<int> point_ids;
  std::vector<Vec3> weights;  // scalar families use component 0
};

// DOF functionals discretized with a fixed quadrature accuracy, sharing one point set.
struct DofPlan
{
  std::vector<Vec3> points;
  std::vector<DofFunctional> functionals;
};

// Basis values (and the family's derivative) at a set of reference points. Layout:
// values[(q * n_dofs + i) * value_dim + c], derivs[(q * n_dofs + i) * deriv_dim + c].
struct Tabulation
{
  int n_points = 0;
  int n_dofs = 0;
  int value_dim = 0;
  int deriv_dim = 0;
  std::vector<double> values;
  std::vector<double> derivs;

  double value(int q, int i, int c) const { return values[(q * n_dofs + i) * value_dim + c]; }
  double deriv(int q, int i, int c) const { return derivs[(q * n_dofs + i) * deriv_dim + c]; }
};

//
// Reference element on the tetrahedron with vertices (0,0,0), (1,0,0), (0,1,0), (0,0,1).
//
// DOFs are integral moments on sub-entities in entity-local coordinates that follow
// ascending local vertex order: edge moments weighted by shifted Legendre polynomials,
// face moments by the orthogonal (Dubiner) basis of the face, and cell moments against
// polynomial test functions. The nodal basis is obtained by inverting the DOF matrix of an
// orthonormalized spanning set of the local polynomial space.
//
class ReferenceElement
{
public:
  ReferenceElement(Family family, int degree);

  Family family() const { return family_; }
  int degree() const { return degree_; }
  int n_dofs() const { return static_cast<int>(dofs_.size()); }
  // 1 for lagrange/dg, 3 for the vector families.
  int value_dim() const { return value_dim_; }
  // Dimension of grad (3), curl (3), div (1), or 0 for dg.
  int deriv_dim() const { return deriv_dim_; }
  std::span<const DofDescriptor> dofs() const { return dofs_; }

  // Number of DOFs attached to each vertex/edge/face/cell.
  int dofs_per_entity(EntityKind kind) const;

  // Basis function i as a vector polynomial (scalar families use component 0), and its
  // derivative (grad/curl; div is stored in component 0).
  const VecPoly3 &basis(int i) const { return basis_[i]; }
  const VecPoly3 &basis_derivative(int i) const { return derivs_[i]; }

  Tabulation tabulate(std::span<const Vec3> points) const;

  // DOF functionals with m quadrature points per direction on each entity.
  DofPlan dof_plan(int m) const;
  // Plan exact for the element's own polynomial space.
  const DofPlan &exact_plan() const { return exact_plan_; }

  // Applies every DOF functional to a reference-space field.
  std::vector<double> apply_dofs(const DofPlan &plan,
                                 const std::function<Vec3(const Vec3 &)> &field) const;

private:
  Family family_;
  int degree_;
  int value_dim_;
  int deriv_dim_;
  std::vector<DofDescriptor> dofs_;
  std::vector<VecPoly3> basis_;
  std::vector<VecPoly3> derivs_;
  DofPlan exact_plan_;
};

// Builds an element; unsupported (family, k) raises ConfigError. Supported: k in {1, 2}.
ReferenceElement make_reference_element(Family family, int k);

// Shared immutable instance per (family, k).
const ReferenceElement &reference_element(Family family, int k);

// Dimension of the local polynomial space.
int local_dimension(Family family, int k);

// The family following `family` in the sequence (lagrange -> nedelec1 -> raviart_thomas
// -> dg). Raises UsageError for dg.
Family next_family(Family family);

// Coefficients of the derivative of each lower-family basis function in the next family's
// basis (rows: higher DOFs, cols: lower DOFs), on the reference cell.
Eigen::MatrixXd reference_derivative_matrix(Family lower, int k);

//
// Affine map x = x0 + J xi built from the ascending vertex order of a tet.
//
struct CellGeometry
{
  Point x0{};
  Eigen::Matrix3d jacobian;
  Eigen::Matrix3d inverse;
  double det = 0.0;

  Point map(const Vec3 &xi) const;
  Vec3 pull(const Point &x) const;
};

// Degenerate cells raise GeometryError.
CellGeometry cell_geometry(const Mesh &mesh, int t);
CellGeometry cell_geometry(const std::array<Point, 4> &vertices);

// Pushes tabulated reference values forward with the family's transformation: affine for
// lagrange/dg, covariant Piola for nedelec1, contravariant Piola for raviart_thomas. The
// output has the same layout as the input tabulation.
void push_forward(const ReferenceElement &element, const CellGeometry &geom,
                  const Tabulation &ref, Tabulation &phys);

// Pulls a physical field sample back to the reference cell with the inverse of the
// family's transformation, so that reference DOFs of the pull-back equal the physical DOFs.
Vec3 pull_back(Family family, const CellGeometry &geom, const Vec3 &value);

}  // namespace feec

#endif  // FEEC_REFERENCE_ELEMENT_HPP
