// SPDX-License-Identifier: Apache-2.0

#include "feec/reference_element.hpp"

#include <cmath>
#include <string>

#include "feec/error.hpp"
#include "feec/quadrature.hpp"

namespace feec
{

namespace
{

constexpr std::array<Vec3, 4> kRefVertices = {
    {{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};

Vec3 vsub(const Vec3 &a, const Vec3 &b)
{
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

Vec3 vcross(const Vec3 &a, const Vec3 &b)
{
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Vec3 vscale(double s, const Vec3 &a)
{
  return {s * a[0], s * a[1], s * a[2]};
}

// Shifted Legendre polynomials on [0, 1].
double edge_weight(int m, double s)
{
  return m == 0 ? 1.0 : 2.0 * s - 1.0;
}

// Orthogonal polynomials of degree <= 1 on the reference triangle.
double face_weight(int m, double xi, double eta)
{
  switch (m)
  {
    case 0:
      return 1.0;
    case 1:
      return 2.0 * xi + eta - 1.0;
    default:
      return 3.0 * eta - 1.0;
  }
}

double cell_weight(int m, const Vec3 &x)
{
  return m == 0 ? 1.0 : 4.0 * x[m - 1] - 1.0;
}

void check_supported(Family family, int k)
{
  if (k < 1 || k > 2)
  {
    throw ConfigError("unsupported element (" + std::string(to_string(family)) +
                      ", k=" + std::to_string(k) + "): only k in {1, 2} is available");
  }
}

// Monomials of total degree exactly d.
std::vector<std::array<int, 3>> homogeneous(int d)
{
  std::vector<std::array<int, 3>> out;
  for (const auto &e : Poly3::exponents())
  {
    if (e[0] + e[1] + e[2] == d)
    {
      out.push_back(e);
    }
  }
  return out;
}

std::vector<std::array<int, 3>> up_to(int d)
{
  std::vector<std::array<int, 3>> out;
  for (const auto &e : Poly3::exponents())
  {
    if (e[0] + e[1] + e[2] <= d)
    {
      out.push_back(e);
    }
  }
  return out;
}

std::vector<VecPoly3> spanning_set(Family family, int k)
{
  std::vector<VecPoly3> span;
  auto vec_mono = [](int comp, const std::array<int, 3> &e) {
    VecPoly3 v;
    v[comp] = Poly3::monomial(e[0], e[1], e[2]);
    return v;
  };
  switch (family)
  {
    case Family::lagrange:
      for (const auto &e : up_to(k))
      {
        span.push_back(vec_mono(0, e));
      }
      break;
    case Family::dg:
      for (const auto &e : up_to(k - 1))
      {
        span.push_back(vec_mono(0, e));
      }
      break;
    case Family::nedelec1:
      for (const auto &e : up_to(k - 1))
      {
        for (int c = 0; c < 3; c++)
        {
          span.push_back(vec_mono(c, e));
        }
      }
      for (const auto &e : homogeneous(k - 1))
      {
        for (int c = 0; c < 3; c++)
        {
          span.push_back(position_cross(vec_mono(c, e)));
        }
      }
      break;
    case Family::raviart_thomas:
      for (const auto &e : up_to(k - 1))
      {
        for (int c = 0; c < 3; c++)
        {
          span.push_back(vec_mono(c, e));
        }
      }
      for (const auto &e : homogeneous(k - 1))
      {
        span.push_back(position_times(Poly3::monomial(e[0], e[1], e[2])));
      }
      break;
  }
  return span;
}

}  // namespace

std::string_view to_string(Family family)
{
  switch (family)
  {
    case Family::lagrange:
      return "lagrange";
    case Family::nedelec1:
      return "nedelec1";
    case Family::raviart_thomas:
      return "raviart_thomas";
    case Family::dg:
      return "dg";
  }
  return "unknown";
}

int local_dimension(Family family, int k)
{
  switch (family)
  {
    case Family::lagrange:
      return (k + 1) * (k + 2) * (k + 3) / 6;
    case Family::nedelec1:
      return k * (k + 2) * (k + 3) / 2;
    case Family::raviart_thomas:
      return k * (k + 1) * (k + 3) / 2;
    case Family::dg:
      return k * (k + 1) * (k + 2) / 6;
  }
  return 0;
}

Family next_family(Family family)
{
  switch (family)
  {
    case Family::lagrange:
      return Family::nedelec1;
    case Family::nedelec1:
      return Family::raviart_thomas;
    case Family::raviart_thomas:
      return Family::dg;
    case Family::dg:
      break;
  }
  throw UsageError("dg is the last space of the sequence");
}

ReferenceElement::ReferenceElement(Family family, int degree)
    : family_(family), degree_(degree)
{
  check_supported(family, degree);
  const int k = degree;
  value_dim_ = (family == Family::lagrange || family == Family::dg) ? 1 : 3;
  switch (family)
  {
    case Family::lagrange:
    case Family::nedelec1:
      deriv_dim_ = 3;
      break;
    case Family::raviart_thomas:
      deriv_dim_ = 1;
      break;
    case Family::dg:
      deriv_dim_ = 0;
      break;
  }

  // DOF layout: vertices, edges, faces, cell.
  auto add = [this](EntityKind kind, int count, int per_entity) {
    for (int e = 0; e < count; e++)
    {
      for (int m = 0; m < per_entity; m++)
      {
        dofs_.push_back({kind, e, m});
      }
    }
  };
  switch (family)
  {
    case Family::lagrange:
      add(EntityKind::vertex, 4, 1);
      add(EntityKind::edge, 6, k - 1);
      break;
    case Family::nedelec1:
      add(EntityKind::edge, 6, k);
      add(EntityKind::face, 4, k == 2 ? 2 : 0);
      break;
    case Family::raviart_thomas:
      add(EntityKind::face, 4, k == 1 ? 1 : 3);
      add(EntityKind::cell, 1, k == 2 ? 3 : 0);
      break;
    case Family::dg:
      add(EntityKind::cell, 1, k == 1 ? 1 : 4);
      break;
  }
  exact_plan_ = dof_plan(k + 2);

  // Orthonormal basis of the local space from its spanning set.
  const auto span = spanning_set(family, k);
  const int ncoef = value_dim_ * Poly3::kSize;
  Eigen::MatrixXd S(ncoef, static_cast<Eigen::Index>(span.size()));
  for (std::size_t j = 0; j < span.size(); j++)
  {
    for (int c = 0; c < value_dim_; c++)
    {
      for (int i = 0; i < Poly3::kSize; i++)
      {
        S(c * Poly3::kSize + i, static_cast<Eigen::Index>(j)) = span[j][c].coeffs[i];
      }
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(S, Eigen::ComputeFullU);
  const auto &sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); i++)
  {
    if (sv(i) > 1e-10 * sv(0))
    {
      rank++;
    }
  }
  const int n = n_dofs();
  if (rank != n || n != local_dimension(family, k))
  {
    throw ConfigError("internal: polynomial space dimension mismatch for " +
                      std::string(to_string(family)));
  }
  std::vector<VecPoly3> ortho(n);
  for (int j = 0; j < n; j++)
  {
    for (int c = 0; c < value_dim_; c++)
    {
      for (int i = 0; i < Poly3::kSize; i++)
      {
        ortho[j][c].coeffs[i] = svd.matrixU()(c * Poly3::kSize + i, j);
      }
    }
  }

  // Generalized Vandermonde matrix V(i, j) = dof_i(ortho_j).
  Eigen::MatrixXd V(n, n);
  for (int j = 0; j < n; j++)
  {
    const auto vals = apply_dofs(exact_plan_, [&](const Vec3 &x) { return evaluate(ortho[j], x); });
    for (int i = 0; i < n; i++)
    {
      V(i, j) = vals[i];
    }
  }
  const Eigen::MatrixXd Vinv = V.fullPivLu().inverse();
  basis_.assign(n, VecPoly3{});
  for (int i = 0; i < n; i++)
  {
    for (int j = 0; j < n; j++)
    {
      for (int c = 0; c < value_dim_; c++)
      {
        basis_[i][c] += Vinv(j, i) * ortho[j][c];
      }
    }
  }
  derivs_.assign(n, VecPoly3{});
  for (int i = 0; i < n; i++)
  {
    switch (family)
    {
      case Family::lagrange:
        derivs_[i] = gradient(basis_[i][0]);
        break;
      case Family::nedelec1:
        derivs_[i] = curl(basis_[i]);
        break;
      case Family::raviart_thomas:
        derivs_[i][0] = divergence(basis_[i]);
        break;
      case Family::dg:
        break;
    }
  }
}

int ReferenceElement::dofs_per_entity(EntityKind kind) const
{
  int count = 0;
  for (const auto &d : dofs_)
  {
    if (d.kind == kind && d.entity == 0)
    {
      count++;
    }
  }
  return count;
}

DofPlan ReferenceElement::dof_plan(int m) const
{
  DofPlan plan;
  const LineRule line = make_line_rule(m);
  const TriangleRule tri = make_triangle_rule(m);
  const QuadratureRule tet = make_quadrature_points(m);

  for (const auto &d : dofs_)
  {
    DofFunctional fn;
    auto push = [&](const Vec3 &x, const Vec3 &w) {
      fn.point_ids.push_back(static_cast<int>(plan.points.size()));
      plan.points.push_back(x);
      fn.weights.push_back(w);
    };
    switch (d.kind)
    {
      case EntityKind::vertex:
        push(kRefVertices[d.entity], {1.0, 0.0, 0.0});
        break;
      case EntityKind::edge:
      {
        const Vec3 &a = kRefVertices[kTetEdges[d.entity][0]];
        const Vec3 &b = kRefVertices[kTetEdges[d.entity][1]];
        const Vec3 t = vsub(b, a);
        for (std::size_t q = 0; q < line.points.size(); q++)
        {
          const double s = line.points[q];
          const Vec3 x = {a[0] + s * t[0], a[1] + s * t[1], a[2] + s * t[2]};
          const double w = line.weights[q] * edge_weight(d.moment, s);
          if (family_ == Family::lagrange)
          {
            push(x, {w, 0.0, 0.0});
          }
          else
          {
            push(x, vscale(w, t));
          }
        }
        break;
      }
      case EntityKind::face:
      {
        const auto &fv = kTetFaces[d.entity];
        const Vec3 &a = kRefVertices[fv[0]];
        const Vec3 t1 = vsub(kRefVertices[fv[1]], a);
        const Vec3 t2 = vsub(kRefVertices[fv[2]], a);
        const Vec3 nrm = vcross(t1, t2);
        for (std::size_t q = 0; q < tri.weights.size(); q++)
        {
          const double xi = tri.points[q][0], eta = tri.points[q][1];
          const Vec3 x = {a[0] + xi * t1[0] + eta * t2[0], a[1] + xi * t1[1] + eta * t2[1],
                          a[2] + xi * t1[2] + eta * t2[2]};
          if (family_ == Family::nedelec1)
          {
            push(x, vscale(tri.weights[q], d.moment == 0 ? t1 : t2));
          }
          else
          {
            push(x, vscale(tri.weights[q] * face_weight(d.moment, xi, eta), nrm));
          }
        }
        break;
      }
      case EntityKind::cell:
        for (std::size_t q = 0; q < tet.size(); q++)
        {
          const Vec3 &x = tet.points[q];
          if (family_ == Family::raviart_thomas)
          {
            Vec3 w = {0.0, 0.0, 0.0};
            w[d.moment] = tet.weights[q];
            push(x, w);
          }
          else
          {
            push(x, {tet.weights[q] * cell_weight(d.moment, x), 0.0, 0.0});
          }
        }
        break;
    }
    plan.functionals.push_back(std::move(fn));
  }
  return plan;
}

std::vector<double> ReferenceElement::apply_dofs(
    const DofPlan &plan, const std::function<Vec3(const Vec3 &)> &field) const
{
  std::vector<Vec3> samples(plan.points.size());
  for (std::size_t p = 0; p < plan.points.size(); p++)
  {
    samples[p] = field(plan.points[p]);
  }
  std::vector<double> out(plan.functionals.size(), 0.0);
  for (std::size_t i = 0; i < plan.functionals.size(); i++)
  {
    const auto &fn = plan.functionals[i];
    double s = 0.0;
    for (std::size_t q = 0; q < fn.point_ids.size(); q++)
    {
      const Vec3 &v = samples[fn.point_ids[q]];
      const Vec3 &w = fn.weights[q];
      s += w[0] * v[0] + w[1] * v[1] + w[2] * v[2];
    }
    out[i] = s;
  }
  return out;
}

Tabulation ReferenceElement::tabulate(std::span<const Vec3> points) const
{
  Tabulation tab;
  tab.n_points = static_cast<int>(points.size());
  tab.n_dofs = n_dofs();
  tab.value_dim = value_dim_;
  tab.deriv_dim = deriv_dim_;
  tab.values.resize(static_cast<std::size_t>(tab.n_points) * tab.n_dofs * value_dim_);
  tab.derivs.resize(static_cast<std::size_t>(tab.n_points) * tab.n_dofs * deriv_dim_);
  for (int q = 0; q < tab.n_points; q++)
  {
    for (int i = 0; i < tab.n_dofs; i++)
    {
      for (int c = 0; c < value_dim_; c++)
      {
        tab.values[(q * tab.n_dofs + i) * value_dim_ + c] = basis_[i][c](points[q]);
      }
      for (int c = 0; c < deriv_dim_; c++)
      {
        tab.derivs[(q * tab.n_dofs + i) * deriv_dim_ + c] = derivs_[i][c](points[q]);
      }
    }
  }
  return tab;
}

ReferenceElement make_reference_element(Family family, int k)
{
  return ReferenceElement(family, k);
}

const ReferenceElement &reference_element(Family family, int k)
{
  check_supported(family, k);
  static const std::array<std::array<ReferenceElement, 2>, 4> cache = {{
      {ReferenceElement(Family::lagrange, 1), ReferenceElement(Family::lagrange, 2)},
      {ReferenceElement(Family::nedelec1, 1), ReferenceElement(Family::nedelec1, 2)},
      {ReferenceElement(Family::raviart_thomas, 1), ReferenceElement(Family::raviart_thomas, 2)},
      {ReferenceElement(Family::dg, 1), ReferenceElement(Family::dg, 2)},
  }};
  return cache[static_cast<int>(family)][k - 1];
}

Eigen::MatrixXd reference_derivative_matrix(Family lower, int k)
{
  const Family higher = next_family(lower);
  const auto &lo = reference_element(lower, k);
  const auto &hi = reference_element(higher, k);
  Eigen::MatrixXd D(hi.n_dofs(), lo.n_dofs());
  for (int j = 0; j < lo.n_dofs(); j++)
  {
    const VecPoly3 &d = lo.basis_derivative(j);
    const auto vals = hi.apply_dofs(hi.exact_plan(), [&](const Vec3 &x) {
      if (lower == Family::raviart_thomas)
      {
        return Vec3{d[0](x), 0.0, 0.0};
      }
      return evaluate(d, x);
    });
    for (int i = 0; i < hi.n_dofs(); i++)
    {
      D(i, j) = vals[i];
    }
  }
  // The entries are small rationals; snapping removes the round-off of the basis inversion
  // so that products of consecutive derivative matrices vanish to machine precision.
  constexpr double denom = 360.0;
  for (Eigen::Index i = 0; i < D.size(); i++)
  {
    const double snapped = std::round(D(i) * denom) / denom;
    if (std::abs(snapped - D(i)) > 1e-9)
    {
      throw UsageError("derivative matrix entry is not a small rational");
    }
    D(i) = snapped;
  }
  return D;
}

Point CellGeometry::map(const Vec3 &xi) const
{
  Point x = x0;
  for (int r = 0; r < 3; r++)
  {
    for (int c = 0; c < 3; c++)
    {
      x[r] += jacobian(r, c) * xi[c];
    }
  }
  return x;
}

Vec3 CellGeometry::pull(const Point &x) const
{
  Vec3 xi{};
  for (int r = 0; r < 3; r++)
  {
    for (int c = 0; c < 3; c++)
    {
      xi[r] += inverse(r, c) * (x[c] - x0[c]);
    }
  }
  return xi;
}

CellGeometry cell_geometry(const std::array<Point, 4> &v)
{
  CellGeometry g;
  g.x0 = v[0];
  for (int c = 0; c < 3; c++)
  {
    for (int r = 0; r < 3; r++)
    {
      g.jacobian(r, c) = v[c + 1][r] - v[0][r];
    }
  }
  g.det = g.jacobian.determinant();
  const double scale = g.jacobian.norm();
  if (!(std::abs(g.det) > 1e-14 * scale * scale * scale))
  {
    throw GeometryError("degenerate cell (|det J| = " + std::to_string(std::abs(g.det)) + ")");
  }
  g.inverse = g.jacobian.inverse();
  return g;
}

CellGeometry cell_geometry(const Mesh &mesh, int t)
{
  const auto s = mesh.sorted_tet(t);
  return cell_geometry(std::array<Point, 4>{mesh.vertices()[s[0]], mesh.vertices()[s[1]],
                                            mesh.vertices()[s[2]], mesh.vertices()[s[3]]});
}

void push_forward(const ReferenceElement &element, const CellGeometry &geom,
                  const Tabulation &ref, Tabulation &phys)
{
  phys.n_points = ref.n_points;
  phys.n_dofs = ref.n_dofs;
  phys.value_dim = ref.value_dim;
  phys.deriv_dim = ref.deriv_dim;
  phys.values.resize(ref.values.size());
  phys.derivs.resize(ref.derivs.size());
  const Eigen::Matrix3d &J = geom.jacobian;
  const Eigen::Matrix3d JinvT = geom.inverse.transpose();
  const double inv_det = 1.0 / geom.det;
  const std::size_t count = static_cast<std::size_t>(ref.n_points) * ref.n_dofs;

  auto apply = [](const Eigen::Matrix3d &A, double s, const double *in, double *out) {
    for (int r = 0; r < 3; r++)
    {
      out[r] = s * (A(r, 0) * in[0] + A(r, 1) * in[1] + A(r, 2) * in[2]);
    }
  };
  switch (element.family())
  {
    case Family::lagrange:
      phys.values = ref.values;
      for (std::size_t i = 0; i < count; i++)
      {
        apply(JinvT, 1.0, &ref.derivs[3 * i], &phys.derivs[3 * i]);
      }
      break;
    case Family::nedelec1:
      for (std::size_t i = 0; i < count; i++)
      {
        apply(JinvT, 1.0, &ref.values[3 * i], &phys.values[3 * i]);
        apply(J, inv_det, &ref.derivs[3 * i], &phys.derivs[3 * i]);
      }
      break;
    case Family::raviart_thomas:
      for (std::size_t i = 0; i < count; i++)
      {
        apply(J, inv_det, &ref.values[3 * i], &phys.values[3 * i]);
        phys.derivs[i] = inv_det * ref.derivs[i];
      }
      break;
    case Family::dg:
      phys.values = ref.values;
      break;
  }
}

Vec3 pull_back(Family family, const CellGeometry &geom, const Vec3 &u)
{
  switch (family)
  {
    case Family::lagrange:
    case Family::dg:
      return u;
    case Family::nedelec1:
    {
      const Eigen::Vector3d r = geom.jacobian.transpose() * Eigen::Vector3d(u[0], u[1], u[2]);
      return {r[0], r[1], r[2]};
    }
    case Family::raviart_thomas:
    {
      const Eigen::Vector3d r = geom.det * (geom.inverse * Eigen::Vector3d(u[0], u[1], u[2]));
      return {r[0], r[1], r[2]};
    }
  }
  return u;
}

}  // namespace feec
