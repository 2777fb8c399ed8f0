// SPDX-License-Identifier: Apache-2.0

#ifndef FEEC_QUADRATURE_HPP
#define FEEC_QUADRATURE_HPP

#include <array>
#include <vector>

namespace feec
{

// Quadrature on the reference tetrahedron {x, y, z >= 0, x + y + z <= 1} (volume 1/6).
// Points are stored in reference Cartesian coordinates; barycentric() returns
// (1 - x - y - z, x, y, z).
struct QuadratureRule
{
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int order = 0;

  std::size_t size() const { return weights.size(); }
  std::array<double, 4> barycentric(std::size_t q) const
  {
    const auto &p = points[q];
    return {1.0 - p[0] - p[1] - p[2], p[0], p[1], p[2]};
  }
};

// Rule on the reference triangle {x, y >= 0, x + y <= 1} (area 1/2).
struct TriangleRule
{
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;
};

// Rule on [0, 1].
struct LineRule
{
  std::vector<double> points;
  std::vector<double> weights;
};

// Gauss-Jacobi nodes/weights on [-1, 1] for the weight (1 - x)^alpha (1 + x)^beta.
void gauss_jacobi(int npoints, double alpha, double beta, std::vector<double> &nodes,
                  std::vector<double> &weights);

// Tet rule exact for total degree <= order (collapsed Gauss-Jacobi product, positive
// weights). Supported orders: 0..12; anything else raises ConfigError.
QuadratureRule make_quadrature(int order);

// Collapsed product rule with m points per direction (exact to degree 2m - 1). Not limited
// in m; used where integrands are smooth but not polynomial.
QuadratureRule make_quadrature_points(int m);

TriangleRule make_triangle_rule(int m);
LineRule make_line_rule(int m);

// Number of points per direction required for exactness of the given degree.
inline int points_for_order(int order)
{
  return order / 2 + 1;
}

}  // namespace feec

#endif  // FEEC_QUADRATURE_HPP
