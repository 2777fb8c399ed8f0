// SPDX-License-Identifier: Apache-2.0

#include "feec/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "feec/error.hpp"

namespace feec
{

namespace
{

// Jacobi polynomial P_n^{(a,b)}(x) and its derivative by the three-term recurrence.
void jacobi_eval(int n, double a, double b, double x, double &p, double &dp)
{
  auto eval = [](int n, double a, double b, double x) {
    if (n == 0)
    {
      return 1.0;
    }
    double p0 = 1.0;
    double p1 = 0.5 * ((a + b + 2.0) * x + (a - b));
    for (int k = 2; k <= n; k++)
    {
      const double s = 2.0 * k + a + b;
      const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
      const double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
      const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
      const double p2 = (c2 * p1 - c3 * p0) / c1;
      p0 = p1;
      p1 = p2;
    }
    return p1;
  };
  p = eval(n, a, b, x);
  dp = (n == 0) ? 0.0 : 0.5 * (n + a + b + 1.0) * eval(n - 1, a + 1.0, b + 1.0, x);
}

}  // namespace

void gauss_jacobi(int npoints, double alpha, double beta, std::vector<double> &nodes,
                  std::vector<double> &weights)
{
  nodes.assign(npoints, 0.0);
  weights.assign(npoints, 0.0);
  // Newton iteration with deflation of the roots already found.
  for (int k = 0; k < npoints; k++)
  {
    double r = -std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * npoints));
    if (k > 0)
    {
      r = 0.5 * (r + nodes[k - 1]);
    }
    for (int it = 0; it < 100; it++)
    {
      double p, dp;
      jacobi_eval(npoints, alpha, beta, r, p, dp);
      double s = 0.0;
      for (int i = 0; i < k; i++)
      {
        s += 1.0 / (r - nodes[i]);
      }
      const double delta = -p / (dp - s * p);
      r += delta;
      if (std::abs(delta) < 1e-16)
      {
        break;
      }
    }
    nodes[k] = r;
  }
  const int n = npoints;
  const double cst = std::exp(std::lgamma(n + alpha + 1.0) + std::lgamma(n + beta + 1.0) -
                              std::lgamma(n + alpha + beta + 1.0) - std::lgamma(n + 1.0)) *
                     std::pow(2.0, alpha + beta + 1.0);
  for (int k = 0; k < n; k++)
  {
    double p, dp;
    jacobi_eval(n, alpha, beta, nodes[k], p, dp);
    weights[k] = cst / ((1.0 - nodes[k] * nodes[k]) * dp * dp);
  }
}

namespace
{

// Nodes/weights on [0, 1] for the weight (1 - t)^alpha.
void collapsed_1d(int m, int alpha, std::vector<double> &t, std::vector<double> &w)
{
  std::vector<double> x, wx;
  gauss_jacobi(m, alpha, 0.0, x, wx);
  t.resize(m);
  w.resize(m);
  const double scale = std::pow(0.5, alpha + 1);
  for (int i = 0; i < m; i++)
  {
    t[i] = 0.5 * (1.0 + x[i]);
    w[i] = wx[i] * scale;
  }
}

}  // namespace

QuadratureRule make_quadrature_points(int m)
{
  if (m < 1)
  {
    throw ConfigError("quadrature needs at least one point per direction");
  }
  std::vector<double> ta, wa, tb, wb, tc, wc;
  collapsed_1d(m, 0, ta, wa);
  collapsed_1d(m, 1, tb, wb);
  collapsed_1d(m, 2, tc, wc);
  QuadratureRule rule;
  rule.order = 2 * m - 1;
  rule.points.reserve(static_cast<std::size_t>(m) * m * m);
  rule.weights.reserve(static_cast<std::size_t>(m) * m * m);
  for (int k = 0; k < m; k++)
  {
    for (int j = 0; j < m; j++)
    {
      for (int i = 0; i < m; i++)
      {
        const double z = tc[k];
        const double y = tb[j] * (1.0 - z);
        const double x = ta[i] * (1.0 - tb[j]) * (1.0 - z);
        rule.points.push_back({x, y, z});
        rule.weights.push_back(wa[i] * wb[j] * wc[k]);
      }
    }
  }
  return rule;
}

QuadratureRule make_quadrature(int order)
{
  if (order < 0 || order > 12)
  {
    throw ConfigError("unsupported quadrature order " + std::to_string(order) +
                      " (supported: 0..12)");
  }
  QuadratureRule rule = make_quadrature_points(points_for_order(order));
  rule.order = order;
  return rule;
}

TriangleRule make_triangle_rule(int m)
{
  std::vector<double> ta, wa, tb, wb;
  collapsed_1d(m, 0, ta, wa);
  collapsed_1d(m, 1, tb, wb);
  TriangleRule rule;
  for (int j = 0; j < m; j++)
  {
    for (int i = 0; i < m; i++)
    {
      rule.points.push_back({ta[i] * (1.0 - tb[j]), tb[j]});
      rule.weights.push_back(wa[i] * wb[j]);
    }
  }
  return rule;
}

LineRule make_line_rule(int m)
{
  LineRule rule;
  collapsed_1d(m, 0, rule.points, rule.weights);
  return rule;
}

}  // namespace feec
