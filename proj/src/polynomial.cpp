// SPDX-License-Identifier: Apache-2.0

#include "feec/polynomial.hpp"

#include "feec/error.hpp"

namespace feec
{

const std::array<std::array<int, 3>, Poly3::kSize> &Poly3::exponents()
{
  static const auto table = [] {
    std::array<std::array<int, 3>, kSize> e{};
    int n = 0;
    for (int d = 0; d <= kMaxDegree; d++)
    {
      for (int a = d; a >= 0; a--)
      {
        for (int b = d - a; b >= 0; b--)
        {
          e[n++] = {a, b, d - a - b};
        }
      }
    }
    return e;
  }();
  return table;
}

int Poly3::index(int a, int b, int c)
{
  const int d = a + b + c;
  if (a < 0 || b < 0 || c < 0 || d > kMaxDegree)
  {
    throw UsageError("monomial outside the supported degree range");
  }
  // Offset of degree d, then position within the degree block.
  const int offset = d * (d + 1) * (d + 2) / 6;
  const int rest = d - a;  // b + c
  const int pos = rest * (rest + 1) / 2 + (rest - b);
  return offset + pos;
}

Poly3 Poly3::monomial(int a, int b, int c, double coeff)
{
  Poly3 p;
  p.coeffs[index(a, b, c)] = coeff;
  return p;
}

double Poly3::operator()(const std::array<double, 3> &x) const
{
  // Powers up to kMaxDegree per coordinate.
  std::array<std::array<double, kMaxDegree + 1>, 3> pw;
  for (int d = 0; d < 3; d++)
  {
    pw[d][0] = 1.0;
    for (int k = 1; k <= kMaxDegree; k++)
    {
      pw[d][k] = pw[d][k - 1] * x[d];
    }
  }
  const auto &ex = exponents();
  double s = 0.0;
  for (int i = 0; i < kSize; i++)
  {
    if (coeffs[i] != 0.0)
    {
      s += coeffs[i] * pw[0][ex[i][0]] * pw[1][ex[i][1]] * pw[2][ex[i][2]];
    }
  }
  return s;
}

Poly3 Poly3::derivative(int dir) const
{
  Poly3 r;
  const auto &ex = exponents();
  for (int i = 0; i < kSize; i++)
  {
    if (coeffs[i] == 0.0 || ex[i][dir] == 0)
    {
      continue;
    }
    auto e = ex[i];
    const double f = e[dir];
    e[dir] -= 1;
    r.coeffs[index(e[0], e[1], e[2])] += f * coeffs[i];
  }
  return r;
}

Poly3 Poly3::times_coordinate(int dir) const
{
  Poly3 r;
  const auto &ex = exponents();
  for (int i = 0; i < kSize; i++)
  {
    if (coeffs[i] == 0.0)
    {
      continue;
    }
    auto e = ex[i];
    e[dir] += 1;
    r.coeffs[index(e[0], e[1], e[2])] += coeffs[i];
  }
  return r;
}

int Poly3::degree() const
{
  const auto &ex = exponents();
  int d = -1;
  for (int i = 0; i < kSize; i++)
  {
    if (coeffs[i] != 0.0)
    {
      d = std::max(d, ex[i][0] + ex[i][1] + ex[i][2]);
    }
  }
  return d;
}

Poly3 &Poly3::operator+=(const Poly3 &o)
{
  for (int i = 0; i < kSize; i++)
  {
    coeffs[i] += o.coeffs[i];
  }
  return *this;
}

Poly3 &Poly3::operator-=(const Poly3 &o)
{
  for (int i = 0; i < kSize; i++)
  {
    coeffs[i] -= o.coeffs[i];
  }
  return *this;
}

Poly3 &Poly3::operator*=(double s)
{
  for (auto &c : coeffs)
  {
    c *= s;
  }
  return *this;
}

VecPoly3 gradient(const Poly3 &p)
{
  return {p.derivative(0), p.derivative(1), p.derivative(2)};
}

VecPoly3 curl(const VecPoly3 &v)
{
  return {v[2].derivative(1) - v[1].derivative(2), v[0].derivative(2) - v[2].derivative(0),
          v[1].derivative(0) - v[0].derivative(1)};
}

Poly3 divergence(const VecPoly3 &v)
{
  return v[0].derivative(0) + v[1].derivative(1) + v[2].derivative(2);
}

VecPoly3 position_cross(const VecPoly3 &v)
{
  return {v[2].times_coordinate(1) - v[1].times_coordinate(2),
          v[0].times_coordinate(2) - v[2].times_coordinate(0),
          v[1].times_coordinate(0) - v[0].times_coordinate(1)};
}

VecPoly3 position_times(const Poly3 &p)
{
  return {p.times_coordinate(0), p.times_coordinate(1), p.times_coordinate(2)};
}

std::array<double, 3> evaluate(const VecPoly3 &v, const std::array<double, 3> &x)
{
  return {v[0](x), v[1](x), v[2](x)};
}

}  // namespace feec
