// SPDX-License-Identifier: Apache-2.0

#include "feec/manufactured.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "feec/error.hpp"

namespace feec
{

namespace
{

constexpr double pi = std::numbers::pi;

// One-dimensional factor with value and first two derivatives.
struct Factor
{
  enum class Kind
  {
    sine,
    cosine,
    polynomial
  };
  Kind kind = Kind::polynomial;
  double freq = 0.0;
  std::array<double, 5> c{};  // polynomial coefficients, ascending powers

  std::array<double, 3> eval(double t) const
  {
    switch (kind)
    {
      case Kind::sine:
      {
        const double s = std::sin(freq * t), co = std::cos(freq * t);
        return {s, freq * co, -freq * freq * s};
      }
      case Kind::cosine:
      {
        const double s = std::sin(freq * t), co = std::cos(freq * t);
        return {co, -freq * s, -freq * freq * co};
      }
      case Kind::polynomial:
        break;
    }
    double v = 0.0, d1 = 0.0, d2 = 0.0;
    for (int i = 4; i >= 0; i--)
    {
      v = v * t + c[i];
    }
    for (int i = 4; i >= 1; i--)
    {
      d1 = d1 * t + i * c[i];
    }
    for (int i = 4; i >= 2; i--)
    {
      d2 = d2 * t + i * (i - 1) * c[i];
    }
    return {v, d1, d2};
  }
};

Factor sine(double freq)
{
  return {Factor::Kind::sine, freq, {}};
}

Factor cosine(double freq)
{
  return {Factor::Kind::cosine, freq, {}};
}

Factor poly(std::array<double, 5> c)
{
  return {Factor::Kind::polynomial, 0.0, c};
}

// f(x) f(y) f(z) style product.
using Separable = std::array<Factor, 3>;

// Derivatives of a separable scalar: value, gradient and Hessian.
struct Jet
{
  double v = 0.0;
  std::array<double, 3> grad{};
  std::array<std::array<double, 3>, 3> hess{};
};

Jet jet(const Separable &s, const Point &x)
{
  std::array<std::array<double, 3>, 3> e;
  for (int d = 0; d < 3; d++)
  {
    e[d] = s[d].eval(x[d]);
  }
  Jet j;
  j.v = e[0][0] * e[1][0] * e[2][0];
  for (int a = 0; a < 3; a++)
  {
    for (int b = 0; b < 3; b++)
    {
      double prod = 1.0;
      for (int d = 0; d < 3; d++)
      {
        const int order = (d == a) + (d == b);
        prod *= e[d][order];
      }
      j.hess[a][b] = prod;
    }
    double prod = 1.0;
    for (int d = 0; d < 3; d++)
    {
      prod *= e[d][d == a ? 1 : 0];
    }
    j.grad[a] = prod;
  }
  return j;
}

struct FieldJets
{
  std::array<Jet, 3> c;

  Vec3 value() const { return {c[0].v, c[1].v, c[2].v}; }
  double div() const { return c[0].grad[0] + c[1].grad[1] + c[2].grad[2]; }
  Vec3 curl() const
  {
    return {c[2].grad[1] - c[1].grad[2], c[0].grad[2] - c[2].grad[0],
            c[1].grad[0] - c[0].grad[1]};
  }
  Vec3 laplacian() const
  {
    Vec3 l{};
    for (int i = 0; i < 3; i++)
    {
      l[i] = c[i].hess[0][0] + c[i].hess[1][1] + c[i].hess[2][2];
    }
    return l;
  }
  Vec3 grad_div() const
  {
    Vec3 g{};
    for (int a = 0; a < 3; a++)
    {
      for (int i = 0; i < 3; i++)
      {
        g[a] += c[i].hess[a][i];
      }
    }
    return g;
  }
};

FieldJets field_jets(const std::array<Separable, 3> &u, const Point &x)
{
  return {{jet(u[0], x), jet(u[1], x), jet(u[2], x)}};
}

}  // namespace

std::string_view to_string(CaseId id)
{
  switch (id)
  {
    case CaseId::I:
      return "I";
    case CaseId::II:
      return "II";
    case CaseId::III:
      return "III";
  }
  return "unknown";
}

CaseId parse_case_id(std::string_view text)
{
  if (text == "I" || text == "1")
  {
    return CaseId::I;
  }
  if (text == "II" || text == "2")
  {
    return CaseId::II;
  }
  if (text == "III" || text == "3")
  {
    return CaseId::III;
  }
  throw ConfigError("unknown case '" + std::string(text) + "' (expected I, II or III)");
}

ManufacturedCase make_case(CaseId id)
{
  std::array<Separable, 3> u;
  ManufacturedCase mc;
  mc.id = id;
  switch (id)
  {
    case CaseId::I:
    {
      // t (1/3 - t) (2/3 - t) (1 - t), vanishing on the outer and the void boundary.
      const Factor c = poly({0.0, 2.0 / 9.0, -11.0 / 9.0, 2.0, -1.0});
      u = {Separable{sine(3 * pi), sine(6 * pi), sine(3 * pi)},
           Separable{sine(6 * pi), sine(3 * pi), sine(6 * pi)}, Separable{c, c, c}};
      mc.domain = DomainTag::cube_with_void;
      mc.convex = false;
      mc.notes = "vector Laplacian on the cube with a cubic void; expected rates: "
                 "mu k-1/2, div u k (no L2 estimate for u on non-convex domains)";
      break;
    }
    case CaseId::II:
    case CaseId::III:
    {
      const Factor b = poly({0.0, 1.0, -1.0, 0.0, 0.0});
      u = {Separable{sine(2 * pi), sine(2 * pi), sine(2 * pi)},
           Separable{sine(pi), sine(pi), sine(pi)}, Separable{b, b, b}};
      mc.domain = DomainTag::unit_cube;
      mc.convex = true;
      mc.notes = id == CaseId::II
                     ? "vector Laplacian on the unit cube; expected rates: mu k-1/2, "
                       "u k-1/6 (k=1) or k, div u k"
                     : "stokes in vorticity-velocity-pressure form on the unit cube; "
                       "expected rates: p k-1/2, u k-1/6 (k=1) or k, div u_h = P_h g";
      break;
    }
  }
  mc.u = [u](const Point &x) { return field_jets(u, x).value(); };
  mc.mu = [u](const Point &x) { return field_jets(u, x).curl(); };
  mc.div_u = [u](const Point &x) { return field_jets(u, x).div(); };
  mc.curl_mu = [u](const Point &x) {
    const FieldJets j = field_jets(u, x);
    const Vec3 gd = j.grad_div(), lap = j.laplacian();
    return Vec3{gd[0] - lap[0], gd[1] - lap[1], gd[2] - lap[2]};
  };
  if (id == CaseId::III)
  {
    const Separable p = {poly({0.0, 0.0, 1.0, 0.0, 0.0}), sine(2 * pi), cosine(4 * pi)};
    mc.has_pressure = true;
    mc.p = [p](const Point &x) { return jet(p, x).v; };
    mc.g = mc.div_u;
    mc.f = [u, p](const Point &x) {
      const Vec3 lap = field_jets(u, x).laplacian();
      const auto gp = jet(p, x).grad;
      return Vec3{-lap[0] + gp[0], -lap[1] + gp[1], -lap[2] + gp[2]};
    };
  }
  else
  {
    mc.f = [u](const Point &x) {
      const Vec3 lap = field_jets(u, x).laplacian();
      return Vec3{-lap[0], -lap[1], -lap[2]};
    };
  }
  return mc;
}

}  // namespace feec
