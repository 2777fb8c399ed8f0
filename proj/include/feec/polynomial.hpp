// SPDX-License-Identifier: Apache-2.0

#ifndef FEEC_POLYNOMIAL_HPP
#define FEEC_POLYNOMIAL_HPP

#include <array>
#include <vector>

namespace feec
{

// Dense trivariate polynomial of total degree <= kMaxDegree in the monomial basis.
class Poly3
{
public:
  static constexpr int kMaxDegree = 3;
  static constexpr int kSize = (kMaxDegree + 1) * (kMaxDegree + 2) * (kMaxDegree + 3) / 6;

  // Monomial exponents in graded order: 1, x, y, z, x^2, xy, ...
  static const std::array<std::array<int, 3>, kSize> &exponents();
  static int index(int a, int b, int c);
  // Number of monomials of total degree <= d.
  static constexpr int dimension(int d) { return (d + 1) * (d + 2) * (d + 3) / 6; }

  static Poly3 monomial(int a, int b, int c, double coeff = 1.0);
  static Poly3 constant(double v) { return monomial(0, 0, 0, v); }

  double operator()(const std::array<double, 3> &x) const;
  Poly3 derivative(int dir) const;
  // Multiplication by x_dir; the result must still fit into kMaxDegree.
  Poly3 times_coordinate(int dir) const;
  int degree() const;

  Poly3 &operator+=(const Poly3 &o);
  Poly3 &operator-=(const Poly3 &o);
  Poly3 &operator*=(double s);
  friend Poly3 operator+(Poly3 a, const Poly3 &b) { return a += b; }
  friend Poly3 operator-(Poly3 a, const Poly3 &b) { return a -= b; }
  friend Poly3 operator*(double s, Poly3 a) { return a *= s; }

  std::array<double, kSize> coeffs{};
};

using VecPoly3 = std::array<Poly3, 3>;

VecPoly3 gradient(const Poly3 &p);
VecPoly3 curl(const VecPoly3 &v);
Poly3 divergence(const VecPoly3 &v);
// x cross v and x * p.
VecPoly3 position_cross(const VecPoly3 &v);
VecPoly3 position_times(const Poly3 &p);

std::array<double, 3> evaluate(const VecPoly3 &v, const std::array<double, 3> &x);

}  // namespace feec

#endif  // FEEC_POLYNOMIAL_HPP
