#pragma once

#include <array>
#include <vector>

#include "spin7/integrate.hpp"
#include "spin7/rational.hpp"

namespace spin7 {

// Dense univariate polynomial, coefficient k multiplies s^k.
struct RationalPolynomial {
  std::vector<Rational> coeffs;

  static RationalPolynomial linear_factor(const Rational& root);  // s - root
  RationalPolynomial operator*(const RationalPolynomial& o) const;
  RationalPolynomial operator+(const RationalPolynomial& o) const;
  RationalPolynomial scaled(const Rational& c) const;
  RationalPolynomial antiderivative() const;  // vanishing at 0
  RationalPolynomial derivative() const;
  Rational operator()(const Rational& s) const;
  double operator()(double s) const;
  int degree() const;
  std::string to_string(const char* var = "s") const;
};

// Closed-form profile parametrized by the primitive s = F(t) (Q) or s = C(t) (M).
//   Q: f~(s)^2 = (f0^2 D(0) - 6 P(s)) / D(s),  D = (s - 3a0^2)(s - 3b0^2)(s - 3c0^2),  P = int_0^s D
//      a^2 = a0^2 - s/3 (same for b, c)
//   M: c~(s)^2 = (c0^2 mu(0) + 16 P(s)) / mu(s),  mu = (s + 2b0^2)(s + 4a0^2/3)^2,  P = int_0^s mu
//      a^2 = a0^2 + 3s/4,  b^2 = b0^2 + s/2,  c^2 as above
class Profile {
 public:
  static Profile q(const Rational& a0, const Rational& b0, const Rational& c0, const Rational& f0);
  static Profile m(const Rational& a0, const Rational& b0, const Rational& c0);
  // Initial values from an orbit spec (collapsing coefficients are zero).
  static Profile from_spec(const OrbitSpec& spec);

  ModelKind kind() const { return kind_; }
  const RationalPolynomial& numerator() const { return num_; }
  const RationalPolynomial& denominator() const { return den_; }
  const RationalPolynomial& antiderivative() const { return anti_; }
  const std::array<Rational, 4>& initial() const { return init_; }  // a0, b0, c0, f0 (Q) or c0 (M)

  // Square of the circle coefficient (f for Q, c for M); domain error at a pole.
  Rational square(const Rational& s) const;
  double square(double s) const;
  // d/ds of the square.
  Rational square_derivative(const Rational& s) const;
  // (a^2, b^2, c^2) from the linear relations.
  std::array<Rational, 3> metric_squares(const Rational& s) const;
  std::array<double, 3> metric_squares(double s) const;

 private:
  ModelKind kind_ = ModelKind::Q;
  std::array<Rational, 4> init_;
  RationalPolynomial num_, den_, anti_;
  std::array<Rational, 3> rel_const_, rel_slope_;
};

struct Deviation {
  double circle = 0.0;     // max relative deviation of f^2 (c^2)
  double relations = 0.0;  // max relative deviation of a^2, b^2, c^2 (Q) or a^2, b^2 (M)
  double max() const { return circle > relations ? circle : relations; }
  std::size_t samples = 0;
};

// Largest relative deviation between a trajectory and a profile over samples with t <= t_max.
Deviation compare(const Trajectory& traj, const Profile& prof, double t_max = std::numeric_limits<double>::infinity());

}  // namespace spin7
