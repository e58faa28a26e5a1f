#include <gtest/gtest.h>

#include <random>

#include "spin7/closed_form.hpp"

using namespace spin7;
using S = Symbol;

namespace {

Rational r(long p, long q = 1) { return make_rational(p, q); }

const ODESystem& q_system() {
  static const ODESystem s = derive_flow(CosetModel::q(1, 1, 1));
  return s;
}
const ODESystem& m_system() {
  static const ODESystem s = derive_flow(CosetModel::m(1, 1));
  return s;
}

std::vector<Rational> random_points(unsigned seed, int count, long lo, long hi) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<long> num(lo * 97, hi * 97);
  std::vector<Rational> out;
  while (static_cast<int>(out.size()) < count) out.push_back(make_rational(num(rng), 97));
  return out;
}

}  // namespace

TEST(RationalPolynomial, Arithmetic) {
  auto p = RationalPolynomial::linear_factor(2) * RationalPolynomial::linear_factor(-3);  // s^2 + s - 6
  EXPECT_EQ(p.coeffs, (std::vector<Rational>{-6, 1, 1}));
  EXPECT_EQ(p.degree(), 2);
  EXPECT_EQ(p(Rational(2)), 0);
  EXPECT_EQ(p.derivative().coeffs, (std::vector<Rational>{1, 2}));
  auto P = p.antiderivative();
  EXPECT_EQ(P(Rational(0)), 0);
  EXPECT_EQ(P.derivative().coeffs, p.coeffs);
  EXPECT_EQ((p + p.scaled(-1)).degree(), -1);  // zero polynomial
  EXPECT_DOUBLE_EQ(p(0.5), -5.25);
  EXPECT_EQ(p.to_string(), "s^2 + s - 6");
}

TEST(ClosedForm, InitialValues) {
  auto q = Profile::q(1, r(3, 2), 2, r(-1, 2));
  EXPECT_EQ(q.square(Rational(0)), r(1, 4));
  auto sq = q.metric_squares(Rational(0));
  EXPECT_EQ(sq[0], 1);
  EXPECT_EQ(sq[1], r(9, 4));
  EXPECT_EQ(sq[2], 4);
  auto m = Profile::m(1, 2, 3);
  EXPECT_EQ(m.square(Rational(0)), 9);
  EXPECT_EQ(m.metric_squares(Rational(0))[1], 4);
}

TEST(ClosedForm, RemovableSingularityAtTheSingularOrbit) {
  auto p = Profile::q(0, 1, 1, 0);
  EXPECT_EQ(p.square(Rational(0)), 0);
  auto m = Profile::m(1, 0, 0);
  EXPECT_EQ(m.square(Rational(0)), 0);
}

TEST(ClosedForm, SpotValue) {
  auto p = Profile::q(0, 1, 1, 0);
  EXPECT_EQ(p.square(Rational(-3)), r(51, 8));
  EXPECT_EQ(p.metric_squares(Rational(-3))[0], 1);
  EXPECT_EQ(p.metric_squares(Rational(-3))[1], 2);
}

TEST(ClosedForm, Asymptote) {
  auto p = Profile::q(0, 1, 1, 0);
  for (long s : {-1000000L, -100000000L}) {
    Rational v = p.square(Rational(s)) / Rational(-s);
    EXPECT_NEAR(to_double(v), 1.5, 10.0 / static_cast<double>(-s));
  }
  auto m = Profile::m(1, 0, 0);
  // c^2 / s -> 16/4 = 4 for large s, matching c/t -> 2 with s ~ t^2.
  Rational v = m.square(Rational(100000000)) / Rational(100000000);
  EXPECT_NEAR(to_double(v), 4.0, 1e-6);
}

// d(f^2)/ds = 2 f'/f * f = 2 f' with ds/dt = f, evaluated exactly at random rational s.
TEST(ClosedForm, SolvesTheQSystem) {
  auto p = Profile::q(r(3, 2), 1, r(5, 4), r(-2, 3));
  for (const Rational& s : random_points(11, 20, -40, 0)) {
    auto sq = p.metric_squares(s);
    Rational f2 = p.square(s);
    Rational rhs = f2 * (1 / sq[0] + 1 / sq[1] + 1 / sq[2]) / 3 - 6;
    EXPECT_EQ(p.square_derivative(s), rhs) << to_string(s);
    // a a' = -f/6 and da^2/ds = -1/3
    EXPECT_EQ(p.metric_squares(s + 1)[0] - sq[0], r(-1, 3));
  }
}

TEST(ClosedForm, SolvesTheMSystem) {
  auto p = Profile::m(r(1, 2), r(3, 2), r(7, 5));
  for (const Rational& s : random_points(12, 20, 0, 40)) {
    auto sq = p.metric_squares(s);
    Rational c2 = sq[2];
    Rational rhs = 16 - c2 / (2 * sq[1]) - 3 * c2 / (2 * sq[0]);
    EXPECT_EQ(p.square_derivative(s), rhs) << to_string(s);
    EXPECT_EQ(p.metric_squares(s + 1)[0] - sq[0], r(3, 4));
    EXPECT_EQ(p.metric_squares(s + 1)[1] - sq[1], r(1, 2));
  }
}

TEST(ClosedForm, SignFlipSymmetry) {
  auto a = Profile::q(1, 2, 3, r(1, 2));
  auto b = Profile::q(-1, 2, -3, r(-1, 2));
  for (const Rational& s : random_points(5, 10, -20, 0)) EXPECT_EQ(a.square(s), b.square(s));
  auto m1 = Profile::m(1, 2, 3), m2 = Profile::m(-1, -2, -3);
  for (const Rational& s : random_points(6, 10, 0, 20)) EXPECT_EQ(m1.square(s), m2.square(s));
}

TEST(ClosedForm, PoleIsADomainError) {
  auto p = Profile::q(1, 2, 3, 1);
  try {
    p.square(Rational(3));  // a^2 = 0 at s = 3 a0^2
    FAIL() << "expected a domain error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Domain);
  }
  EXPECT_THROW(p.square_derivative(Rational(12)), Error);
  EXPECT_THROW(Profile::m(1, 1, 1).square(r(-2)), Error);
}

TEST(ClosedForm, FromSpec) {
  auto spec = OrbitSpec::make(ModelKind::M, Orbit::CP2, {{S::A, 2}});
  auto p = Profile::from_spec(spec);
  EXPECT_EQ(p.kind(), ModelKind::M);
  EXPECT_EQ(p.initial()[0], 2);
  EXPECT_EQ(p.initial()[1], 0);
}

TEST(ClosedForm, MatchesNumericsQ) {
  auto spec = OrbitSpec::make(ModelKind::Q, Orbit::S2xS2, {{S::B, 1}, {S::C, 1}});
  auto traj = solve(q_system(), spec, {});
  auto dev = compare(traj, Profile::from_spec(spec), 50.0);
  EXPECT_GT(dev.samples, 20u);
  EXPECT_LE(dev.max(), 1e-8);
  // F decreases along the flow (f < 0), so the profile is read at negative s.
  EXPECT_LT(traj.samples.back().primitive, 0);
}

TEST(ClosedForm, MatchesNumericsM) {
  auto spec = OrbitSpec::make(ModelKind::M, Orbit::CP2, {{S::A, 1}});
  auto traj = solve(m_system(), spec, {});
  auto dev = compare(traj, Profile::from_spec(spec), 50.0);
  EXPECT_LE(dev.max(), 1e-8);
  EXPECT_GT(traj.samples.back().primitive, 0);
}

TEST(ClosedForm, MatchesNumericsOtherOrbits) {
  IntegratorConfig cfg;
  cfg.atol = 1e-14;
  struct Run {
    const ODESystem& sys;
    OrbitSpec spec;
  };
  std::vector<Run> runs = {
      {q_system(), OrbitSpec::make(ModelKind::Q, Orbit::S2xS2xS2, {{S::A, 1}, {S::B, 2}, {S::C, r(1, 2)}})},
      {q_system(), OrbitSpec::make(ModelKind::Q, Orbit::S2xS2, {{S::B, 3}, {S::C, r(3, 2)}})},
      {m_system(), OrbitSpec::make(ModelKind::M, Orbit::CP2xS2, {{S::A, 1}, {S::B, r(1, 3)}})},
      {m_system(), OrbitSpec::make(ModelKind::M, Orbit::S2, {{S::B, 1}})},
  };
  for (const auto& run : runs) {
    auto traj = solve(run.sys, run.spec, cfg);
    auto dev = compare(traj, Profile::from_spec(run.spec), 50.0);
    EXPECT_LE(dev.max(), 1e-8) << orbit_name(run.spec.orbit);
  }
}

TEST(ClosedForm, DetectsTheWrongProfile) {
  auto spec = OrbitSpec::make(ModelKind::Q, Orbit::S2xS2, {{S::B, 1}, {S::C, 1}});
  auto traj = solve(q_system(), spec, {});
  EXPECT_GT(compare(traj, Profile::q(0, 1, r(11, 10), 0), 50.0).max(), 1e-3);
  EXPECT_THROW(compare(traj, Profile::m(1, 0, 0)), Error);
}
