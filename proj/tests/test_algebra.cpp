#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "spin7/laurent.hpp"
#include "spin7/multivector.hpp"
#include "spin7/rational.hpp"
#include "spin7/structures.hpp"

using namespace spin7;

TEST(Rational, ParsesExactly) {
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("-3/8"), make_rational(-3, 8));
  EXPECT_EQ(parse_rational("6/16"), make_rational(3, 8));
  EXPECT_EQ(parse_rational("1.25"), make_rational(5, 4));
  EXPECT_EQ(parse_rational("1e-3"), make_rational(1, 1000));
  EXPECT_EQ(parse_rational("2.5E+4"), Rational(25000));
  EXPECT_EQ(parse_rational("-0.5"), make_rational(-1, 2));
}

TEST(Rational, RejectsGarbage) {
  for (const char* s : {"", "abc", "1/0", "1..2", "3/", "e5", "1e"}) {
    EXPECT_THROW(parse_rational(s), Error) << s;
  }
}

TEST(Rational, PrintsLowestTerms) {
  EXPECT_EQ(to_string(make_rational(6, 16)), "3/8");
  EXPECT_EQ(to_string(Rational(-4)), "-4");
  EXPECT_EQ(sign(make_rational(-1, 7)), -1);
  EXPECT_EQ(sign(Rational(0)), 0);
}

TEST(Rational, ExactAndRationalize) {
  EXPECT_EQ(exact_rational(0.375), make_rational(3, 8));
  EXPECT_EQ(exact_rational(-2.0), Rational(-2));
  EXPECT_EQ(rationalize(1.0 / 3.0, 1000), make_rational(1, 3));
  EXPECT_EQ(rationalize(-8.0 / 3.0 + 1e-13, 1000000), make_rational(-8, 3));
  EXPECT_EQ(rationalize(M_PI, 1000), make_rational(355, 113));
}

namespace {
LaurentPoly sym(Symbol s, int p = 1) { return LaurentPoly::symbol(s, p); }
}  // namespace

TEST(Laurent, RingOperations) {
  LaurentPoly a = sym(Symbol::A), f = sym(Symbol::F);
  LaurentPoly p = a * f + LaurentPoly(2);
  LaurentPoly q = a.pow(-1) * f;
  EXPECT_EQ(p - p, LaurentPoly());
  EXPECT_EQ(a * a.inverse(), LaurentPoly(1));
  EXPECT_EQ((p * q).to_string(), (q * p).to_string());
  EXPECT_EQ(p * (q + a), p * q + p * a);
  EXPECT_EQ(q.min_degree(Symbol::A), -1);
  EXPECT_EQ(p.max_degree(Symbol::F), 1);
  EXPECT_EQ(q.homogeneous_degree({Symbol::A, Symbol::F}), 0);
  EXPECT_THROW((p + a).homogeneous_degree({Symbol::A, Symbol::F}), Error);
}

TEST(Laurent, NegativePowerOfSumRejected) {
  LaurentPoly p = sym(Symbol::A) + sym(Symbol::B);
  EXPECT_THROW(p.pow(-1), Error);
  EXPECT_EQ(p.pow(2), sym(Symbol::A, 2) + sym(Symbol::A) * sym(Symbol::B).scaled(2) + sym(Symbol::B, 2));
}

TEST(Laurent, Divide) {
  LaurentPoly a = sym(Symbol::A), b = sym(Symbol::B);
  LaurentPoly p = (a + b) * (a - b) * a.pow(-2);
  auto q = p.divide(a - b);
  ASSERT_TRUE(q.has_value());
  EXPECT_EQ(*q, (a + b) * a.pow(-2));
  EXPECT_FALSE(p.divide(a + b + LaurentPoly(1)).has_value());
}

TEST(Laurent, DerivativeAndSubstitution) {
  LaurentPoly a = sym(Symbol::A), f = sym(Symbol::F);
  LaurentPoly p = f * f * a.pow(-2).scaled(make_rational(1, 6));
  EXPECT_EQ(p.derivative(Symbol::A), f * f * a.pow(-3).scaled(make_rational(-1, 3)));
  EXPECT_EQ(p.substitute(Symbol::F, a.scaled(2)), LaurentPoly(make_rational(2, 3)));
  EXPECT_EQ(p.flip_signs({Symbol::F}), p);
  EXPECT_EQ(f.flip_signs({Symbol::F}), -f);
}

TEST(Laurent, CircleReduction) {
  LaurentPoly c = sym(Symbol::Cos), s = sym(Symbol::Sin);
  EXPECT_EQ((c * c + s * s).reduce_circle(), LaurentPoly(1));
  EXPECT_EQ((s * s * s).reduce_circle(), s - c * c * s);
}

TEST(Laurent, Evaluation) {
  LaurentPoly p = sym(Symbol::A, -2) * sym(Symbol::F).scaled(make_rational(1, 6)) - LaurentPoly(3);
  Assignment asg;
  asg.set(Symbol::A, 2.0).set(Symbol::F, 3.0);
  EXPECT_DOUBLE_EQ(p.eval(asg), 0.125 - 3.0);
  Rational exact = p.eval_exact([](Symbol s) { return s == Symbol::A ? Rational(2) : Rational(3); });
  EXPECT_EQ(exact, make_rational(-23, 8));
  auto [num, den] = p.as_fraction();
  EXPECT_EQ(num * den.inverse(), p);
}

TEST(Laurent, SymbolNames) {
  for (Symbol s : {Symbol::A, Symbol::B, Symbol::C, Symbol::F, Symbol::DA, Symbol::Cos}) {
    auto back = symbol_from_name(symbol_name(s));
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, s);
  }
  EXPECT_FALSE(symbol_from_name("z").has_value());
  EXPECT_EQ(derivative_of(Symbol::C), Symbol::DC);
  EXPECT_TRUE(is_base(Symbol::F));
  EXPECT_FALSE(is_base(Symbol::DF));
}

TEST(Multivector, WedgeSigns) {
  using MV = Multivector<Rational>;
  MV e0 = MV::generator(4, 0), e1 = MV::generator(4, 1), e2 = MV::generator(4, 2);
  EXPECT_EQ(wedge(e0, e1), -wedge(e1, e0));
  EXPECT_TRUE(wedge(e0, e0).is_zero());
  MV w = wedge(wedge(e2, e0), e1);
  EXPECT_EQ(w.coefficient({0, 1, 2}), Rational(1));
  MV two = e0 + e1;
  EXPECT_TRUE(wedge(two, two).is_zero());
}

TEST(Multivector, InteriorIsAntiderivation) {
  using MV = Multivector<Rational>;
  MV u = wedge(MV::generator(5, 1), MV::generator(5, 3));
  MV v = MV::generator(5, 1) + MV::generator(5, 4).scaled(3);
  for (int i = 0; i < 5; ++i) {
    MV lhs = interior(wedge(u, v), i);
    MV rhs = wedge(interior(u, i), v) + wedge(u, interior(v, i));  // u has even degree
    EXPECT_EQ(lhs, rhs) << i;
  }
}

TEST(Multivector, HodgeStarInvolutionInSeven) {
  using MV = Multivector<Rational>;
  for (Mask m = 0; m < (Mask(1) << 7); ++m) {
    MV u = MV::basis(7, m, Rational(1));
    EXPECT_EQ(hodge_star(hodge_star(u)), u) << m;
    // u ^ *u = vol
    EXPECT_EQ(wedge(u, hodge_star(u)).coefficient((Mask(1) << 7) - 1), Rational(1)) << m;
  }
}

TEST(Multivector, CanonicalFormIdentities) {
  const auto& cf = canonical_forms();
  using MV = Multivector<Rational>;
  EXPECT_EQ(cf.omega.term_count(), 7u);
  EXPECT_EQ(cf.Omega.term_count(), 14u);
  // Omega = dx0 ^ omega + *omega
  MV star7 = hodge_star(cf.omega);
  MV rebuilt = wedge(MV::generator(8, 0), shift_to_eight(cf.omega)) + shift_to_eight(star7);
  EXPECT_EQ(rebuilt, cf.Omega);
  // Omega ^ Omega = 14 vol8
  MV sq = wedge(cf.Omega, cf.Omega);
  EXPECT_EQ(sq.term_count(), 1u);
  EXPECT_EQ(sq.coefficient(Mask(0xff)), Rational(14));
  // self-dual
  EXPECT_EQ(hodge_star(cf.Omega), cf.Omega);
}

// Pullback of a 4-form against the minor expansion (Cauchy-Binet) for dense rational maps.
TEST(Multivector, PullbackMatchesMinors) {
  using MV = Multivector<Rational>;
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> dist(-4, 4);
  const int n = 8;
  auto det4 = [](std::array<std::array<Rational, 4>, 4> m) {
    Rational d = 1;
    for (int c = 0; c < 4; ++c) {
      int p = c;
      while (p < 4 && m[p][c] == 0) ++p;
      if (p == 4) return Rational(0);
      if (p != c) {
        std::swap(m[p], m[c]);
        d = -d;
      }
      d *= m[c][c];
      for (int r = c + 1; r < 4; ++r) {
        Rational k = m[r][c] / m[c][c];
        for (int j = c; j < 4; ++j) m[r][j] -= k * m[c][j];
      }
    }
    return d;
  };
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<std::vector<Rational>> R(n, std::vector<Rational>(n));
    std::vector<MV> images;
    for (int i = 0; i < n; ++i) {
      MV im(n);
      for (int j = 0; j < n; ++j) {
        R[i][j] = dist(rng);
        im.add(Mask(1) << j, R[i][j]);
      }
      images.push_back(im);
    }
    const MV& u = trial == 0 ? canonical_forms().Omega : MV::basis(n, mask_of({0, 2, 5, 7}), Rational(1));
    MV got = pullback(u, images);
    std::vector<Mask> subsets;
    for (Mask m = 0; m < (Mask(1) << n); ++m)
      if (grade(m) == 4) subsets.push_back(m);
    ASSERT_EQ(subsets.size(), 70u);
    for (Mask J : subsets) {
      Rational expect = 0;
      auto cols = mask_indices(J);
      for (const auto& [I, c] : u.terms()) {
        auto rows = mask_indices(I);
        std::array<std::array<Rational, 4>, 4> m;
        for (int r = 0; r < 4; ++r)
          for (int k = 0; k < 4; ++k) m[r][k] = R[rows[r]][cols[k]];
        expect += c * det4(m);
      }
      EXPECT_EQ(got.coefficient(J), expect) << trial << " " << J;
    }
  }
}

TEST(Multivector, NumericEvaluation) {
  Multivector<LaurentPoly> u(3);
  u.add(mask_of({0, 1}), LaurentPoly::symbol(Symbol::A, 2));
  u.add(mask_of({2}), LaurentPoly::symbol(Symbol::F).scaled(-1));
  Assignment a;
  a.set(Symbol::A, 3.0).set(Symbol::F, 2.0);
  auto v = eval_numeric(u, a);
  EXPECT_DOUBLE_EQ(v.coefficient({0, 1}), 9.0);
  EXPECT_DOUBLE_EQ(max_abs(v), 9.0);
}
