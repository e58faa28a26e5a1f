#include <gtest/gtest.h>

#include <chrono>
#include <nlohmann/json.hpp>

#include "spin7/flow.hpp"

using namespace spin7;

namespace {

LaurentPoly sym(Symbol s, int p = 1) { return LaurentPoly::symbol(s, p); }
LaurentPoly q(long p, long d) { return LaurentPoly(make_rational(p, d)); }

const ODESystem& q_system() {
  static const ODESystem s = derive_flow(CosetModel::q(1, 1, 1));
  return s;
}
const ODESystem& m_system() {
  static const ODESystem s = derive_flow(CosetModel::m(1, 1));
  return s;
}

}  // namespace

TEST(Flow, DerivesQSystemExactly) {
  auto t0 = std::chrono::steady_clock::now();
  auto sys = derive_flow(CosetModel::q(1, 1, 1));
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 5.0);
  LaurentPoly a = sym(Symbol::A), b = sym(Symbol::B), c = sym(Symbol::C), f = sym(Symbol::F);
  EXPECT_EQ(sys.of(Symbol::A), q(-1, 6) * f * a.pow(-1));
  EXPECT_EQ(sys.of(Symbol::B), q(-1, 6) * f * b.pow(-1));
  EXPECT_EQ(sys.of(Symbol::C), q(-1, 6) * f * c.pow(-1));
  EXPECT_EQ(sys.of(Symbol::F), q(1, 6) * f * f * (a.pow(-2) + b.pow(-2) + c.pow(-2)) - LaurentPoly(3));
  EXPECT_EQ(sys.state, (std::vector<Symbol>{Symbol::A, Symbol::B, Symbol::C, Symbol::F}));
  EXPECT_EQ(sys.rank, 4);
}

TEST(Flow, DerivesMSystemExactly) {
  const auto& sys = m_system();
  LaurentPoly a = sym(Symbol::A), b = sym(Symbol::B), c = sym(Symbol::C);
  EXPECT_EQ(sys.of(Symbol::A), q(3, 8) * c * a.pow(-1));
  EXPECT_EQ(sys.of(Symbol::B), q(1, 4) * c * b.pow(-1));
  EXPECT_EQ(sys.of(Symbol::C), LaurentPoly(8) - q(1, 4) * c * c * b.pow(-2) - q(3, 4) * c * c * a.pow(-2));
  EXPECT_EQ(sys.state, (std::vector<Symbol>{Symbol::A, Symbol::B, Symbol::C}));
  EXPECT_EQ(sys.rank, 3);
  EXPECT_THROW(sys.of(Symbol::F), Error);
}

TEST(Flow, TimeReversalNegatesTheSystem) {
  for (const auto& model : {CosetModel::q(1, 1, 1), CosetModel::m(1, 1)}) {
    auto fwd = derive_flow(model);
    auto rev = derive_flow(build_invariant_structure(model, -1));
    for (Symbol s : fwd.state) EXPECT_EQ(rev.of(s), -fwd.of(s)) << model.name() << symbol_name(s);
  }
}

TEST(Flow, InadmissibleModelIsRejected) { EXPECT_THROW(derive_flow(CosetModel::q(1, 1, 2)), Error); }

TEST(Flow, FractionForm) {
  const auto& sys = m_system();
  EXPECT_EQ(sys.numerator(Symbol::A), q(3, 8) * sym(Symbol::C));
  EXPECT_EQ(sys.denominator(Symbol::A), sym(Symbol::A));
  EXPECT_EQ(sys.numerator(Symbol::C) * sys.denominator(Symbol::C).inverse(), sys.of(Symbol::C));
}

TEST(Flow, ClosureUnderTheSystem) {
  for (const auto& model : {CosetModel::q(1, 1, 1), CosetModel::m(1, 1)}) {
    auto s = build_invariant_structure(model);
    auto sys = derive_flow(s);
    auto d = substitute_flow(exterior_derivative(s.Omega, model), sys);
    EXPECT_TRUE(d.is_zero()) << model.name();
    // Without the system the derivative is not zero.
    EXPECT_FALSE(exterior_derivative(s.Omega, model).is_zero());
  }
}

TEST(Flow, ChainRule) {
  auto model = CosetModel::q(1, 1, 1);
  Multivector<LaurentPoly> u(model.coframe_size(), model.dt_generator());
  u.add(mask_of({0, 1}), sym(Symbol::A, 2));
  auto dt = chain_rule_dt(u, model.symbols());
  EXPECT_EQ(dt.coefficient({0, 1, model.dt_generator()}), LaurentPoly(2) * sym(Symbol::A) * sym(Symbol::DA));
  auto spatial = time_derivative(u, model.symbols());
  EXPECT_EQ(spatial.coefficient({0, 1}), LaurentPoly(2) * sym(Symbol::A) * sym(Symbol::DA));
}

TEST(Flow, CosymplecticAndHitchin) {
  for (const auto& [model, sys] : {std::pair{CosetModel::q(1, 1, 1), q_system()}, {CosetModel::m(1, 1), m_system()}}) {
    EXPECT_TRUE(cosymplectic_constraints(model).empty()) << model.name();
    EXPECT_TRUE(hitchin_residual(model, sys).is_zero()) << model.name();
    // Perturbing the first coefficient's equation breaks the 4-form evolution on e1234-type terms.
    ODESystem bad = sys;
    bad.rhs[Symbol::A] += sym(Symbol::A);
    auto r = hitchin_residual(model, bad);
    ASSERT_FALSE(r.is_zero()) << model.name();
    EXPECT_FALSE(r.coefficient({0, 1, 2, 3}).is_zero()) << model.name();
  }
}

TEST(Flow, InvariantTwoForms) {
  EXPECT_EQ(invariant_two_forms(CosetModel::q(1, 1, 1)).size(), 4u);
  EXPECT_EQ(invariant_two_forms(CosetModel::m(1, 1)).size(), 3u);
  for (const auto& model : {CosetModel::q(1, 1, 1), CosetModel::m(1, 1)})
    for (const auto& w : invariant_two_forms(model)) {
      EXPECT_TRUE(is_basic(w, model));
      int k = 0;
      EXPECT_TRUE(w.is_homogeneous(&k));
      EXPECT_EQ(k, 2);
    }
}

TEST(Flow, KaehlerSignsQ) {
  auto model = CosetModel::q(1, 1, 1);
  auto cert = kaehler_search(model, q_system());
  EXPECT_EQ(cert.signs, (std::vector<int>{1, 1, 1, 1}));
  EXPECT_EQ(cert.solutions.size(), 1u);
  EXPECT_TRUE(cert.residual_zero);
  EXPECT_TRUE(cert.volume_nonzero);
  const int dt = model.dt_generator();
  EXPECT_EQ(cert.eta.coefficient({0, 1}), sym(Symbol::A, 2));
  EXPECT_EQ(cert.eta.coefficient({4, 5}), sym(Symbol::C, 2));
  EXPECT_EQ(cert.eta.coefficient({6, dt}), sym(Symbol::F));
}

TEST(Flow, KaehlerSignsM) {
  auto model = CosetModel::m(1, 1);
  auto cert = kaehler_search(model, m_system());
  EXPECT_EQ(cert.signs, (std::vector<int>{1, -1, 1}));
  EXPECT_EQ(cert.solutions.size(), 1u);
  EXPECT_EQ(cert.eta.coefficient({0, 1}), sym(Symbol::A, 2));
  EXPECT_EQ(cert.eta.coefficient({2, 3}), sym(Symbol::A, 2));
  EXPECT_EQ(cert.eta.coefficient({4, 5}), -sym(Symbol::B, 2));
  EXPECT_EQ(cert.eta.coefficient({6, model.dt_generator()}), sym(Symbol::C));
  // Any other sign choice leaves d(eta) nonzero.
  auto other = kaehler_form(model, {1, 1, 1});
  EXPECT_FALSE(substitute_flow(exterior_derivative(other, model), m_system()).is_zero());
}

TEST(Flow, KaehlerUniquenessFailsOnMutatedSystem) {
  // f' never enters d(eta); a' does.
  ODESystem bad = q_system();
  bad.rhs[Symbol::A] += LaurentPoly::symbol(Symbol::A);
  EXPECT_TRUE(kaehler_solutions(CosetModel::q(1, 1, 1), bad).empty());
  EXPECT_THROW(kaehler_search(CosetModel::q(1, 1, 1), bad), Error);
}

TEST(Flow, ParitySymmetries) {
  using S = Symbol;
  const auto& qs = q_system();
  for (S s : {S::A, S::B, S::C}) EXPECT_TRUE(is_ode_symmetry(qs, {s}, false)) << symbol_name(s);
  EXPECT_TRUE(is_ode_symmetry(qs, {S::F}, true));
  EXPECT_FALSE(is_ode_symmetry(qs, {S::F}, false));
  EXPECT_FALSE(is_ode_symmetry(qs, {}, true));
  EXPECT_TRUE(is_ode_symmetry(qs, {S::A, S::B, S::C}, false));

  const auto& ms = m_system();
  for (S s : {S::A, S::B}) EXPECT_TRUE(is_ode_symmetry(ms, {s}, false)) << symbol_name(s);
  EXPECT_TRUE(is_ode_symmetry(ms, {S::C}, true));
  EXPECT_FALSE(is_ode_symmetry(ms, {S::C}, false));
}

TEST(Flow, JsonCarriesExactFractions) {
  auto j = nlohmann::json::parse(ode_system_json(m_system()));
  EXPECT_EQ(j["model"], "M(1,1)");
  EXPECT_EQ(j["rank"], 3);
  EXPECT_EQ(j["state"], nlohmann::json::array({"a", "b", "c"}));
  EXPECT_EQ(j["rhs"]["a"]["numerator"][0]["coeff"], "3/8");
  EXPECT_EQ(j["rhs"]["a"]["denominator"]["a"], 1);
  auto text = ode_system_json(q_system(), 0);
  EXPECT_NE(text.find("-1/6"), std::string::npos);
  EXPECT_EQ(text, ode_system_json(q_system(), 0));
}
