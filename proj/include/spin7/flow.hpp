#pragma once

#include <map>
#include <string>
#include <vector>

#include "spin7/homogeneous.hpp"
#include "spin7/laurent.hpp"
#include "spin7/multivector.hpp"
#include "spin7/structures.hpp"

namespace spin7 {

struct ODESystem {
  std::string model_name;
  ModelKind kind = ModelKind::Q;
  std::vector<Symbol> state;
  std::map<Symbol, LaurentPoly> rhs;  // keyed by base symbol: x' = rhs[x]
  int rank = 0;
  int equations = 0;

  const LaurentPoly& of(Symbol s) const;
  // rhs = numerator / denominator with a monomial denominator in the base symbols.
  LaurentPoly numerator(Symbol s) const { return of(s).as_fraction().first; }
  LaurentPoly denominator(Symbol s) const { return of(s).as_fraction().second; }
};

// dt ^ sum_I (dP_I/dt) e^I, with dP/dt expanded by the chain rule in the derivative symbols.
Multivector<LaurentPoly> chain_rule_dt(const Multivector<LaurentPoly>& form, const SymbolTable& symbols);
// Spatial part only: sum_I (dP_I/dt) e^I (no dt factor).
Multivector<LaurentPoly> time_derivative(const Multivector<LaurentPoly>& form, const SymbolTable& symbols);
// Full exterior derivative of a t-dependent invariant form on the group coframe.
Multivector<LaurentPoly> exterior_derivative(const Multivector<LaurentPoly>& form, const CosetModel& model);

LaurentPoly substitute_flow(const LaurentPoly& p, const ODESystem& sys);
Multivector<LaurentPoly> substitute_flow(const Multivector<LaurentPoly>& form, const ODESystem& sys);

ODESystem derive_flow(const CosetModel& model);
ODESystem derive_flow(const Spin7Structure& structure);

std::vector<LaurentPoly> cosymplectic_constraints(const CosetModel& model);

Multivector<LaurentPoly> hitchin_residual(const CosetModel& model, const ODESystem& sys);

// Constant-coefficient basic 2-forms on the tangent and dt generators (a basis in reduced echelon form).
std::vector<Multivector<Rational>> invariant_two_forms(const CosetModel& model);

struct KaehlerTerm {
  LaurentPoly coefficient;
  Multivector<LaurentPoly> form;
};
std::vector<KaehlerTerm> kaehler_basis(const CosetModel& model);
Multivector<LaurentPoly> kaehler_form(const CosetModel& model, const std::vector<int>& signs);

struct KaehlerCertificate {
  std::vector<int> signs;
  Multivector<LaurentPoly> eta;
  bool residual_zero = false;
  bool volume_nonzero = false;
  std::vector<std::vector<int>> solutions;  // every closing sign vector, first sign +1
};

// Throws a derivation error unless exactly one sign class closes.
KaehlerCertificate kaehler_search(const CosetModel& model, const ODESystem& sys);
// Same enumeration without the uniqueness requirement.
std::vector<std::vector<int>> kaehler_solutions(const CosetModel& model, const ODESystem& sys);

// x -> sigma x (sigma = -1 on `flipped`) together with t -> -t if reverse_time.
bool is_ode_symmetry(const ODESystem& sys, const std::vector<Symbol>& flipped, bool reverse_time);

std::string ode_system_json(const ODESystem& sys, int indent = 2);

}  // namespace spin7
