#include "spin7/flow.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <sstream>

#include "spin7/error.hpp"

namespace spin7 {

namespace {

bool is_derivative_symbol(int i) { return i >= 4 && i < 8; }

int derivative_degree(const Exponents& e) {
  int d = 0;
  for (int i = 4; i < 8; ++i) d += e[i];
  return d;
}

struct LinearRow {
  std::vector<LaurentPoly> coeffs;
  LaurentPoly rhs;
  std::string label;
};

struct LinearSolution {
  std::vector<LaurentPoly> values;
  int rank = 0;
};

bool row_is_zero(const LinearRow& r) {
  return r.rhs.is_zero() && std::all_of(r.coeffs.begin(), r.coeffs.end(), [](const auto& c) { return c.is_zero(); });
}

// Exact Gauss-Jordan elimination in the Laurent ring: monomial pivots are inverted,
// other pivots are eliminated fraction-free, and the final quotients must be exact.
LinearSolution solve_exact(std::vector<LinearRow> rows, std::size_t unknowns) {
  std::vector<bool> used(rows.size(), false);
  std::vector<std::size_t> pivot_row(unknowns, rows.size());
  LinearSolution sol;
  for (std::size_t col = 0; col < unknowns; ++col) {
    std::size_t best = rows.size();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (used[r] || rows[r].coeffs[col].is_zero()) continue;
      if (best == rows.size() || rows[r].coeffs[col].size() < rows[best].coeffs[col].size()) best = r;
    }
    if (best == rows.size()) continue;
    used[best] = true;
    pivot_row[col] = best;
    LinearRow& p = rows[best];
    if (p.coeffs[col].is_monomial()) {
      LaurentPoly inv = p.coeffs[col].inverse();
      for (auto& c : p.coeffs) c *= inv;
      p.rhs *= inv;
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == best || rows[r].coeffs[col].is_zero()) continue;
      LaurentPoly factor = rows[r].coeffs[col];
      LaurentPoly piv = p.coeffs[col];
      for (std::size_t c = 0; c < unknowns; ++c) rows[r].coeffs[c] = piv * rows[r].coeffs[c] - factor * p.coeffs[c];
      rows[r].rhs = piv * rows[r].rhs - factor * p.rhs;
    }
    ++sol.rank;
  }
  std::ostringstream bad;
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (!used[r] && !row_is_zero(rows[r])) bad << "\n  " << rows[r].label;
  if (!bad.str().empty()) throw derivation_error("inconsistent coefficient equations:" + bad.str());
  for (std::size_t col = 0; col < unknowns; ++col)
    if (pivot_row[col] == rows.size())
      throw derivation_error("under-determined system: rank " + std::to_string(sol.rank) + " < " +
                             std::to_string(unknowns));
  for (std::size_t col = 0; col < unknowns; ++col) {
    const LinearRow& p = rows[pivot_row[col]];
    auto q = p.rhs.divide(p.coeffs[col]);
    if (!q) throw derivation_error("solution for unknown " + std::to_string(col) + " is not a Laurent polynomial");
    sol.values.push_back(*q);
  }
  return sol;
}

std::string equation_label(Mask m, const LaurentPoly& c, const std::vector<std::string>& names, int dt) {
  return "[" + subset_name(m, dt, names) + "] " + c.to_string() + " = 0";
}

}  // namespace

const LaurentPoly& ODESystem::of(Symbol s) const {
  auto it = rhs.find(s);
  if (it == rhs.end()) throw input_error(std::string("no equation for ") + symbol_name(s));
  return it->second;
}

Multivector<LaurentPoly> time_derivative(const Multivector<LaurentPoly>& form, const SymbolTable& symbols) {
  Multivector<LaurentPoly> r(form.size(), form.dt_index());
  for (const auto& [m, c] : form.terms()) {
    LaurentPoly d;
    for (Symbol s : symbols.base) d += c.derivative(s) * LaurentPoly::symbol(derivative_of(s));
    r.add(m, d);
  }
  return r;
}

Multivector<LaurentPoly> chain_rule_dt(const Multivector<LaurentPoly>& form, const SymbolTable& symbols) {
  if (form.dt_index() < 0) throw input_error("form has no dt generator");
  auto dt = Multivector<LaurentPoly>::generator(form.size(), form.dt_index(), form.dt_index());
  return wedge(dt, time_derivative(form.avoiding(Mask(1) << form.dt_index()), symbols));
}

Multivector<LaurentPoly> exterior_derivative(const Multivector<LaurentPoly>& form, const CosetModel& model) {
  return chain_rule_dt(form, model.symbols()) + invariant_d(form, model);
}

LaurentPoly substitute_flow(const LaurentPoly& p, const ODESystem& sys) {
  LaurentPoly r = p;
  for (const auto& [s, v] : sys.rhs) r = r.substitute(derivative_of(s), v);
  return r;
}

Multivector<LaurentPoly> substitute_flow(const Multivector<LaurentPoly>& form, const ODESystem& sys) {
  return form.map_coefficients([&](const LaurentPoly& p) { return substitute_flow(p, sys); });
}

ODESystem derive_flow(const CosetModel& model) { return derive_flow(build_invariant_structure(model)); }

ODESystem derive_flow(const Spin7Structure& structure) {
  const CosetModel& model = structure.model;
  const SymbolTable symbols = model.symbols();
  auto dOmega = exterior_derivative(structure.Omega, model);
  for (const auto& [m, c] : dOmega.terms())
    if (m & model.isotropy_mask()) throw derivation_error("d Omega is not basic: isotropy generator in a term");
  const auto names = coframe_names(model);
  std::vector<LinearRow> rows;
  for (const auto& [m, c] : dOmega.terms()) {
    LinearRow row;
    row.coeffs.assign(symbols.derivative.size(), LaurentPoly());
    row.label = equation_label(m, c, names, model.dt_generator());
    for (const auto& [e, v] : c.terms()) {
      int deg = derivative_degree(e);
      if (deg > 1) throw derivation_error("coefficient equation is nonlinear in derivatives: " + row.label);
      Exponents rest = e;
      if (deg == 0) {
        row.rhs -= LaurentPoly::monomial(v, rest);
        continue;
      }
      for (std::size_t k = 0; k < symbols.derivative.size(); ++k) {
        int i = static_cast<int>(symbols.derivative[k]);
        if (e[i] == 1) {
          rest[i] = 0;
          row.coeffs[k] += LaurentPoly::monomial(v, rest);
        }
      }
      for (int i = 0; i < kSymbolCount; ++i)
        if (is_derivative_symbol(i) && rest[i] != 0) throw derivation_error("unknown derivative symbol in " + row.label);
    }
    rows.push_back(row);
  }
  ODESystem sys;
  sys.model_name = model.name();
  sys.kind = model.kind();
  sys.state = symbols.base;
  sys.equations = static_cast<int>(rows.size());
  auto sol = solve_exact(rows, symbols.derivative.size());
  sys.rank = sol.rank;
  for (std::size_t k = 0; k < symbols.base.size(); ++k) sys.rhs[symbols.base[k]] = sol.values[k];
  if (!substitute_flow(dOmega, sys).is_zero()) throw derivation_error("back-substitution leaves a nonzero d Omega");
  return sys;
}

std::vector<LaurentPoly> cosymplectic_constraints(const CosetModel& model) {
  auto s = build_invariant_structure(model);
  auto d = invariant_d(s.star_omega, model);
  std::vector<LaurentPoly> out;
  for (const auto& [m, c] : d.terms())
    if (std::find(out.begin(), out.end(), c) == out.end() && std::find(out.begin(), out.end(), -c) == out.end())
      out.push_back(c);
  return out;
}

Multivector<LaurentPoly> hitchin_residual(const CosetModel& model, const ODESystem& sys) {
  auto s = build_invariant_structure(model);
  auto r = time_derivative(s.star_omega, model.symbols()) - invariant_d(s.omega, model);
  return substitute_flow(r, sys);
}

std::vector<Multivector<Rational>> invariant_two_forms(const CosetModel& model) {
  const int n = model.coframe_size(), dt = model.dt_generator();
  std::vector<int> gens;
  for (int i = 0; i < 7; ++i) gens.push_back(i);
  gens.push_back(dt);
  std::vector<Mask> masks;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) masks.push_back(mask_of({gens[i], gens[j]}));
  // Columns: candidate 2-forms; rows: components of iota_X d e^I for isotropy X.
  std::map<std::pair<int, Mask>, std::vector<Rational>> rows;
  for (std::size_t c = 0; c < masks.size(); ++c) {
    auto d = invariant_d(Multivector<Rational>::basis(n, masks[c], Rational(1), dt), model);
    for (int x : model.isotropy_indices()) {
      auto contracted = interior(d, x);
      for (const auto& [m, v] : contracted.terms()) {
        auto& row = rows[{x, m}];
        row.resize(masks.size());
        row[c] = v;
      }
    }
  }
  std::vector<std::vector<Rational>> mat;
  for (auto& [k, r] : rows) mat.push_back(r);
  // Reduced row echelon form, then read off the null space.
  std::vector<int> pivots;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < masks.size() && rank < mat.size(); ++col) {
    std::size_t p = rank;
    while (p < mat.size() && mat[p][col] == 0) ++p;
    if (p == mat.size()) continue;
    std::swap(mat[p], mat[rank]);
    Rational inv = Rational(1) / mat[rank][col];
    for (auto& v : mat[rank]) v *= inv;
    for (std::size_t r = 0; r < mat.size(); ++r) {
      if (r == rank || mat[r][col] == 0) continue;
      Rational f = mat[r][col];
      for (std::size_t cc = 0; cc < masks.size(); ++cc) mat[r][cc] -= f * mat[rank][cc];
    }
    pivots.push_back(static_cast<int>(col));
    ++rank;
  }
  std::vector<Multivector<Rational>> basis;
  for (std::size_t free = 0; free < masks.size(); ++free) {
    if (std::find(pivots.begin(), pivots.end(), static_cast<int>(free)) != pivots.end()) continue;
    Multivector<Rational> v(n, dt);
    v.add(masks[free], Rational(1));
    for (std::size_t r = 0; r < pivots.size(); ++r) v.add(masks[static_cast<std::size_t>(pivots[r])], -mat[r][free]);
    basis.push_back(v);
  }
  return basis;
}

std::vector<KaehlerTerm> kaehler_basis(const CosetModel& model) {
  if (!model.is_distinguished()) throw input_error("no invariant structure on " + model.name());
  const int n = model.coframe_size(), dt = model.dt_generator();
  auto two = [&](int i, int j) { return Multivector<LaurentPoly>::basis(n, mask_of({i, j}), LaurentPoly(1), dt); };
  auto a2 = LaurentPoly::symbol(Symbol::A, 2), b2 = LaurentPoly::symbol(Symbol::B, 2),
       c2 = LaurentPoly::symbol(Symbol::C, 2);
  if (model.kind() == ModelKind::Q)
    return {{a2, two(0, 1)}, {b2, two(2, 3)}, {c2, two(4, 5)}, {LaurentPoly::symbol(Symbol::F), two(6, dt)}};
  return {{a2, two(0, 1) + two(2, 3)}, {b2, two(4, 5)}, {LaurentPoly::symbol(Symbol::C), two(6, dt)}};
}

Multivector<LaurentPoly> kaehler_form(const CosetModel& model, const std::vector<int>& signs) {
  auto basis = kaehler_basis(model);
  if (signs.size() != basis.size()) throw input_error("wrong number of signs");
  Multivector<LaurentPoly> eta(model.coframe_size(), model.dt_generator());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (signs[i] != 1 && signs[i] != -1) throw input_error("signs must be +1 or -1");
    eta += basis[i].form.scaled(basis[i].coefficient.scaled(signs[i]));
  }
  return eta;
}

std::vector<std::vector<int>> kaehler_solutions(const CosetModel& model, const ODESystem& sys) {
  const std::size_t k = kaehler_basis(model).size();
  std::vector<std::vector<int>> out;
  for (unsigned bits = 0; bits < (1u << k); ++bits) {
    std::vector<int> signs;
    for (std::size_t i = 0; i < k; ++i) signs.push_back((bits >> i) & 1u ? -1 : 1);
    auto d = substitute_flow(exterior_derivative(kaehler_form(model, signs), model), sys);
    if (d.is_zero() && signs.front() == 1) out.push_back(signs);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

KaehlerCertificate kaehler_search(const CosetModel& model, const ODESystem& sys) {
  KaehlerCertificate cert;
  cert.solutions = kaehler_solutions(model, sys);
  if (cert.solutions.size() != 1)
    throw derivation_error(std::to_string(cert.solutions.size()) + " closing Kaehler sign classes (expected exactly one)");
  cert.signs = cert.solutions.front();
  cert.eta = kaehler_form(model, cert.signs);
  cert.residual_zero = substitute_flow(exterior_derivative(cert.eta, model), sys).is_zero();
  auto vol = wedge_power(cert.eta, 4);
  cert.volume_nonzero = !vol.coefficient(model.tangent_mask() | model.dt_mask()).is_zero();
  return cert;
}

bool is_ode_symmetry(const ODESystem& sys, const std::vector<Symbol>& flipped, bool reverse_time) {
  for (const auto& [s, rhs] : sys.rhs) {
    int sigma = std::find(flipped.begin(), flipped.end(), s) != flipped.end() ? -1 : 1;
    int tau = reverse_time ? -1 : 1;
    if (rhs.flip_signs(flipped) != rhs.scaled(sigma * tau)) return false;
  }
  return true;
}

namespace {

nlohmann::json poly_json(const LaurentPoly& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, c] : p.terms()) {
    nlohmann::json exps = nlohmann::json::object();
    for (int i = 0; i < kSymbolCount; ++i)
      if (e[i] != 0) exps[symbol_name(static_cast<Symbol>(i))] = e[i];
    terms.push_back({{"coeff", c.get_str()}, {"exponents", exps}});
  }
  return terms;
}

}  // namespace

std::string ode_system_json(const ODESystem& sys, int indent) {
  nlohmann::ordered_json j;
  j["model"] = sys.model_name;
  nlohmann::json st = nlohmann::json::array();
  for (Symbol s : sys.state) st.push_back(symbol_name(s));
  j["state"] = st;
  j["rank"] = sys.rank;
  j["equations"] = sys.equations;
  nlohmann::ordered_json rhs;
  for (Symbol s : sys.state) {
    const auto& p = sys.of(s);
    auto [num, den] = p.as_fraction();
    nlohmann::json den_exp = nlohmann::json::object();
    for (const auto& [e, c] : den.terms())
      for (int i = 0; i < kSymbolCount; ++i)
        if (e[i] != 0) den_exp[symbol_name(static_cast<Symbol>(i))] = e[i];
    nlohmann::ordered_json entry;
    entry["expression"] = p.to_string();
    entry["numerator"] = poly_json(num);
    entry["denominator"] = den_exp;
    rhs[symbol_name(s)] = entry;
  }
  j["rhs"] = rhs;
  return j.dump(indent);
}

}  // namespace spin7
