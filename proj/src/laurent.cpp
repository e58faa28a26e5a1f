#include "spin7/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spin7/error.hpp"

namespace spin7 {

namespace {

constexpr const char* kNames[kSymbolCount] = {"a", "b", "c", "f", "a'", "b'", "c'", "f'", "cos", "sin"};

int idx(Symbol s) { return static_cast<int>(s); }

Exponents zero_exponents() {
  Exponents e;
  e.fill(0);
  return e;
}

}  // namespace

const char* symbol_name(Symbol s) { return kNames[idx(s)]; }

std::optional<Symbol> symbol_from_name(const std::string& name) {
  for (int i = 0; i < kSymbolCount; ++i)
    if (name == kNames[i]) return static_cast<Symbol>(i);
  return std::nullopt;
}

bool is_base(Symbol s) { return idx(s) < 4; }

Symbol derivative_of(Symbol base) {
  if (!is_base(base)) throw input_error(std::string("no derivative symbol for ") + symbol_name(base));
  return static_cast<Symbol>(idx(base) + 4);
}

Symbol base_of(Symbol derivative) {
  int i = idx(derivative);
  if (i < 4 || i > 7) throw input_error(std::string(symbol_name(derivative)) + " is not a derivative symbol");
  return static_cast<Symbol>(i - 4);
}

SymbolTable SymbolTable::make(std::vector<Symbol> base) {
  SymbolTable t;
  for (Symbol s : base) {
    if (!is_base(s)) throw input_error("symbol table base must be one of a,b,c,f");
    t.derivative.push_back(derivative_of(s));
  }
  t.base = std::move(base);
  return t;
}

bool SymbolTable::contains(Symbol s) const {
  return std::find(base.begin(), base.end(), s) != base.end() ||
         std::find(derivative.begin(), derivative.end(), s) != derivative.end();
}

double Assignment::get(Symbol s) const {
  if (!has(s)) throw input_error(std::string("no value assigned to ") + symbol_name(s));
  return values_[idx(s)];
}

LaurentPoly::LaurentPoly(const Rational& c) {
  if (c != 0) terms_.emplace(zero_exponents(), c);
}

Exponents LaurentPoly::unit_exponents() { return zero_exponents(); }

LaurentPoly LaurentPoly::symbol(Symbol s, int power) {
  Exponents e = zero_exponents();
  e[idx(s)] = static_cast<std::int16_t>(power);
  return monomial(Rational(1), e);
}

LaurentPoly LaurentPoly::monomial(const Rational& c, const Exponents& e) {
  for (int i = 4; i < kSymbolCount; ++i)
    if (e[i] < 0) throw input_error(std::string("negative exponent on ") + kNames[i]);
  LaurentPoly p;
  if (c != 0) p.terms_.emplace(e, c);
  return p;
}

void LaurentPoly::add_term(const Exponents& e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

bool LaurentPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == zero_exponents());
}

Rational LaurentPoly::constant_term() const {
  auto it = terms_.find(zero_exponents());
  return it == terms_.end() ? Rational(0) : it->second;
}

bool LaurentPoly::involves(Symbol s) const {
  for (const auto& [e, c] : terms_)
    if (e[idx(s)] != 0) return true;
  return false;
}

int LaurentPoly::max_degree(Symbol s) const {
  int m = 0;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (first || e[idx(s)] > m) m = e[idx(s)];
    first = false;
  }
  return m;
}

int LaurentPoly::min_degree(Symbol s) const {
  int m = 0;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (first || e[idx(s)] < m) m = e[idx(s)];
    first = false;
  }
  return m;
}

int LaurentPoly::homogeneous_degree(const std::vector<Symbol>& syms) const {
  std::optional<int> deg;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (Symbol s : syms) d += e[idx(s)];
    if (deg && *deg != d) throw input_error("polynomial is not homogeneous: " + to_string());
    deg = d;
  }
  if (!deg) throw input_error("zero polynomial has no degree");
  return *deg;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly r;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Exponents e;
      for (int i = 0; i < kSymbolCount; ++i) e[i] = static_cast<std::int16_t>(ea[i] + eb[i]);
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) { return *this = *this * o; }

LaurentPoly LaurentPoly::scaled(const Rational& c) const {
  if (c == 0) return {};
  LaurentPoly r = *this;
  for (auto& [e, v] : r.terms_) v *= c;
  return r;
}

LaurentPoly LaurentPoly::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  LaurentPoly result(1), base = *this;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n) base *= base;
  }
  return result;
}

LaurentPoly LaurentPoly::inverse() const {
  if (!is_monomial()) throw input_error("only monomials are invertible: " + to_string());
  const auto& [e, c] = *terms_.begin();
  Exponents inv;
  for (int i = 0; i < kSymbolCount; ++i) inv[i] = static_cast<std::int16_t>(-e[i]);
  return monomial(Rational(1) / c, inv);
}

std::optional<LaurentPoly> LaurentPoly::divide(const LaurentPoly& o) const {
  if (o.is_zero()) throw domain_error("division by the zero polynomial");
  if (is_zero()) return LaurentPoly();
  if (o.is_monomial()) return *this * o.inverse();
  // Shift both to polynomials without monomial factors, then divide by lex leading terms.
  auto shift = [](const LaurentPoly& p) {
    Exponents m;
    for (int i = 0; i < kSymbolCount; ++i) m[i] = static_cast<std::int16_t>(-p.min_degree(static_cast<Symbol>(i)));
    Exponents neg;
    for (int i = 0; i < kSymbolCount; ++i) neg[i] = static_cast<std::int16_t>(-m[i]);
    LaurentPoly shifted;
    for (const auto& [e, c] : p.terms_) {
      Exponents s;
      for (int i = 0; i < kSymbolCount; ++i) s[i] = static_cast<std::int16_t>(e[i] + m[i]);
      shifted.terms_.emplace(s, c);
    }
    return std::make_pair(shifted, m);
  };
  auto [num, mn] = shift(*this);
  auto [den, md] = shift(o);
  const auto& [lead_e, lead_c] = *den.terms_.rbegin();
  LaurentPoly quotient;
  LaurentPoly rem = num;
  while (!rem.is_zero()) {
    const auto& [re, rc] = *rem.terms_.rbegin();
    Exponents q;
    for (int i = 0; i < kSymbolCount; ++i) {
      q[i] = static_cast<std::int16_t>(re[i] - lead_e[i]);
      if (q[i] < 0) return std::nullopt;
    }
    LaurentPoly t;
    t.terms_.emplace(q, rc / lead_c);
    quotient += t;
    rem -= t * den;
  }
  // this = num * x^-mn, o = den * x^-md  =>  this / o = quotient * x^(md - mn)
  Exponents adj;
  for (int i = 0; i < kSymbolCount; ++i) adj[i] = static_cast<std::int16_t>(md[i] - mn[i]);
  LaurentPoly shift_mono;
  shift_mono.terms_.emplace(adj, Rational(1));
  return quotient * shift_mono;
}

LaurentPoly LaurentPoly::derivative(Symbol s) const {
  LaurentPoly r;
  for (const auto& [e, c] : terms_) {
    int k = e[idx(s)];
    if (k == 0) continue;
    Exponents d = e;
    d[idx(s)] = static_cast<std::int16_t>(k - 1);
    r.add_term(d, c * k);
  }
  return r;
}

LaurentPoly LaurentPoly::substitute(Symbol s, const LaurentPoly& value) const {
  std::map<int, LaurentPoly> powers;
  LaurentPoly r;
  for (const auto& [e, c] : terms_) {
    int k = e[idx(s)];
    Exponents rest = e;
    rest[idx(s)] = 0;
    LaurentPoly term;
    term.terms_.emplace(rest, c);
    if (k != 0) {
      auto it = powers.find(k);
      if (it == powers.end()) it = powers.emplace(k, value.pow(k)).first;
      term *= it->second;
    }
    r += term;
  }
  return r;
}

LaurentPoly LaurentPoly::flip_signs(const std::vector<Symbol>& flipped) const {
  LaurentPoly r = *this;
  for (auto& [e, c] : r.terms_) {
    int parity = 0;
    for (Symbol s : flipped) parity += e[idx(s)];
    if (parity % 2 != 0) c = -c;
  }
  return r;
}

LaurentPoly LaurentPoly::reduce_circle() const {
  const int si = idx(Symbol::Sin), ci = idx(Symbol::Cos);
  LaurentPoly r;
  for (const auto& [e, c] : terms_) {
    int k = e[si];
    if (k < 2) {
      r.add_term(e, c);
      continue;
    }
    // sin^k = sin^(k mod 2) * (1 - cos^2)^(k/2)
    Exponents base = e;
    base[si] = static_cast<std::int16_t>(k % 2);
    LaurentPoly one_minus = LaurentPoly(1) - symbol(Symbol::Cos, 2);
    LaurentPoly expanded = one_minus.pow(k / 2);
    for (const auto& [pe, pc] : expanded.terms_) {
      Exponents t = base;
      t[ci] = static_cast<std::int16_t>(t[ci] + pe[ci]);
      r.add_term(t, c * pc);
    }
  }
  return r;
}

double LaurentPoly::eval(const Assignment& a) const {
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double v = c.get_d();
    for (int i = 0; i < kSymbolCount; ++i) {
      if (e[i] == 0) continue;
      double x = a.get(static_cast<Symbol>(i));
      if (e[i] < 0 && x == 0.0)
        throw domain_error(std::string("zero value for ") + kNames[i] + " under a negative exponent");
      v *= std::pow(x, e[i]);
    }
    sum += v;
  }
  return sum;
}

Rational LaurentPoly::eval_exact(const std::function<Rational(Symbol)>& value) const {
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational v = c;
    for (int i = 0; i < kSymbolCount; ++i) {
      if (e[i] == 0) continue;
      Rational x = value(static_cast<Symbol>(i));
      if (e[i] < 0 && x == 0)
        throw domain_error(std::string("zero value for ") + kNames[i] + " under a negative exponent");
      Rational p = 1;
      for (int k = 0; k < std::abs(e[i]); ++k) p *= x;
      v = e[i] > 0 ? Rational(v * p) : Rational(v / p);
    }
    sum += v;
  }
  return sum;
}

Exponents denominator_exponents(const LaurentPoly& p) {
  Exponents d = zero_exponents();
  for (int i = 0; i < 4; ++i) d[i] = static_cast<std::int16_t>(std::max(0, -p.min_degree(static_cast<Symbol>(i))));
  return d;
}

std::pair<LaurentPoly, LaurentPoly> LaurentPoly::as_fraction() const {
  LaurentPoly den = monomial(Rational(1), denominator_exponents(*this));
  return {*this * den, den};
}

std::string exponents_to_string(const Exponents& e) {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < kSymbolCount; ++i) {
    if (e[i] == 0) continue;
    if (!first) os << '*';
    os << kNames[i];
    if (e[i] != 1) os << '^' << e[i];
    first = false;
  }
  return os.str();
}

std::string LaurentPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    std::string mono = exponents_to_string(e);
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (mono.empty()) {
      os << mag.get_str();
    } else {
      if (mag != 1) os << mag.get_str() << '*';
      os << mono;
    }
    first = false;
  }
  return os.str();
}

}  // namespace spin7
