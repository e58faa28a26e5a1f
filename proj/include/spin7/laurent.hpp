#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spin7/rational.hpp"

namespace spin7 {

// Metric coefficients, their formal t-derivatives, and the cosine/sine of a
// rotation angle. Only the base symbols may carry negative exponents.
enum class Symbol : std::uint8_t { A, B, C, F, DA, DB, DC, DF, Cos, Sin };

inline constexpr int kSymbolCount = 10;

const char* symbol_name(Symbol s);
std::optional<Symbol> symbol_from_name(const std::string& name);
bool is_base(Symbol s);
Symbol derivative_of(Symbol base);
Symbol base_of(Symbol derivative);

// Ordered base/derivative symbol lists of one model.
struct SymbolTable {
  std::vector<Symbol> base;
  std::vector<Symbol> derivative;

  static SymbolTable make(std::vector<Symbol> base);
  bool contains(Symbol s) const;
};

using Exponents = std::array<std::int16_t, kSymbolCount>;

// Partial assignment of numeric values to symbols.
class Assignment {
 public:
  Assignment() { has_.fill(false); }
  Assignment& set(Symbol s, double v) {
    values_[static_cast<int>(s)] = v;
    has_[static_cast<int>(s)] = true;
    return *this;
  }
  bool has(Symbol s) const { return has_[static_cast<int>(s)]; }
  double get(Symbol s) const;

 private:
  std::array<double, kSymbolCount> values_{};
  std::array<bool, kSymbolCount> has_{};
};

class LaurentPoly {
 public:
  using TermMap = std::map<Exponents, Rational>;

  LaurentPoly() = default;
  LaurentPoly(const Rational& c);  // NOLINT: constants convert implicitly
  LaurentPoly(long c) : LaurentPoly(Rational(c)) {}  // NOLINT
  LaurentPoly(int c) : LaurentPoly(Rational(c)) {}   // NOLINT

  static LaurentPoly symbol(Symbol s, int power = 1);
  static LaurentPoly monomial(const Rational& c, const Exponents& e);
  static Exponents unit_exponents();

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_monomial() const { return terms_.size() == 1; }
  std::size_t size() const { return terms_.size(); }
  Rational constant_term() const;
  bool involves(Symbol s) const;
  int max_degree(Symbol s) const;
  int min_degree(Symbol s) const;
  // Total degree in the listed symbols; throws unless every term agrees.
  int homogeneous_degree(const std::vector<Symbol>& syms) const;

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(const LaurentPoly& o);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

  LaurentPoly scaled(const Rational& c) const;
  // Non-negative powers always; negative powers only for monomials.
  LaurentPoly pow(int n) const;
  // Inverse of a monomial in base symbols.
  LaurentPoly inverse() const;
  // Exact quotient if o divides this in the Laurent ring, otherwise nullopt.
  std::optional<LaurentPoly> divide(const LaurentPoly& o) const;

  LaurentPoly derivative(Symbol s) const;
  LaurentPoly substitute(Symbol s, const LaurentPoly& value) const;
  // x_s -> sigma_s * x_s for every symbol with sigma_s = -1.
  LaurentPoly flip_signs(const std::vector<Symbol>& flipped) const;
  // Rewrites modulo cos^2 + sin^2 = 1 (sin degree reduced below 2).
  LaurentPoly reduce_circle() const;

  double eval(const Assignment& a) const;
  Rational eval_exact(const std::function<Rational(Symbol)>& value) const;

  // Splits into numerator (polynomial in base symbols) and monomial denominator.
  std::pair<LaurentPoly, LaurentPoly> as_fraction() const;

  std::string to_string() const;

 private:
  void add_term(const Exponents& e, const Rational& c);
  TermMap terms_;
};

std::string exponents_to_string(const Exponents& e);
// Monomial denominator exponent vector: the negated minimum per base symbol.
Exponents denominator_exponents(const LaurentPoly& p);

}  // namespace spin7
