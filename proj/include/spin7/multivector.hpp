#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "spin7/error.hpp"
#include "spin7/laurent.hpp"

namespace spin7 {

using Mask = std::uint32_t;

inline constexpr int kMaxGenerators = 12;

inline int grade(Mask m) { return std::popcount(m); }

inline std::vector<int> mask_indices(Mask m) {
  std::vector<int> out;
  for (int i = 0; m; ++i, m >>= 1)
    if (m & 1u) out.push_back(i);
  return out;
}

inline Mask mask_of(std::initializer_list<int> idx) {
  Mask m = 0;
  for (int i : idx) m |= Mask(1) << i;
  return m;
}

// Parity of the permutation sorting the concatenation (a, b) of two disjoint sorted subsets.
inline int merge_sign(Mask a, Mask b) {
  int inversions = 0;
  for (Mask rest = b; rest; rest &= rest - 1) {
    int j = std::countr_zero(rest);
    Mask above = j + 1 >= 32 ? 0 : (~Mask(0) << (j + 1));
    inversions += std::popcount(a & above);
  }
  return (inversions & 1) ? -1 : 1;
}

inline bool coeff_is_zero(const LaurentPoly& p) { return p.is_zero(); }
inline bool coeff_is_zero(double x) { return x == 0.0; }
inline bool coeff_is_zero(const Rational& x) { return x == 0; }

template <class Coeff>
Coeff coeff_from_rational(const Rational& q);
template <>
inline LaurentPoly coeff_from_rational<LaurentPoly>(const Rational& q) { return LaurentPoly(q); }
template <>
inline double coeff_from_rational<double>(const Rational& q) { return q.get_d(); }
template <>
inline Rational coeff_from_rational<Rational>(const Rational& q) { return q; }

// Sparse exterior form over n generators; generator `dt` (if >= 0) marks the time direction.
template <class Coeff>
class Multivector {
 public:
  using TermMap = std::map<Mask, Coeff>;

  Multivector() = default;
  explicit Multivector(int n, int dt = -1) : n_(n), dt_(dt) {
    if (n < 0 || n > kMaxGenerators) throw input_error("generator count out of range");
    if (dt >= n) throw input_error("dt index out of range");
  }

  static Multivector generator(int n, int i, int dt = -1) {
    Multivector m(n, dt);
    m.add(Mask(1) << i, coeff_from_rational<Coeff>(1));
    return m;
  }
  static Multivector basis(int n, Mask mask, Coeff c, int dt = -1) {
    Multivector m(n, dt);
    m.add(mask, std::move(c));
    return m;
  }
  static Multivector scalar(int n, Coeff c, int dt = -1) { return basis(n, 0, std::move(c), dt); }

  int size() const { return n_; }
  int dt_index() const { return dt_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  Coeff coefficient(Mask m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? coeff_from_rational<Coeff>(0) : it->second;
  }
  Coeff coefficient(std::initializer_list<int> idx) const { return coefficient(mask_of(idx)); }

  void add(Mask m, const Coeff& c) {
    if (m >> n_) throw input_error("subset outside generator range");
    if (coeff_is_zero(c)) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second = it->second + c;
      if (coeff_is_zero(it->second)) terms_.erase(it);
    }
  }

  void check_compatible(const Multivector& o) const {
    if (n_ != o.n_ || dt_ != o.dt_) throw input_error("multivectors over different generator sets");
  }

  Multivector& operator+=(const Multivector& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  Multivector& operator-=(const Multivector& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
  }
  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  Multivector operator-() const {
    Multivector r(n_, dt_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
  }
  friend bool operator==(const Multivector& a, const Multivector& b) {
    return a.n_ == b.n_ && a.dt_ == b.dt_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Multivector& a, const Multivector& b) { return !(a == b); }

  Multivector scaled(const Coeff& c) const {
    Multivector r(n_, dt_);
    for (const auto& [m, v] : terms_) r.add(m, v * c);
    return r;
  }

  template <class F>
  Multivector map_coefficients(F&& f) const {
    Multivector r(n_, dt_);
    for (const auto& [m, v] : terms_) r.add(m, f(v));
    return r;
  }

  Multivector grade_part(int k) const {
    Multivector r(n_, dt_);
    for (const auto& [m, v] : terms_)
      if (grade(m) == k) r.terms_.emplace(m, v);
    return r;
  }

  // Terms containing / not containing any generator of `mask`.
  Multivector touching(Mask mask) const {
    Multivector r(n_, dt_);
    for (const auto& [m, v] : terms_)
      if (m & mask) r.terms_.emplace(m, v);
    return r;
  }
  Multivector avoiding(Mask mask) const {
    Multivector r(n_, dt_);
    for (const auto& [m, v] : terms_)
      if (!(m & mask)) r.terms_.emplace(m, v);
    return r;
  }

  bool is_homogeneous(int* k = nullptr) const {
    int g = -1;
    for (const auto& [m, v] : terms_) {
      if (g >= 0 && grade(m) != g) return false;
      g = grade(m);
    }
    if (k) *k = g;
    return true;
  }

  std::string to_string(const std::vector<std::string>& names = {}) const;

 private:
  int n_ = 0;
  int dt_ = -1;
  TermMap terms_;
};

template <class Coeff>
Multivector<Coeff> wedge(const Multivector<Coeff>& u, const Multivector<Coeff>& v) {
  u.check_compatible(v);
  Multivector<Coeff> r(u.size(), u.dt_index());
  for (const auto& [a, ca] : u.terms())
    for (const auto& [b, cb] : v.terms()) {
      if (a & b) continue;
      Coeff c = ca * cb;
      r.add(a | b, merge_sign(a, b) < 0 ? Coeff(-c) : c);
    }
  return r;
}

template <class Coeff>
Multivector<Coeff> wedge_power(const Multivector<Coeff>& u, int k) {
  Multivector<Coeff> r = Multivector<Coeff>::scalar(u.size(), coeff_from_rational<Coeff>(1), u.dt_index());
  for (int i = 0; i < k; ++i) r = wedge(r, u);
  return r;
}

// Hodge star in an orthonormal coframe over all n generators.
template <class Coeff>
Multivector<Coeff> hodge_star(const Multivector<Coeff>& u, int orientation = 1) {
  if (orientation != 1 && orientation != -1) throw input_error("orientation must be +1 or -1");
  const int n = u.size();
  const Mask full = n == 32 ? ~Mask(0) : ((Mask(1) << n) - 1);
  Multivector<Coeff> r(n, u.dt_index());
  for (const auto& [m, c] : u.terms()) {
    Mask comp = full & ~m;
    int s = merge_sign(m, comp) * orientation;
    r.add(comp, s < 0 ? Coeff(-c) : c);
  }
  return r;
}

// Hodge star for the diagonal metric whose orthonormal coframe is scales[i] * e^i.
inline Multivector<LaurentPoly> metric_hodge_star(const Multivector<LaurentPoly>& u,
                                                  const std::vector<LaurentPoly>& scales, Mask support,
                                                  int orientation = 1) {
  if (static_cast<int>(scales.size()) != u.size()) throw input_error("one scale per generator required");
  Multivector<LaurentPoly> r(u.size(), u.dt_index());
  for (const auto& [m, c] : u.terms()) {
    if (m & ~support) throw input_error("form outside the metric support");
    Mask comp = support & ~m;
    LaurentPoly factor(merge_sign(m, comp) * orientation);
    for (int j : mask_indices(comp)) factor *= scales[j];
    for (int i : mask_indices(m)) factor *= scales[i].inverse();
    r.add(comp, c * factor);
  }
  return r;
}

template <class Coeff>
Multivector<Coeff> rescale_coframe(const Multivector<Coeff>& u, const std::vector<Coeff>& scales) {
  if (static_cast<int>(scales.size()) != u.size()) throw input_error("one scale per generator required");
  Multivector<Coeff> r(u.size(), u.dt_index());
  for (const auto& [m, c] : u.terms()) {
    Coeff v = c;
    for (int i : mask_indices(m)) v = v * scales[i];
    r.add(m, v);
  }
  return r;
}

inline Multivector<LaurentPoly> rescale_coframe(const Multivector<LaurentPoly>& u,
                                                const std::vector<LaurentPoly>& scales) {
  if (static_cast<int>(scales.size()) != u.size()) throw input_error("one scale per generator required");
  for (const auto& s : scales) {
    if (!s.is_monomial()) throw input_error("coframe scale must be a monomial: " + s.to_string());
    for (Symbol d : {Symbol::DA, Symbol::DB, Symbol::DC, Symbol::DF})
      if (s.involves(d)) throw input_error("coframe scale involves a derivative symbol");
  }
  Multivector<LaurentPoly> r(u.size(), u.dt_index());
  for (const auto& [m, c] : u.terms()) {
    LaurentPoly v = c;
    for (int i : mask_indices(m)) v *= scales[i];
    r.add(m, v);
  }
  return r;
}

// Pullback along a linear map: generator i of u is replaced by the 1-form images[i].
template <class Coeff>
Multivector<Coeff> pullback(const Multivector<Coeff>& u, const std::vector<Multivector<Coeff>>& images) {
  if (static_cast<int>(images.size()) != u.size()) throw input_error("one image per generator required");
  if (images.empty()) return u;
  const int n = images.front().size();
  const int dt = images.front().dt_index();
  for (const auto& im : images) {
    if (im.size() != n || im.dt_index() != dt) throw input_error("images over different generator sets");
    int k = 1;
    if (!im.is_zero() && (!im.is_homogeneous(&k) || k != 1)) throw input_error("pullback images must be 1-forms");
  }
  Multivector<Coeff> r(n, dt);
  for (const auto& [m, c] : u.terms()) {
    Multivector<Coeff> acc = Multivector<Coeff>::scalar(n, c, dt);
    for (int i : mask_indices(m)) acc = wedge(acc, images[i]);
    r += acc;
  }
  return r;
}

// Interior product with the dual vector of generator i.
template <class Coeff>
Multivector<Coeff> interior(const Multivector<Coeff>& u, int i) {
  Multivector<Coeff> r(u.size(), u.dt_index());
  const Mask bit = Mask(1) << i;
  for (const auto& [m, c] : u.terms()) {
    if (!(m & bit)) continue;
    int before = std::popcount(m & (bit - 1));
    r.add(m & ~bit, (before & 1) ? Coeff(-c) : c);
  }
  return r;
}

// Re-indexes generators: generator i of u becomes generator map[i] of an n-generator space.
template <class Coeff>
Multivector<Coeff> relabel(const Multivector<Coeff>& u, int n, const std::vector<int>& map, int dt = -1) {
  std::vector<Multivector<Coeff>> images;
  for (int j : map) images.push_back(Multivector<Coeff>::generator(n, j, dt));
  return pullback(u, images);
}

inline Multivector<double> eval_numeric(const Multivector<LaurentPoly>& u, const Assignment& a) {
  Multivector<double> r(u.size(), u.dt_index());
  for (const auto& [m, c] : u.terms()) r.add(m, c.eval(a));
  return r;
}

inline double eval_numeric(const LaurentPoly& p, const Assignment& a) { return p.eval(a); }

inline double max_abs(const Multivector<double>& u) {
  double m = 0.0;
  for (const auto& [k, c] : u.terms()) m = std::max(m, std::fabs(c));
  return m;
}

inline std::string subset_name(Mask m, int dt, const std::vector<std::string>& names) {
  std::ostringstream os;
  bool first = true;
  for (int i : mask_indices(m)) {
    if (!first) os << '^';
    if (!names.empty())
      os << names[i];
    else if (i == dt)
      os << "dt";
    else
      os << 'e' << (i + 1);
    first = false;
  }
  return first ? std::string("1") : os.str();
}

template <class Coeff>
std::string coeff_to_string(const Coeff& c) {
  if constexpr (std::is_same_v<Coeff, LaurentPoly>) {
    return c.to_string();
  } else if constexpr (std::is_same_v<Coeff, Rational>) {
    return c.get_str();
  } else {
    std::ostringstream os;
    os.precision(17);
    os << c;
    return os.str();
  }
}

template <class Coeff>
std::string Multivector<Coeff>::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  // Grade first, then lexicographic index order.
  std::vector<std::pair<Mask, const Coeff*>> order;
  for (const auto& [m, c] : terms_) order.emplace_back(m, &c);
  std::sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
    if (grade(x.first) != grade(y.first)) return grade(x.first) < grade(y.first);
    return mask_indices(x.first) < mask_indices(y.first);
  });
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : order) {
    if (!first) os << " + ";
    os << '(' << coeff_to_string(*c) << ") " << subset_name(m, dt_, names);
    first = false;
  }
  return os.str();
}

}  // namespace spin7
