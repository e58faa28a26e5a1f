#include "spin7/closed_form.hpp"

#include <cmath>
#include <sstream>

namespace spin7 {

RationalPolynomial RationalPolynomial::linear_factor(const Rational& root) { return {{-root, Rational(1)}}; }

RationalPolynomial RationalPolynomial::operator*(const RationalPolynomial& o) const {
  if (coeffs.empty() || o.coeffs.empty()) return {};
  RationalPolynomial r{std::vector<Rational>(coeffs.size() + o.coeffs.size() - 1, Rational(0))};
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    for (std::size_t j = 0; j < o.coeffs.size(); ++j) r.coeffs[i + j] += coeffs[i] * o.coeffs[j];
  return r;
}

RationalPolynomial RationalPolynomial::operator+(const RationalPolynomial& o) const {
  RationalPolynomial r{std::vector<Rational>(std::max(coeffs.size(), o.coeffs.size()), Rational(0))};
  for (std::size_t i = 0; i < coeffs.size(); ++i) r.coeffs[i] += coeffs[i];
  for (std::size_t i = 0; i < o.coeffs.size(); ++i) r.coeffs[i] += o.coeffs[i];
  return r;
}

RationalPolynomial RationalPolynomial::scaled(const Rational& c) const {
  RationalPolynomial r = *this;
  for (auto& x : r.coeffs) x *= c;
  return r;
}

RationalPolynomial RationalPolynomial::antiderivative() const {
  RationalPolynomial r{std::vector<Rational>(coeffs.size() + 1, Rational(0))};
  for (std::size_t i = 0; i < coeffs.size(); ++i) r.coeffs[i + 1] = coeffs[i] / Rational(static_cast<long>(i + 1));
  return r;
}

RationalPolynomial RationalPolynomial::derivative() const {
  if (coeffs.size() <= 1) return {{Rational(0)}};
  RationalPolynomial r{std::vector<Rational>(coeffs.size() - 1)};
  for (std::size_t i = 1; i < coeffs.size(); ++i) r.coeffs[i - 1] = coeffs[i] * Rational(static_cast<long>(i));
  return r;
}

Rational RationalPolynomial::operator()(const Rational& s) const {
  Rational acc = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * s + coeffs[i];
  return acc;
}

double RationalPolynomial::operator()(double s) const {
  double acc = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * s + to_double(coeffs[i]);
  return acc;
}

int RationalPolynomial::degree() const {
  for (std::size_t i = coeffs.size(); i-- > 0;)
    if (coeffs[i] != 0) return static_cast<int>(i);
  return -1;
}

std::string RationalPolynomial::to_string(const char* var) const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    if (coeffs[i] == 0) continue;
    Rational c = coeffs[i];
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    Rational m = abs(c);
    if (i == 0 || m != 1) os << spin7::to_string(m) << (i ? "*" : "");
    if (i) os << var << (i > 1 ? "^" + std::to_string(i) : "");
    first = false;
  }
  return first ? "0" : os.str();
}

Profile Profile::q(const Rational& a0, const Rational& b0, const Rational& c0, const Rational& f0) {
  Profile p;
  p.kind_ = ModelKind::Q;
  p.init_ = {a0, b0, c0, f0};
  p.den_ = RationalPolynomial::linear_factor(3 * a0 * a0) * RationalPolynomial::linear_factor(3 * b0 * b0) *
           RationalPolynomial::linear_factor(3 * c0 * c0);
  p.anti_ = p.den_.antiderivative();
  p.num_ = RationalPolynomial{{f0 * f0 * p.den_(Rational(0))}} + p.anti_.scaled(-6);
  for (int i = 0; i < 3; ++i) {
    p.rel_const_[i] = p.init_[i] * p.init_[i];
    p.rel_slope_[i] = make_rational(-1, 3);
  }
  return p;
}

Profile Profile::m(const Rational& a0, const Rational& b0, const Rational& c0) {
  Profile p;
  p.kind_ = ModelKind::M;
  p.init_ = {a0, b0, c0, Rational(0)};
  const Rational ra = -make_rational(4, 3) * a0 * a0;
  p.den_ = RationalPolynomial::linear_factor(-2 * b0 * b0) * RationalPolynomial::linear_factor(ra) *
           RationalPolynomial::linear_factor(ra);
  p.anti_ = p.den_.antiderivative();
  p.num_ = RationalPolynomial{{c0 * c0 * p.den_(Rational(0))}} + p.anti_.scaled(16);
  p.rel_const_ = {a0 * a0, b0 * b0, c0 * c0};
  p.rel_slope_ = {make_rational(3, 4), make_rational(1, 2), Rational(0)};
  return p;
}

Profile Profile::from_spec(const OrbitSpec& spec) {
  auto value = [&](Symbol s) {
    auto it = spec.initial.find(s);
    return it == spec.initial.end() ? Rational(0) : it->second;
  };
  if (spec.kind == ModelKind::Q) return q(value(Symbol::A), value(Symbol::B), value(Symbol::C), value(Symbol::F));
  return m(value(Symbol::A), value(Symbol::B), value(Symbol::C));
}

namespace {

// Divide p by (s - r); p(r) must vanish.
RationalPolynomial deflate(const RationalPolynomial& p, const Rational& r) {
  const std::size_t n = p.coeffs.size();
  if (n <= 1) return {{Rational(0)}};
  RationalPolynomial q{std::vector<Rational>(n - 1)};
  Rational carry = 0;
  for (std::size_t i = n; i-- > 1;) {
    carry = p.coeffs[i] + carry * r;
    q.coeffs[i - 1] = carry;
  }
  return q;
}

}  // namespace

Rational Profile::square(const Rational& s) const {
  RationalPolynomial n = num_, d = den_;
  // Removable singularities (a collapsing coefficient at s = 0) cancel against the numerator.
  while (d(s) == 0 && n(s) == 0 && d.degree() > 0) {
    n = deflate(n, s);
    d = deflate(d, s);
  }
  if (d(s) == 0) throw domain_error("closed form has a pole at s = " + to_string(s));
  return n(s) / d(s);
}

double Profile::square(double s) const {
  const double d = den_(s);
  if (d == 0.0) return to_double(square(exact_rational(s)));
  return num_(s) / d;
}

Rational Profile::square_derivative(const Rational& s) const {
  const Rational d = den_(s);
  if (d == 0) throw domain_error("closed form has a pole at s = " + to_string(s));
  return (num_.derivative()(s) * d - num_(s) * den_.derivative()(s)) / (d * d);
}

std::array<Rational, 3> Profile::metric_squares(const Rational& s) const {
  std::array<Rational, 3> r;
  for (int i = 0; i < 3; ++i) r[i] = rel_const_[i] + rel_slope_[i] * s;
  if (kind_ == ModelKind::M) r[2] = square(s);
  return r;
}

std::array<double, 3> Profile::metric_squares(double s) const {
  std::array<double, 3> r;
  for (int i = 0; i < 3; ++i) r[i] = to_double(rel_const_[i]) + to_double(rel_slope_[i]) * s;
  if (kind_ == ModelKind::M) r[2] = square(s);
  return r;
}

namespace {

double rel(double x, double y) {
  const double m = std::max(std::abs(x), std::abs(y));
  return m == 0.0 ? 0.0 : std::abs(x - y) / m;
}

}  // namespace

Deviation compare(const Trajectory& traj, const Profile& prof, double t_max) {
  if (traj.kind != prof.kind()) throw input_error("trajectory and profile belong to different models");
  if (traj.samples.empty()) throw input_error("empty trajectory");
  Deviation dev;
  const int circle = traj.index_of(prof.kind() == ModelKind::Q ? Symbol::F : Symbol::C);
  const int relations = prof.kind() == ModelKind::Q ? 3 : 2;
  for (const auto& st : traj.samples) {
    if (st.t > t_max) break;
    const double s = st.primitive;
    const double x = st.values[circle];
    dev.circle = std::max(dev.circle, rel(x * x, prof.square(s)));
    const auto sq = prof.metric_squares(s);
    for (int i = 0; i < relations; ++i) dev.relations = std::max(dev.relations, rel(st.values[i] * st.values[i], sq[i]));
    ++dev.samples;
  }
  return dev;
}

}  // namespace spin7
