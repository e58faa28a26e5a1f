#include "spin7/rational.hpp"

#include <cctype>
#include <cmath>

#include "spin7/error.hpp"

namespace spin7 {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

mpz_class pow10(long n) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(n));
  return r;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw input_error("empty number");
  bool negative = false;
  std::size_t pos = 0;
  if (s[0] == '+' || s[0] == '-') {
    negative = s[0] == '-';
    pos = 1;
  }
  std::string body = s.substr(pos);
  Rational value;
  if (auto slash = body.find('/'); slash != std::string::npos) {
    std::string num = body.substr(0, slash), den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw input_error("malformed fraction: " + text);
    mpz_class d(den);
    if (d == 0) throw input_error("zero denominator: " + text);
    value = Rational(mpz_class(num), d);
    value.canonicalize();
  } else {
    long exponent = 0;
    if (auto e = body.find_first_of("eE"); e != std::string::npos) {
      std::string ex = body.substr(e + 1);
      body = body.substr(0, e);
      bool eneg = false;
      if (!ex.empty() && (ex[0] == '+' || ex[0] == '-')) {
        eneg = ex[0] == '-';
        ex = ex.substr(1);
      }
      if (!all_digits(ex) || ex.size() > 6) throw input_error("malformed exponent: " + text);
      exponent = std::stol(ex) * (eneg ? -1 : 1);
    }
    std::string ip = body, fp;
    if (auto dot = body.find('.'); dot != std::string::npos) {
      ip = body.substr(0, dot);
      fp = body.substr(dot + 1);
    }
    if (ip.empty() && fp.empty()) throw input_error("malformed number: " + text);
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
      throw input_error("malformed number: " + text);
    mpz_class digits((ip.empty() ? std::string("0") : ip) + fp);
    exponent -= static_cast<long>(fp.size());
    if (exponent >= 0) {
      value = Rational(digits * pow10(exponent));
    } else {
      value = Rational(digits, pow10(-exponent));
      value.canonicalize();
    }
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw input_error("non-finite value");
  mpq_class q;
  mpq_set_d(q.get_mpq_t(), x);
  return q;
}

Rational rationalize(double x, long max_den) {
  if (!std::isfinite(x)) throw input_error("non-finite value");
  // Continued-fraction convergents p/q.
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(r);
    if (std::fabs(a) > 1e15) break;
    long ai = static_cast<long>(a);
    long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double frac = r - a;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  if (q1 == 0) return Rational(static_cast<long>(std::floor(x)));
  Rational out(p1, q1);
  out.canonicalize();
  return out;
}

int sign(const Rational& q) { return sgn(q); }

}  // namespace spin7
