#include "spin7/integrate.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

namespace spin7 {

std::string orbit_name(Orbit o) {
  switch (o) {
    case Orbit::Principal: return "principal";
    case Orbit::S2xS2xS2: return "s2xs2xs2";
    case Orbit::S2xS2: return "s2xs2";
    case Orbit::CP2xS2: return "cp2xs2";
    case Orbit::CP2: return "cp2";
    case Orbit::S2: return "s2";
  }
  return "?";
}

Orbit parse_orbit(const std::string& name) {
  std::string n;
  for (char ch : name) {
    if (ch == '_' || ch == '-' || ch == ' ') continue;
    n += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  for (Orbit o : {Orbit::Principal, Orbit::S2xS2xS2, Orbit::S2xS2, Orbit::CP2xS2, Orbit::CP2, Orbit::S2}) {
    if (orbit_name(o) == n) return o;
  }
  throw input_error("unknown orbit '" + name + "'");
}

std::vector<Symbol> collapsing_symbols(ModelKind kind, Orbit orbit) {
  if (orbit == Orbit::Principal) return {};
  if (kind == ModelKind::Q) {
    if (orbit == Orbit::S2xS2xS2) return {Symbol::F};
    if (orbit == Orbit::S2xS2) return {Symbol::A, Symbol::F};
  } else {
    if (orbit == Orbit::CP2xS2) return {Symbol::C};
    if (orbit == Orbit::CP2) return {Symbol::B, Symbol::C};
    if (orbit == Orbit::S2) return {Symbol::A, Symbol::C};
  }
  throw input_error("orbit " + orbit_name(orbit) + " is not a singular orbit of model " +
                    (kind == ModelKind::Q ? "Q" : "M"));
}

Symbol primitive_symbol(ModelKind kind) { return kind == ModelKind::Q ? Symbol::F : Symbol::C; }

namespace {

std::vector<Symbol> state_symbols(ModelKind kind) {
  if (kind == ModelKind::Q) return {Symbol::A, Symbol::B, Symbol::C, Symbol::F};
  return {Symbol::A, Symbol::B, Symbol::C};
}

bool contains(const std::vector<Symbol>& v, Symbol s) { return std::find(v.begin(), v.end(), s) != v.end(); }

}  // namespace

OrbitSpec OrbitSpec::make(ModelKind kind, Orbit orbit, std::map<Symbol, Rational> initial, bool negative_branch) {
  auto collapsing = collapsing_symbols(kind, orbit);
  auto all = state_symbols(kind);
  for (const auto& [s, v] : initial) {
    if (!contains(all, s)) throw input_error(std::string("coefficient ") + symbol_name(s) + " does not belong to the model");
    if (contains(collapsing, s)) {
      if (v != 0) {
        throw input_error(std::string("coefficient ") + symbol_name(s) + " collapses on orbit " + orbit_name(orbit) +
                          " and must be zero");
      }
    }
  }
  std::map<Symbol, Rational> kept;
  for (Symbol s : all) {
    if (contains(collapsing, s)) continue;
    auto it = initial.find(s);
    if (it == initial.end()) throw input_error(std::string("missing initial value for ") + symbol_name(s));
    if (it->second == 0) throw input_error(std::string("initial value of ") + symbol_name(s) + " must be nonzero");
    kept.emplace(s, it->second);
  }
  OrbitSpec spec;
  spec.kind = kind;
  spec.orbit = orbit;
  spec.initial = std::move(kept);
  spec.negative_branch = negative_branch;
  return spec;
}

void IntegratorConfig::validate() const {
  if (!(rtol > 0) || !(atol > 0)) throw input_error("tolerances must be positive");
  if (!(initial_step >= 0)) throw input_error("initial step must be nonnegative");
  if (!(max_step > 0)) throw input_error("max step must be positive");
  if (!(eps >= 0)) throw input_error("series offset must be nonnegative");
  if (!std::isfinite(t_end)) throw input_error("t_end must be finite");
  if (max_steps <= 0) throw input_error("max steps must be positive");
}

double default_eps(const OrbitSpec& spec) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& [s, v] : spec.initial) m = std::min(m, std::abs(to_double(v)));
  if (!std::isfinite(m)) m = 1.0;
  return 1e-6 * m;
}

namespace {

using Vec = std::vector<double>;

// Dense Newton solve of G(x) = 0 for a small square system.
std::optional<Vec> newton(const std::vector<LaurentPoly>& eqs, const std::vector<std::vector<LaurentPoly>>& jac,
                          const std::vector<Symbol>& unknowns, Vec x) {
  const std::size_t n = unknowns.size();
  for (int iter = 0; iter < 100; ++iter) {
    Assignment a;
    for (std::size_t i = 0; i < n; ++i) a.set(unknowns[i], x[i]);
    Vec g(n);
    std::vector<Vec> J(n, Vec(n));
    try {
      for (std::size_t i = 0; i < n; ++i) {
        g[i] = eqs[i].eval(a);
        for (std::size_t j = 0; j < n; ++j) J[i][j] = jac[i][j].eval(a);
      }
    } catch (const Error&) {
      return std::nullopt;
    }
    double gn = 0;
    for (double v : g) gn = std::max(gn, std::abs(v));
    if (!std::isfinite(gn)) return std::nullopt;
    if (gn < 1e-14) return x;
    // Gaussian elimination with partial pivoting.
    Vec rhs = g;
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t p = c;
      for (std::size_t r = c + 1; r < n; ++r)
        if (std::abs(J[r][c]) > std::abs(J[p][c])) p = r;
      if (std::abs(J[p][c]) < 1e-300) return std::nullopt;
      std::swap(J[p], J[c]);
      std::swap(rhs[p], rhs[c]);
      for (std::size_t r = c + 1; r < n; ++r) {
        double f = J[r][c] / J[c][c];
        for (std::size_t k = c; k < n; ++k) J[r][k] -= f * J[c][k];
        rhs[r] -= f * rhs[c];
      }
    }
    Vec dx(n);
    for (std::size_t i = n; i-- > 0;) {
      double s = rhs[i];
      for (std::size_t k = i + 1; k < n; ++k) s -= J[i][k] * dx[k];
      dx[i] = s / J[i][i];
    }
    for (std::size_t i = 0; i < n; ++i) x[i] -= dx[i];
  }
  return std::nullopt;
}

}  // namespace

SeriesStart series_start(const ODESystem& sys, const OrbitSpec& spec, const IntegratorConfig& cfg) {
  if (sys.kind != spec.kind) throw input_error("orbit spec and ODE system belong to different models");
  const auto collapsing = collapsing_symbols(spec.kind, spec.orbit);
  if (collapsing.empty()) throw input_error("series start needs a singular orbit");
  cfg.validate();

  // Substitute x = x1 t for collapsing x and x = x0 for surviving x; group each rhs by the power of t.
  std::map<Symbol, std::map<int, LaurentPoly>> graded;
  for (Symbol s : sys.state) {
    auto& by_power = graded[s];
    for (const auto& [e, c] : sys.of(s).terms()) {
      int p = 0;
      Rational coeff = c;
      Exponents rest = LaurentPoly::unit_exponents();
      for (int k = 0; k < kSymbolCount; ++k) {
        if (e[k] == 0) continue;
        Symbol sym = static_cast<Symbol>(k);
        if (contains(collapsing, sym)) {
          p += e[k];
          rest[k] = e[k];
        } else {
          auto it = spec.initial.find(sym);
          if (it == spec.initial.end()) throw internal_error("series start: unassigned surviving coefficient");
          Rational v = 1;
          Rational base = e[k] > 0 ? it->second : Rational(1) / it->second;
          for (int j = 0; j < std::abs(e[k]); ++j) v *= base;
          coeff *= v;
        }
      }
      by_power[p] += LaurentPoly::monomial(coeff, rest);
    }
  }

  // Square system: for collapsing x, x1 = (t^0 part of rhs).
  std::vector<LaurentPoly> eqs;
  for (Symbol s : collapsing) eqs.push_back(graded[s][0] - LaurentPoly::symbol(s));
  // Consistency: every negative power must cancel at the solution.
  std::vector<LaurentPoly> side;
  for (Symbol s : sys.state)
    for (const auto& [p, poly] : graded[s])
      if (p < 0 && !poly.is_zero()) side.push_back(poly);

  std::vector<std::vector<LaurentPoly>> jac;
  for (const auto& g : eqs) {
    std::vector<LaurentPoly> row;
    for (Symbol u : collapsing) row.push_back(g.derivative(u));
    jac.push_back(std::move(row));
  }

  // Multi-start Newton, then rationalize and verify every equation exactly.
  const std::array<double, 8> seeds = {0.3, -0.3, 1.1, -1.1, 3.7, -3.7, 13.0, -13.0};
  const std::size_t n = collapsing.size();
  std::vector<std::vector<Rational>> roots;
  std::size_t combos = 1;
  for (std::size_t i = 0; i < n; ++i) combos *= seeds.size();
  for (std::size_t idx = 0; idx < combos; ++idx) {
    Vec x0(n);
    std::size_t r = idx;
    for (std::size_t i = 0; i < n; ++i) {
      x0[i] = seeds[r % seeds.size()];
      r /= seeds.size();
    }
    auto sol = newton(eqs, jac, collapsing, x0);
    if (!sol) continue;
    std::vector<Rational> q(n);
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs((*sol)[i]) < 1e-9) ok = false;
      q[i] = rationalize((*sol)[i], 1000000);
    }
    if (!ok) continue;
    auto value = [&](Symbol s) -> Rational {
      for (std::size_t i = 0; i < n; ++i)
        if (collapsing[i] == s) return q[i];
      throw internal_error("series start: unexpected symbol");
    };
    try {
      for (const auto& g : eqs)
        if (g.eval_exact(value) != 0) ok = false;
      for (const auto& g : side)
        if (g.eval_exact(value) != 0) ok = false;
    } catch (const Error&) {
      ok = false;
    }
    if (ok && std::find(roots.begin(), roots.end(), q) == roots.end()) roots.push_back(q);
  }
  if (roots.empty()) {
    throw input_error("no nonzero rational solution of the limiting-derivative system for orbit " + orbit_name(spec.orbit));
  }

  // Tie-break on the first coordinate whose sign differs among the roots.
  for (std::size_t i = 0; i < n && roots.size() > 1; ++i) {
    bool has_pos = false, has_neg = false;
    for (const auto& r : roots) (sign(r[i]) > 0 ? has_pos : has_neg) = true;
    if (!(has_pos && has_neg)) continue;
    int want = spec.negative_branch ? -1 : 1;
    std::erase_if(roots, [&](const std::vector<Rational>& r) { return sign(r[i]) != want; });
  }
  if (roots.size() != 1) throw input_error("limiting-derivative system has several solutions of the same sign pattern");
  const auto& root = roots.front();

  SeriesStart out;
  for (std::size_t i = 0; i < n; ++i) out.slopes[collapsing[i]] = root[i];
  auto value = [&](Symbol s) -> Rational { return out.slopes.at(s); };
  for (Symbol s : sys.state) {
    if (contains(collapsing, s)) continue;
    auto it = graded[s].find(0);
    out.surviving_rates[s] = it == graded[s].end() ? Rational(0) : it->second.eval_exact(value);
  }

  const double eps = cfg.eps > 0 ? cfg.eps : default_eps(spec);
  out.eps = eps;
  out.state.t = eps;
  const Symbol prim = primitive_symbol(spec.kind);
  for (Symbol s : sys.state) {
    double v;
    if (contains(collapsing, s)) {
      v = to_double(out.slopes.at(s)) * eps;
    } else {
      v = to_double(spec.initial.at(s)) + to_double(out.surviving_rates.at(s)) * eps;
    }
    out.state.values.push_back(v);
    if (s == prim) {
      out.state.primitive = contains(collapsing, s)
                                ? 0.5 * to_double(out.slopes.at(s)) * eps * eps
                                : to_double(spec.initial.at(s)) * eps + 0.5 * to_double(out.surviving_rates.at(s)) * eps * eps;
    }
  }
  return out;
}

State initial_state(const ODESystem& sys, const OrbitSpec& spec, const IntegratorConfig& cfg) {
  if (spec.orbit != Orbit::Principal) return series_start(sys, spec, cfg).state;
  if (sys.kind != spec.kind) throw input_error("orbit spec and ODE system belong to different models");
  State s;
  s.t = 0.0;
  for (Symbol sym : sys.state) s.values.push_back(to_double(spec.initial.at(sym)));
  s.primitive = 0.0;
  return s;
}

NumericSystem::NumericSystem(const ODESystem& sys) {
  std::map<Symbol, int> index;
  for (std::size_t i = 0; i < sys.state.size(); ++i) index[sys.state[i]] = static_cast<int>(i);
  primitive_index_ = index.at(primitive_symbol(sys.kind));
  for (Symbol s : sys.state) {
    std::vector<Term> row;
    for (const auto& [e, c] : sys.of(s).terms()) {
      Term t{to_double(c), {}};
      for (int k = 0; k < kSymbolCount; ++k) {
        if (e[k] == 0) continue;
        auto it = index.find(static_cast<Symbol>(k));
        if (it == index.end()) throw internal_error("ODE right-hand side involves a non-state symbol");
        t.powers.emplace_back(it->second, e[k]);
      }
      row.push_back(std::move(t));
    }
    rows_.push_back(std::move(row));
  }
}

void NumericSystem::eval(const double* y, double* out) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    double acc = 0.0;
    for (const auto& term : rows_[i]) {
      double v = term.coeff;
      for (const auto& [k, p] : term.powers) {
        double base = p > 0 ? y[k] : 1.0 / y[k];
        for (int j = 0; j < std::abs(p); ++j) v *= base;
      }
      acc += v;
    }
    out[i] = acc;
  }
  out[rows_.size()] = y[primitive_index_];
}

std::string stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::Completed: return "completed";
    case StopReason::ZeroCrossing: return "zero-crossing";
    case StopReason::BlowUp: return "blow-up";
    case StopReason::MaxSteps: return "max-steps";
  }
  return "?";
}

int Trajectory::index_of(Symbol s) const {
  for (std::size_t i = 0; i < symbols.size(); ++i)
    if (symbols[i] == s) return static_cast<int>(i);
  throw input_error(std::string("trajectory has no coefficient ") + symbol_name(s));
}

std::vector<double> Trajectory::at(double t) const {
  if (samples.empty()) throw input_error("empty trajectory");
  if (t < t_begin() || t > t_end()) throw domain_error("time outside the trajectory span");
  const std::size_t w = width();
  if (!segments.empty()) {
    auto it = std::upper_bound(segments.begin(), segments.end(), t,
                               [](double x, const DenseSegment& s) { return x < s.t0; });
    const DenseSegment& seg = it == segments.begin() ? segments.front() : *std::prev(it);
    const double th = (t - seg.t0) / seg.h, th1 = 1.0 - th;
    std::vector<double> y(w);
    for (std::size_t i = 0; i < w; ++i)
      y[i] = seg.r1[i] + th * (seg.r2[i] + th1 * (seg.r3[i] + th * (seg.r4[i] + th1 * seg.r5[i])));
    return y;
  }
  // Degree-5 Lagrange interpolation through the nearest six samples.
  const std::size_t n = samples.size();
  auto it = std::lower_bound(samples.begin(), samples.end(), t, [](const State& s, double x) { return s.t < x; });
  std::size_t centre = static_cast<std::size_t>(it - samples.begin());
  const std::size_t k = std::min<std::size_t>(6, n);
  std::size_t lo = centre >= k / 2 ? centre - k / 2 : 0;
  if (lo + k > n) lo = n - k;
  std::vector<double> y(w, 0.0);
  for (std::size_t j = lo; j < lo + k; ++j) {
    double L = 1.0;
    for (std::size_t m = lo; m < lo + k; ++m)
      if (m != j) L *= (t - samples[m].t) / (samples[j].t - samples[m].t);
    for (std::size_t i = 0; i + 1 < w; ++i) y[i] += L * samples[j].values[i];
    y[w - 1] += L * samples[j].primitive;
  }
  return y;
}

std::vector<double> Trajectory::offset(std::size_t node, double dt) const {
  if (node >= samples.size()) throw input_error("sample index out of range");
  const std::size_t w = width();
  std::vector<double> d(w, 0.0);
  if (dt == 0.0) return d;
  const double t = samples[node].t + dt;
  if (t < t_begin() || t > t_end()) throw domain_error("time outside the trajectory span");
  if (!segments.empty() && segments.size() + 1 == samples.size()) {
    // Segment k joins samples k and k + 1.
    const bool left = dt < 0;
    if ((left && node == 0) || (!left && node + 1 >= samples.size())) throw domain_error("offset leaves the trajectory");
    const DenseSegment& seg = segments[left ? node - 1 : node];
    if (std::abs(dt) > seg.h) throw domain_error("offset reaches beyond the neighbouring step");
    const double th = (t - seg.t0) / seg.h, th1 = 1.0 - th;
    for (std::size_t i = 0; i < w; ++i) {
      double inc = th * (seg.r2[i] + th1 * (seg.r3[i] + th * (seg.r4[i] + th1 * seg.r5[i])));
      d[i] = left ? inc - seg.r2[i] : inc;
    }
    return d;
  }
  // Lagrange interpolation of the differences to the node over the nearest six samples.
  const std::size_t n = samples.size();
  const std::size_t k = std::min<std::size_t>(6, n);
  std::size_t lo = node >= k / 2 ? node - k / 2 : 0;
  if (dt > 0 && lo + k / 2 < node + 1 && lo + k < n) ++lo;
  if (lo + k > n) lo = n - k;
  auto row = [&](std::size_t j, std::size_t i) { return i + 1 < w ? samples[j].values[i] : samples[j].primitive; };
  for (std::size_t j = lo; j < lo + k; ++j) {
    if (j == node) continue;
    double L = 1.0;
    for (std::size_t m = lo; m < lo + k; ++m)
      if (m != j) L *= (t - samples[m].t) / (samples[j].t - samples[m].t);
    for (std::size_t i = 0; i < w; ++i) d[i] += L * (row(j, i) - row(node, i));
  }
  return d;
}

namespace {

// Dormand-Prince 5(4) tableau with the dense-output coefficients of Hairer's DOPRI5.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

State to_state(double t, const Vec& y) {
  State s;
  s.t = t;
  s.values.assign(y.begin(), y.end() - 1);
  s.primitive = y.back();
  return s;
}

}  // namespace

Trajectory integrate(const ODESystem& sys, const State& start, const IntegratorConfig& cfg) {
  cfg.validate();
  if (start.values.size() != sys.state.size()) throw input_error("start state does not match the ODE system");
  for (double v : start.values)
    if (!(std::isfinite(v)) || v == 0.0) throw input_error("start state must have finite nonzero coefficients");
  if (!(cfg.t_end > start.t)) throw input_error("t_end must exceed the start time");

  const NumericSystem rhs(sys);
  const std::size_t w = rhs.size() + 1;
  Trajectory traj;
  traj.kind = sys.kind;
  traj.symbols = sys.state;
  traj.t_requested = cfg.t_end;
  traj.samples.push_back(start);

  Vec y(w), y1(w), ytmp(w), err(w);
  std::array<Vec, 7> k;
  for (auto& v : k) v.assign(w, 0.0);
  std::copy(start.values.begin(), start.values.end(), y.begin());
  y.back() = start.primitive;
  double t = start.t;
  rhs.eval(y.data(), k[0].data());
  ++traj.stats.evaluations;

  auto scale = [&](double a, double b) { return cfg.atol + cfg.rtol * std::max(std::abs(a), std::abs(b)); };

  double h = cfg.initial_step;
  if (h <= 0) {
    // Hairer's starting-step heuristic.
    double dnf = 0, dny = 0;
    for (std::size_t i = 0; i < w; ++i) {
      double sk = scale(y[i], y[i]);
      dnf += (k[0][i] / sk) * (k[0][i] / sk);
      dny += (y[i] / sk) * (y[i] / sk);
    }
    h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min({h, cfg.max_step, cfg.t_end - t});
    for (std::size_t i = 0; i < w; ++i) ytmp[i] = y[i] + h * k[0][i];
    rhs.eval(ytmp.data(), k[1].data());
    ++traj.stats.evaluations;
    double der2 = 0;
    for (std::size_t i = 0; i < w; ++i) {
      double v = (k[1][i] - k[0][i]) / scale(y[i], y[i]);
      der2 += v * v;
    }
    der2 = std::sqrt(der2 / w) / h;
    double der12 = std::max(std::abs(der2), std::sqrt(dnf / w));
    double h1 = der12 <= 1e-15 ? std::max(1e-6, std::abs(h) * 1e-3) : std::pow(0.01 / der12, 1.0 / 5);
    h = std::min({100 * h, h1, cfg.max_step, cfg.t_end - t});
  }

  bool last_rejected = false;
  const std::size_t n = w - 1;
  while (t < cfg.t_end) {
    if (traj.stats.steps + traj.stats.rejected >= cfg.max_steps) {
      traj.stop = StopReason::MaxSteps;
      break;
    }
    if (h < 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      throw IntegrationError("step-size underflow at t = " + std::to_string(t), to_state(t, y));
    }
    bool final_step = false;
    if (t + h >= cfg.t_end) {
      h = cfg.t_end - t;
      final_step = true;
    }
    auto stage = [&](Vec& out, std::initializer_list<std::pair<int, double>> coeffs) {
      for (std::size_t i = 0; i < w; ++i) {
        double s = 0;
        for (auto [j, a] : coeffs) s += a * k[j][i];
        ytmp[i] = y[i] + h * s;
      }
      rhs.eval(ytmp.data(), out.data());
    };
    stage(k[1], {{0, a21}});
    stage(k[2], {{0, a31}, {1, a32}});
    stage(k[3], {{0, a41}, {1, a42}, {2, a43}});
    stage(k[4], {{0, a51}, {1, a52}, {2, a53}, {3, a54}});
    stage(k[5], {{0, a61}, {1, a62}, {2, a63}, {3, a64}, {4, a65}});
    for (std::size_t i = 0; i < w; ++i)
      y1[i] = y[i] + h * (a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] + a75 * k[4][i] + a76 * k[5][i]);
    rhs.eval(y1.data(), k[6].data());
    traj.stats.evaluations += 6;

    double errn = 0;
    bool finite = true;
    for (std::size_t i = 0; i < w; ++i) {
      if (!std::isfinite(y1[i]) || !std::isfinite(k[6][i])) finite = false;
      double e = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] + e7 * k[6][i]);
      double v = e / scale(y[i], y1[i]);
      errn += v * v;
    }
    errn = finite ? std::sqrt(errn / w) : std::numeric_limits<double>::infinity();

    if (!(errn <= 1.0)) {
      ++traj.stats.rejected;
      double fac = std::isfinite(errn) ? std::max(0.2, 0.9 * std::pow(errn, -0.2)) : 0.2;
      h *= std::min(1.0, fac);
      last_rejected = true;
      continue;
    }

    // Zero crossing of a coefficient: report and stop before it.
    bool crossed = false;
    for (std::size_t i = 0; i < n; ++i)
      if (y1[i] == 0.0 || (y1[i] > 0) != (y[i] > 0)) crossed = true;
    if (crossed) {
      traj.stop = StopReason::ZeroCrossing;
      break;
    }
    bool huge = false;
    for (std::size_t i = 0; i < w; ++i)
      if (std::abs(y1[i]) > 1e150) huge = true;
    if (huge) {
      traj.stop = StopReason::BlowUp;
      break;
    }

    DenseSegment seg;
    seg.t0 = t;
    seg.h = h;
    seg.r1 = y;
    seg.r2.resize(w);
    seg.r3.resize(w);
    seg.r4.resize(w);
    seg.r5.resize(w);
    for (std::size_t i = 0; i < w; ++i) {
      double ydiff = y1[i] - y[i];
      double bspl = h * k[0][i] - ydiff;
      seg.r2[i] = ydiff;
      seg.r3[i] = bspl;
      seg.r4[i] = ydiff - h * k[6][i] - bspl;
      seg.r5[i] = h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] + d5 * k[4][i] + d6 * k[5][i] + d7 * k[6][i]);
    }
    traj.segments.push_back(std::move(seg));

    t = final_step ? cfg.t_end : t + h;
    y = y1;
    k[0] = k[6];
    ++traj.stats.steps;
    traj.stats.max_error = std::max(traj.stats.max_error, errn);
    traj.samples.push_back(to_state(t, y));

    double fac = std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(errn, 1e-300), -0.2)));
    if (last_rejected) fac = std::min(1.0, fac);
    last_rejected = false;
    h = std::min(h * fac, cfg.max_step);
  }
  return traj;
}

Trajectory solve(const ODESystem& sys, const OrbitSpec& spec, const IntegratorConfig& cfg) {
  return integrate(sys, initial_state(sys, spec, cfg), cfg);
}

std::string csv_header(ModelKind kind) { return kind == ModelKind::Q ? "t,a,b,c,f,F" : "t,a,b,c,C"; }

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void write_csv(const Trajectory& traj, std::ostream& out) {
  out << csv_header(traj.kind) << '\n';
  for (const auto& s : traj.samples) {
    out << fmt17(s.t);
    for (double v : s.values) out << ',' << fmt17(v);
    out << ',' << fmt17(s.primitive) << '\n';
  }
}

Trajectory read_csv(std::istream& in, ModelKind kind) {
  std::string line;
  if (!std::getline(in, line)) throw input_error("empty trajectory file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != csv_header(kind)) {
    throw input_error("trajectory header '" + line + "' does not match '" + csv_header(kind) + "'");
  }
  Trajectory traj;
  traj.kind = kind;
  traj.symbols = state_symbols(kind);
  const std::size_t cols = traj.symbols.size() + 2;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      double v = 0;
      const char* b = line.data() + pos;
      const char* e = line.data() + comma;
      auto [ptr, ec] = std::from_chars(b, e, v);
      if (ec != std::errc() || ptr != e || !std::isfinite(v)) {
        throw input_error("bad number on line " + std::to_string(lineno));
      }
      row.push_back(v);
      pos = comma + 1;
    }
    if (row.size() != cols) throw input_error("wrong column count on line " + std::to_string(lineno));
    State s;
    s.t = row[0];
    s.values.assign(row.begin() + 1, row.end() - 1);
    s.primitive = row.back();
    if (!traj.samples.empty() && !(s.t > traj.samples.back().t)) {
      throw input_error("times not strictly increasing on line " + std::to_string(lineno));
    }
    traj.samples.push_back(std::move(s));
  }
  if (traj.samples.empty()) throw input_error("trajectory has no rows");
  traj.t_requested = traj.samples.back().t;
  traj.stats.steps = static_cast<long>(traj.samples.size()) - 1;
  return traj;
}

}  // namespace spin7
