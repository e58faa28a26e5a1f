#include "spin7/verify.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

namespace spin7 {

namespace {

using Json = nlohmann::ordered_json;

struct NumTerm {
  double coeff;
  std::vector<std::pair<int, int>> powers;  // (symbol index, exponent)
};

struct NumForm {
  std::vector<std::vector<NumTerm>> coefficients;
};

NumForm compile(const Multivector<LaurentPoly>& form) {
  NumForm out;
  for (const auto& [mask, poly] : form.terms()) {
    std::vector<NumTerm> terms;
    for (const auto& [e, c] : poly.terms()) {
      NumTerm t{to_double(c), {}};
      for (int k = 0; k < kSymbolCount; ++k)
        if (e[k] != 0) t.powers.emplace_back(k, e[k]);
      terms.push_back(std::move(t));
    }
    out.coefficients.push_back(std::move(terms));
  }
  return out;
}

// max_I |sum of terms of coefficient I| / max |term| over the whole form.
double normalized_residual(const NumForm& f, const std::array<double, kSymbolCount>& v) {
  double worst = 0.0, scale = 0.0;
  for (const auto& coeff : f.coefficients) {
    double sum = 0.0;
    for (const auto& t : coeff) {
      double x = t.coeff;
      for (auto [k, p] : t.powers) x *= std::pow(v[k], p);
      sum += x;
      scale = std::max(scale, std::abs(x));
    }
    worst = std::max(worst, std::abs(sum));
  }
  return scale == 0.0 ? 0.0 : worst / scale;
}

}  // namespace

double closure_residual(const Multivector<LaurentPoly>& form, const CosetModel& model, const Trajectory& traj,
                        const ClosureOptions& opts, double* t_worst) {
  if (traj.samples.size() < 3) throw input_error("closure check needs at least three samples");
  if ((traj.kind == ModelKind::Q) != (model.kind() == ModelKind::Q)) {
    throw input_error("trajectory and model belong to different families");
  }
  const NumForm d = compile(exterior_derivative(form, model));
  const std::size_t n = traj.symbols.size();
  double worst = 0.0;
  // Interior samples; the stencil stays inside the two neighbouring steps.
  for (std::size_t i = 1; i + 1 < traj.samples.size(); ++i) {
    const double tm = traj.samples[i].t;
    const double gap = std::min(tm - traj.samples[i - 1].t, traj.samples[i + 1].t - tm);
    const double h = std::min(opts.fd_step * tm, gap / 8);
    const auto dm2 = traj.offset(i, -2 * h), dm1 = traj.offset(i, -h), dp1 = traj.offset(i, h),
               dp2 = traj.offset(i, 2 * h);
    const State& y0 = traj.samples[i];
    std::array<double, kSymbolCount> v{};
    for (std::size_t k = 0; k < n; ++k) {
      Symbol s = traj.symbols[k];
      v[static_cast<int>(s)] = y0.values[k];
      v[static_cast<int>(derivative_of(s))] = (dm2[k] - 8 * dm1[k] + 8 * dp1[k] - dp2[k]) / (12 * h);
    }
    const double r = normalized_residual(d, v);
    if (r > worst || !std::isfinite(r)) {
      worst = std::isfinite(r) ? r : std::numeric_limits<double>::infinity();
      if (t_worst) *t_worst = tm;
    }
  }
  return worst;
}

ClosureReport check_closure(const Trajectory& traj, const Spin7Structure& s, const KaehlerCertificate& cert,
                            const ClosureOptions& opts) {
  ClosureReport r;
  double tw = 0.0, te = 0.0;
  r.domega = closure_residual(s.Omega, s.model, traj, opts, &tw);
  r.deta = cert.eta.terms().empty() ? 0.0 : closure_residual(cert.eta, s.model, traj, opts, &te);
  r.t_worst = r.domega >= r.deta ? tw : te;
  r.points = traj.samples.size() - 2;
  return r;
}

double ConeFit::max_delta() const {
  double m = 0;
  for (const auto& q : quantities) m = std::max(m, q.delta);
  return m;
}

double ConeFit::max_end_delta() const {
  double m = 0;
  for (const auto& q : quantities) m = std::max(m, q.end_delta);
  return m;
}

ConeFit cone_fit(const Trajectory& traj) {
  if (traj.samples.size() < 2) throw input_error("cone fit needs at least two samples");
  struct Spec {
    std::string name;
    Symbol sym;
    bool squared;
    double ref;
  };
  std::vector<Spec> specs;
  if (traj.kind == ModelKind::Q) {
    specs = {{"a^2/t^2", Symbol::A, true, 1.0 / 8},
             {"b^2/t^2", Symbol::B, true, 1.0 / 8},
             {"c^2/t^2", Symbol::C, true, 1.0 / 8},
             {"|f|/t", Symbol::F, false, 3.0 / 4}};
  } else {
    specs = {{"a^2/t^2", Symbol::A, true, 3.0 / 4}, {"b^2/t^2", Symbol::B, true, 1.0 / 2}, {"|c|/t", Symbol::C, false, 2.0}};
  }
  ConeFit fit;
  const double t_end = traj.t_end();
  double scale = std::max(traj.t_begin(), 0.0);
  for (double v : traj.samples.front().values) scale = std::max(scale, std::abs(v));
  if (traj.stop != StopReason::Completed) {
    fit.partial = true;
    fit.warning = "trajectory stopped early (" + stop_reason_name(traj.stop) + ")";
  } else if (t_end < 1e3 * scale) {
    fit.partial = true;
    fit.warning = "trajectory ends before 1e3 times the initial scale";
  }
  fit.t_fit_end = t_end;
  fit.t_fit_begin = std::max(t_end / 10, traj.t_begin());
  // Log-spaced points on the final decade.
  const int m = 64;
  std::vector<double> ts;
  for (int i = 0; i < m; ++i) {
    double u = static_cast<double>(i) / (m - 1);
    ts.push_back(fit.t_fit_begin * std::pow(t_end / fit.t_fit_begin, u));
  }
  ts.back() = t_end;
  ts.front() = std::max(ts.front(), traj.t_begin());
  fit.points = ts.size();
  std::vector<std::vector<double>> ys(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) ys[i] = traj.at(ts[i]);
  for (const auto& sp : specs) {
    const int k = traj.index_of(sp.sym);
    auto value = [&](double t, const std::vector<double>& y) {
      return sp.squared ? y[k] * y[k] / (t * t) : std::abs(y[k]) / t;
    };
    // Least squares y = L + K x with x = 1/t.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double N = static_cast<double>(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
      double x = 1.0 / ts[i], y = value(ts[i], ys[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    ConeQuantity q;
    q.name = sp.name;
    q.reference = sp.ref;
    const double det = N * sxx - sx * sx;
    if (std::abs(det) > 1e-300 * N) {
      q.rate = (N * sxy - sx * sy) / det;
      q.limit = (sy - q.rate * sx) / N;
    } else {
      q.rate = 0.0;
      q.limit = sy / N;
    }
    double ss = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      double r = value(ts[i], ys[i]) - (q.limit + q.rate / ts[i]);
      ss += r * r;
    }
    q.residual = std::sqrt(ss / N);
    q.delta = std::abs(q.limit - q.reference);
    q.end_value = value(t_end, traj.at(t_end));
    q.end_delta = std::abs(q.end_value - q.reference);
    fit.quantities.push_back(q);
  }
  return fit;
}

std::vector<Orbit> OrbitCatalog::admissible() const {
  std::vector<Orbit> out;
  for (const auto& e : entries)
    if (e.orbit) out.push_back(*e.orbit);
  return out;
}

OrbitCatalog orbit_catalog(ModelKind kind) {
  OrbitCatalog c;
  c.kind = kind;
  const std::string no_space = "not a sphere quotient: no cohomogeneity-one space with this singular orbit";
  if (kind == ModelKind::Q) {
    c.entries = {
        {"3u(1)", "U(1)^3", "S^1", "S^2xS^2xS^2", Orbit::S2xS2xS2, {Symbol::F}, false, "non-smooth", ""},
        {"2u(1)+su(2)", "U(1)^2xSU(2)", "S^3", "S^2xS^2", Orbit::S2xS2, {Symbol::A, Symbol::F}, false, "smooth", ""},
        {"u(1)+2su(2)", "U(1)xSU(2)^2", "not S^5/Gamma", "S^2", std::nullopt, {}, false, "", no_space},
        {"3su(2)", "SU(2)^3", "Q(1,1,1), not S^7/Gamma", "point", std::nullopt, {}, false, "", no_space},
    };
  } else {
    c.entries = {
        {"su(2)+2u(1)", "U(2)xU(1)", "S^1", "CP^2xS^2", Orbit::CP2xS2, {Symbol::C}, false, "non-smooth", ""},
        {"2su(2)+u(1)", "U(2)xSU(2)", "S^3", "CP^2", Orbit::CP2, {Symbol::B, Symbol::C}, false, "smooth", ""},
        {"su(3)+u(1)", "SU(3)xU(1)", "S^5/Z_3", "S^2", Orbit::S2, {Symbol::A, Symbol::C}, true, "non-smooth",
         "orbifold: the total space is not a manifold"},
        {"su(3)+su(2)", "SU(3)xSU(2)", "M(1,1,0), not S^7/Gamma", "point", std::nullopt, {}, false, "", no_space},
    };
  }
  return c;
}

const CatalogEntry& catalog_entry(ModelKind kind, Orbit orbit) {
  static const OrbitCatalog q = orbit_catalog(ModelKind::Q);
  static const OrbitCatalog m = orbit_catalog(ModelKind::M);
  const OrbitCatalog& c = kind == ModelKind::Q ? q : m;
  for (const auto& e : c.entries)
    if (e.orbit == orbit) return e;
  throw input_error("orbit " + orbit_name(orbit) + " is not in the singular-orbit catalog of model " +
                    (kind == ModelKind::Q ? "Q" : "M"));
}

namespace {

CosetModel model_of(ModelKind kind) { return kind == ModelKind::Q ? CosetModel::q(1, 1, 1) : CosetModel::m(1, 1); }

std::map<Symbol, Rational> required_magnitudes(ModelKind kind, Orbit orbit, std::string& note) {
  if (kind == ModelKind::Q) {
    if (orbit == Orbit::S2xS2xS2) {
      note = "collapsing circle of length (4 pi/3)|f(t)|: smooth iff |f'(0)| = 3/2";
      return {{Symbol::F, make_rational(3, 2)}};
    }
    note = "collapsing S^3 of round type: smooth iff |a'(0)| = 1/2 and |f'(0)| = 3/2";
    return {{Symbol::A, make_rational(1, 2)}, {Symbol::F, make_rational(3, 2)}};
  }
  if (orbit == Orbit::CP2xS2) {
    note = "collapsing circle: |c'(0)| must equal (2 pi / 4 pi) * 8 = 4";
    return {{Symbol::C, Rational(4)}};
  }
  if (orbit == Orbit::CP2) {
    note = "collapsing S^3 with the sectional-curvature condition: |b'(0)| = 1 and |c'(0)| = 4";
    return {{Symbol::B, Rational(1)}, {Symbol::C, Rational(4)}};
  }
  note = "collapsing S^5/Z_3: |a'(0)| = 1 and |c'(0)| = 4 for a smooth orbifold metric";
  return {{Symbol::A, Rational(1)}, {Symbol::C, Rational(4)}};
}

}  // namespace

SmoothnessReport smoothness_report(const ODESystem& sys, const OrbitSpec& spec) {
  const CatalogEntry& entry = catalog_entry(spec.kind, spec.orbit);
  const CosetModel model = model_of(spec.kind);
  SmoothnessReport r;
  r.model = model.name();
  r.orbit = spec.orbit;
  r.orbifold = entry.orbifold;
  r.required = required_magnitudes(spec.kind, spec.orbit, r.note);
  r.computed = series_start(sys, spec).slopes;
  r.smooth = true;
  for (const auto& [s, need] : r.required) {
    auto it = r.computed.find(s);
    if (it == r.computed.end() || abs(it->second) != need) r.smooth = false;
  }
  r.circle = collapsing_circle(model, adjoint_generator(model));
  r.note += "; circle generator check: period " + to_string(r.circle.period_over_pi) + " pi, |S cap H| = " +
            std::to_string(r.circle.isotropy_intersection) + ", circle requirement " +
            to_string(r.circle.required_derivative);
  return r;
}

SmoothnessReport smoothness_report(const CosetModel& model, Orbit orbit) {
  const ModelKind kind = model.kind();
  if (!model.is_distinguished()) throw input_error("smoothness data exist only for Q(1,1,1) and M(1,1)");
  const auto collapsing = collapsing_symbols(kind, orbit);
  std::map<Symbol, Rational> init;
  for (Symbol s : derive_flow(model).state)
    if (std::find(collapsing.begin(), collapsing.end(), s) == collapsing.end()) init[s] = 1;
  return smoothness_report(derive_flow(model), OrbitSpec::make(kind, orbit, init));
}

namespace {

bool closes(const Multivector<LaurentPoly>& form, const CosetModel& model, const ODESystem& sys) {
  auto d = substitute_flow(exterior_derivative(form, model), sys);
  for (const auto& [m, c] : d.terms())
    if (!c.reduce_circle().is_zero()) return false;
  return true;
}

int rational_rank(std::vector<std::vector<Rational>> rows) {
  int rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == static_cast<std::size_t>(rank) || rows[r][c] == 0) continue;
      Rational f = rows[r][c] / rows[rank][c];
      for (std::size_t k = 0; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

std::vector<Rational> to_row(const std::array<long, 3>& v) { return {Rational(v[0]), Rational(v[1]), Rational(v[2])}; }

}  // namespace

Su4Certificate su4_family_check(const CosetModel& model, const ODESystem& sys) {
  Su4Certificate cert;
  const Spin7Structure s = build_invariant_structure(model);
  const RotationFamily ref = reference_rotation();
  const RotationFamily ad = adjoint_rotation(model);
  const std::vector<Angle> angles = {symbolic_angle(),
                                     rational_angle(make_rational(3, 5), make_rational(4, 5)),
                                     rational_angle(make_rational(5, 13), make_rational(-12, 13)),
                                     quarter_turn(),
                                     half_turn()};

  try {
    cert.family_closed = true;
    for (const auto& fam : {ref, ad})
      for (const auto& a : angles)
        if (!closes(rotate_form(s.Omega, model, fam, a), model, sys)) cert.family_closed = false;
    if (!cert.family_closed) cert.failures.push_back("rotated structure is not closed under the system");

    cert.identity_at_zero = rotate_form(s.Omega, model, ref, zero_angle()) == s.Omega;
    if (!cert.identity_at_zero) cert.failures.push_back("rotation by zero changes Omega");

    cert.family_nontrivial = rotate_form(s.Omega, model, ref, symbolic_angle()) != s.Omega &&
                             rotate_form(s.Omega, model, ref, angles[1]) != s.Omega;
    if (!cert.family_nontrivial) cert.failures.push_back("rotation family is constant");

    // Isotropy rotations fix Omega; their speed vectors span the directions the adjoint family may differ by.
    cert.isotropy_invariant = true;
    std::vector<std::vector<Rational>> iso_rows;
    for (int i : model.isotropy_indices()) {
      std::vector<Rational> x(static_cast<std::size_t>(model.dim()));
      x[static_cast<std::size_t>(i)] = 1;
      if (!plane_speeds(model, x)) continue;  // su(2) parts mix the planes
      RotationFamily fam = rotation_from_element(model, x);
      iso_rows.push_back(to_row(fam.speeds));
      if (rotate_form(s.Omega, model, fam, symbolic_angle()) != s.Omega) cert.isotropy_invariant = false;
    }
    if (!cert.isotropy_invariant) cert.failures.push_back("an isotropy rotation moves Omega");

    const int base_rank = rational_rank(iso_rows);
    std::vector<long> lambdas;
    for (long lambda = -64; lambda <= 64; ++lambda) {
      auto rows = iso_rows;
      rows.push_back(to_row({ad.speeds[0] - lambda, ad.speeds[1] - lambda, ad.speeds[2] - lambda}));
      if (rational_rank(rows) == base_rank) lambdas.push_back(lambda);
    }
    if (lambdas.size() == 1) {
      cert.adjoint_reference_speed = lambdas.front();
      const long l = lambdas.front();
      cert.adjoint_matches_reference = rotate_form(s.Omega, model, ad, symbolic_angle()) ==
                                       rotate_form(s.Omega, model, RotationFamily{{l, l, l}, 1}, symbolic_angle());
    }
    if (!cert.adjoint_matches_reference) cert.failures.push_back("adjoint family differs from the reference family");
  } catch (const Error& e) {
    cert.failures.push_back(std::string("rotation family: ") + e.what());
  }

  try {
    KaehlerCertificate k = kaehler_search(model, sys);
    cert.kaehler_unique = k.residual_zero && k.volume_nonzero;
    cert.kaehler_signs = k.signs;
  } catch (const Error& e) {
    cert.failures.push_back(std::string("Kaehler form: ") + e.what());
  }
  if (!cert.kaehler_unique && cert.kaehler_signs.empty() == false) cert.failures.push_back("Kaehler form degenerate");

  // A parallel invariant 1-form would combine the circle direction and dt. The circle part is excluded
  // because d e7 has a nonzero tangent part; the dt part needs a constant circle coefficient, which the
  // limiting derivative at the first singular orbit rules out.
  try {
    const int n = model.coframe_size(), dt = model.dt_generator();
    auto de7 = invariant_d(Multivector<Rational>::generator(n, 6, dt), model);
    bool tangent = false;
    for (const auto& [m, c] : de7.terms())
      if ((m & ~model.tangent_mask()) == 0 && c != 0) tangent = true;
    const Orbit first = orbit_catalog(model.kind()).admissible().front();
    std::map<Symbol, Rational> init;
    const auto collapsing = collapsing_symbols(model.kind(), first);
    for (Symbol sym : sys.state)
      if (std::find(collapsing.begin(), collapsing.end(), sym) == collapsing.end()) init[sym] = 1;
    auto start = series_start(sys, OrbitSpec::make(model.kind(), first, init));
    const Rational slope = start.slopes.at(primitive_symbol(model.kind()));
    cert.parallel_excluded = tangent && slope != 0;
  } catch (const Error& e) {
    cert.failures.push_back(std::string("parallel vector test: ") + e.what());
  }
  if (!cert.parallel_excluded) cert.failures.push_back("an invariant parallel vector field is not excluded");
  return cert;
}

VerificationReport verify_trajectory(const CosetModel& model, const ODESystem& sys, const Trajectory& traj,
                                     Orbit orbit, const IntegratorConfig& cfg, const ReportBars& bars,
                                     const Profile* profile) {
  VerificationReport r;
  r.model = model.name();
  r.orbit = orbit;
  r.config = cfg;
  r.eps = traj.samples.empty() ? 0.0 : traj.t_begin();
  r.bars = bars;
  const Spin7Structure s = build_invariant_structure(model);
  try {
    r.kaehler = kaehler_search(model, sys);
  } catch (const Error& e) {
    r.failures.push_back(std::string("Kaehler form: ") + e.what());
  }
  r.closure = check_closure(traj, s, r.kaehler);
  if (!(r.closure.domega <= bars.closure)) r.failures.push_back("d Omega residual above bar");
  if (!(r.closure.deta <= bars.closure)) r.failures.push_back("d eta residual above bar");
  r.cone = cone_fit(traj);
  if (!r.cone.partial && !(r.cone.max_delta() <= bars.cone)) r.failures.push_back("cone limits outside bar");
  if (orbit != Orbit::Principal) {
    const CatalogEntry& e = catalog_entry(model.kind(), orbit);
    r.expected_verdict = e.expected_verdict;
    std::map<Symbol, Rational> init;
    for (std::size_t i = 0; i < traj.symbols.size(); ++i)
      if (std::find(e.collapsing.begin(), e.collapsing.end(), traj.symbols[i]) == e.collapsing.end()) init[traj.symbols[i]] = 1;
    r.smoothness = smoothness_report(sys, OrbitSpec::make(model.kind(), orbit, init));
    if (r.smoothness->verdict() != e.expected_verdict) r.failures.push_back("smoothness verdict differs from the catalog");
  }
  r.su4 = su4_family_check(model, sys);
  if (!r.su4.passed()) r.failures.push_back("SU(4) certificate failed");
  if (profile) {
    r.closed_form = compare(traj, *profile);
    if (!(r.closed_form->max() <= bars.closed_form)) r.failures.push_back("closed-form deviation above bar");
  }
  return r;
}

namespace {

Json rational_map(const std::map<Symbol, Rational>& m) {
  Json j = Json::object();
  for (const auto& [s, v] : m) j[symbol_name(s)] = to_string(v);
  return j;
}

Json smoothness_to_json(const SmoothnessReport& r) {
  Json j;
  j["model"] = r.model;
  j["orbit"] = orbit_name(r.orbit);
  j["computed"] = rational_map(r.computed);
  j["required"] = rational_map(r.required);
  j["verdict"] = r.verdict();
  j["orbifold"] = r.orbifold;
  j["note"] = r.note;
  return j;
}

Json cone_to_json(const ConeFit& c) {
  Json j;
  Json limits = Json::object(), refs = Json::object(), deltas = Json::object(), ends = Json::object(),
       end_deltas = Json::object(), rates = Json::object(), res = Json::object();
  for (const auto& q : c.quantities) {
    limits[q.name] = q.limit;
    refs[q.name] = q.reference;
    deltas[q.name] = q.delta;
    ends[q.name] = q.end_value;
    end_deltas[q.name] = q.end_delta;
    rates[q.name] = q.rate;
    res[q.name] = q.residual;
  }
  j["limits"] = limits;
  j["refs"] = refs;
  j["deltas"] = deltas;
  j["end_values"] = ends;
  j["end_deltas"] = end_deltas;
  j["rates"] = rates;
  j["fit_residuals"] = res;
  j["fit_window"] = {c.t_fit_begin, c.t_fit_end};
  j["partial"] = c.partial;
  if (!c.warning.empty()) j["warning"] = c.warning;
  return j;
}

}  // namespace

std::string smoothness_json(const SmoothnessReport& r, int indent) { return smoothness_to_json(r).dump(indent); }

std::string cone_json(const ConeFit& c, int indent) { return cone_to_json(c).dump(indent); }

std::string report_json(const VerificationReport& r, int indent) {
  Json j;
  j["model"] = r.model;
  j["orbit"] = orbit_name(r.orbit);
  j["config"] = {{"rtol", r.config.rtol},
                 {"atol", r.config.atol},
                 {"t_end", r.config.t_end},
                 {"eps", r.eps},
                 {"initial_step", r.config.initial_step},
                 {"max_step", std::isfinite(r.config.max_step) ? Json(r.config.max_step) : Json("inf")}};
  j["closure_residual"] = r.closure.max();
  j["closure"] = {{"domega", r.closure.domega},
                  {"deta", r.closure.deta},
                  {"points", r.closure.points},
                  {"t_worst", r.closure.t_worst},
                  {"bar", r.bars.closure}};
  Json cone = cone_to_json(r.cone);
  cone["bar"] = r.bars.cone;
  j["cone"] = cone;
  j["kaehler"] = {{"signs", r.kaehler.signs}, {"residual", r.closure.deta}};
  if (r.smoothness) {
    Json s = smoothness_to_json(*r.smoothness);
    s["expected"] = r.expected_verdict.value_or("");
    j["smoothness"] = s;
  } else {
    j["smoothness"] = nullptr;
  }
  j["su4_certificate"] = r.su4.passed();
  j["su4"] = {{"family_closed", r.su4.family_closed},
              {"identity_at_zero", r.su4.identity_at_zero},
              {"family_nontrivial", r.su4.family_nontrivial},
              {"isotropy_invariant", r.su4.isotropy_invariant},
              {"adjoint_matches_reference", r.su4.adjoint_matches_reference},
              {"adjoint_reference_speed", r.su4.adjoint_reference_speed},
              {"kaehler_unique", r.su4.kaehler_unique},
              {"parallel_excluded", r.su4.parallel_excluded}};
  if (r.closed_form) {
    j["closed_form"] = {{"circle", r.closed_form->circle},
                        {"relations", r.closed_form->relations},
                        {"samples", r.closed_form->samples},
                        {"bar", r.bars.closed_form}};
  }
  j["passed"] = r.passed();
  j["failures"] = r.failures;
  return j.dump(indent);
}

}  // namespace spin7
