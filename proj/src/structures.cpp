#include "spin7/structures.hpp"

#include <cmath>
#include <numeric>

#include "spin7/error.hpp"

namespace spin7 {

namespace {

Multivector<Rational> term(int n, std::initializer_list<int> one_based, long c) {
  Mask m = 0;
  for (int i : one_based) m |= Mask(1) << (i - (n == 7 ? 1 : 0));
  return Multivector<Rational>::basis(n, m, Rational(c));
}

Multivector<LaurentPoly> to_symbolic(const Multivector<Rational>& u) {
  Multivector<LaurentPoly> r(u.size(), u.dt_index());
  for (const auto& [m, c] : u.terms()) r.add(m, LaurentPoly(c));
  return r;
}

CanonicalForms make_canonical() {
  CanonicalForms f;
  f.omega = Multivector<Rational>(7);
  for (const auto& t : {term(7, {1, 2, 3}, 1), term(7, {1, 4, 5}, 1), term(7, {1, 6, 7}, -1), term(7, {2, 4, 6}, 1),
                        term(7, {2, 5, 7}, 1), term(7, {3, 4, 7}, 1), term(7, {3, 5, 6}, -1)})
    f.omega += t;
  Multivector<Rational> star(8);
  for (const auto& t : {term(8, {1, 2, 4, 7}, -1), term(8, {1, 2, 5, 6}, 1), term(8, {1, 3, 4, 6}, 1),
                        term(8, {1, 3, 5, 7}, 1), term(8, {2, 3, 4, 5}, -1), term(8, {2, 3, 6, 7}, 1),
                        term(8, {4, 5, 6, 7}, 1)})
    star += t;
  auto dx0 = Multivector<Rational>::generator(8, 0);
  f.Omega = wedge(dx0, shift_to_eight(f.omega)) + star;
  if (shift_to_eight(hodge_star(f.omega)) != star) throw internal_error("canonical forms: *omega mismatch");
  return f;
}

}  // namespace

Multivector<Rational> shift_to_eight(const Multivector<Rational>& u) {
  if (u.size() != 7) throw input_error("expected a form on seven generators");
  return relabel(u, 8, {1, 2, 3, 4, 5, 6, 7});
}

const CanonicalForms& canonical_forms() {
  static const CanonicalForms forms = make_canonical();
  return forms;
}

std::array<FrameEntry, 8> model_frame(const CosetModel& model, int time_orientation) {
  if (!model.is_distinguished())
    throw input_error("no invariant G2-structure on " + model.name() + " (only Q(1,1,1) and M(1,1) are admissible)");
  if (time_orientation != 1 && time_orientation != -1) throw input_error("time orientation must be +1 or -1");
  auto a = LaurentPoly::symbol(Symbol::A), b = LaurentPoly::symbol(Symbol::B), c = LaurentPoly::symbol(Symbol::C);
  const int dt = model.dt_generator();
  std::array<FrameEntry, 8> f;
  f[0] = {dt, LaurentPoly(time_orientation)};
  if (model.kind() == ModelKind::Q) {
    auto ff = LaurentPoly::symbol(Symbol::F);
    f[1] = {6, ff};
    f[2] = {0, a};
    f[3] = {1, a};
    f[4] = {2, b};
    f[5] = {3, b};
    f[6] = {5, c};
    f[7] = {4, c};
  } else {
    f[1] = {6, c};
    f[2] = {5, b};
    f[3] = {4, b};
    f[4] = {0, a};
    f[5] = {1, a};
    f[6] = {3, a};
    f[7] = {2, a};
  }
  return f;
}

std::vector<LaurentPoly> coframe_scales(const Spin7Structure& s) {
  std::vector<LaurentPoly> scales(static_cast<std::size_t>(s.model.coframe_size()), LaurentPoly(1));
  for (int k = 1; k < 8; ++k) scales[static_cast<std::size_t>(s.frame[k].generator)] = s.frame[k].scale;
  return scales;
}

int frame_parity(const Spin7Structure& s) {
  std::vector<int> g;
  for (int k = 1; k < 8; ++k) g.push_back(s.frame[k].generator);
  int inv = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (g[i] > g[j]) ++inv;
  return inv % 2 ? -1 : 1;
}

std::vector<std::string> coframe_names(const CosetModel& model) {
  std::vector<std::string> n;
  for (int i = 0; i < model.dim(); ++i) n.push_back("e" + std::to_string(i + 1));
  n.push_back("dt");
  return n;
}

Spin7Structure build_invariant_structure(const CosetModel& model, int time_orientation) {
  Spin7Structure s{model, model_frame(model, time_orientation), time_orientation, {}, {}, {}};
  const int n = model.coframe_size(), dt = model.dt_generator();
  std::vector<Multivector<LaurentPoly>> images;
  for (const auto& fe : s.frame)
    images.push_back(Multivector<LaurentPoly>::basis(n, Mask(1) << fe.generator, fe.scale, dt));
  const auto& cf = canonical_forms();
  s.Omega = pullback(to_symbolic(cf.Omega), images);
  std::vector<Multivector<LaurentPoly>> spatial(images.begin() + 1, images.end());
  s.omega = pullback(to_symbolic(cf.omega), spatial);
  s.star_omega = metric_hodge_star(s.omega, coframe_scales(s), model.tangent_mask(), frame_parity(s));
  auto dt_form = Multivector<LaurentPoly>::generator(n, dt, dt).scaled(LaurentPoly(time_orientation));
  if (s.Omega != s.star_omega + wedge(dt_form, s.omega))
    throw internal_error("invariant structure violates Omega = *omega + dt ^ omega");
  if (!is_basic(s.Omega, model)) throw internal_error("invariant Omega is not basic");
  return s;
}

RotationFamily reference_rotation() { return {{1, 1, 1}, 1}; }

std::vector<Rational> adjoint_generator(const CosetModel& model) {
  std::vector<Rational> x(static_cast<std::size_t>(model.dim()));
  x[6] = model.kind() == ModelKind::Q ? Rational(1) : make_rational(1, 2);
  return x;
}

RotationFamily rotation_from_element(const CosetModel& model, const std::vector<Rational>& x) {
  auto sp = plane_speeds(model, x);
  if (!sp) throw input_error("element does not act by block rotations");
  mpz_class den = 1;
  for (const auto& v : *sp) den = lcm(den, v.get_den());
  RotationFamily f;
  for (int p = 0; p < 3; ++p) {
    Rational scaled = (*sp)[p] * Rational(den);
    f.speeds[p] = scaled.get_num().get_si();
  }
  f.parameter_scale = den.get_si();
  return f;
}

RotationFamily adjoint_rotation(const CosetModel& model) {
  return rotation_from_element(model, adjoint_generator(model));
}

Angle symbolic_angle() { return {LaurentPoly::symbol(Symbol::Cos), LaurentPoly::symbol(Symbol::Sin)}; }

Angle rational_angle(const Rational& c, const Rational& s) {
  if (c * c + s * s != 1) throw input_error("point is not on the unit circle");
  return {LaurentPoly(c), LaurentPoly(s)};
}

Angle angle_sum(const Angle& a, const Angle& b) {
  return {(a.cos * b.cos - a.sin * b.sin).reduce_circle(), (a.sin * b.cos + a.cos * b.sin).reduce_circle()};
}

Angle angle_multiple(const Angle& a, long n) {
  Angle base = n < 0 ? Angle{a.cos, -a.sin} : a;
  Angle r = zero_angle();
  for (long i = 0; i < std::labs(n); ++i) r = angle_sum(r, base);
  return r;
}

std::vector<Multivector<LaurentPoly>> rotation_pullback_images(const CosetModel& model, const RotationFamily& family,
                                                               const Angle& psi) {
  const int n = model.coframe_size(), dt = model.dt_generator();
  std::vector<Multivector<LaurentPoly>> images;
  for (int i = 0; i < n; ++i) images.push_back(Multivector<LaurentPoly>::generator(n, i, dt));
  for (int p = 0; p < 3; ++p) {
    Angle a = angle_multiple(psi, family.speeds[p]);
    const int i = 2 * p, j = 2 * p + 1;
    Multivector<LaurentPoly> ei(n, dt), ej(n, dt);
    ei.add(Mask(1) << i, a.cos);
    ei.add(Mask(1) << j, -a.sin);
    ej.add(Mask(1) << i, a.sin);
    ej.add(Mask(1) << j, a.cos);
    images[i] = ei;
    images[j] = ej;
  }
  return images;
}

Multivector<LaurentPoly> rotate_form(const Multivector<LaurentPoly>& form, const CosetModel& model,
                                     const RotationFamily& family, const Angle& psi) {
  auto r = pullback(form, rotation_pullback_images(model, family, psi));
  return r.map_coefficients([](const LaurentPoly& p) { return p.reduce_circle(); });
}

Spin7Structure rotate_structure(const Spin7Structure& s, const RotationFamily& family, const Angle& psi) {
  Spin7Structure r = s;
  r.Omega = rotate_form(s.Omega, s.model, family, psi);
  r.omega = rotate_form(s.omega, s.model, family, psi);
  r.star_omega = rotate_form(s.star_omega, s.model, family, psi);
  return r;
}

void assign_angle(Assignment& a, double psi) {
  a.set(Symbol::Cos, std::cos(psi));
  a.set(Symbol::Sin, std::sin(psi));
}

}  // namespace spin7
