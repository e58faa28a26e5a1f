#pragma once

#include <array>

#include "spin7/homogeneous.hpp"
#include "spin7/laurent.hpp"
#include "spin7/multivector.hpp"

namespace spin7 {

// omega on dx1..dx7 (generators 0..6); Omega on dx0..dx7 (generators 0..7).
struct CanonicalForms {
  Multivector<Rational> omega;
  Multivector<Rational> Omega;
};

const CanonicalForms& canonical_forms();

// Embeds a 7-generator form on dx1..dx7 into the 8-generator space dx0..dx7.
Multivector<Rational> shift_to_eight(const Multivector<Rational>& u);

struct FrameEntry {
  int generator = 0;  // coframe index of e^i (the dt index for f^0)
  LaurentPoly scale;  // f^k = scale * e^generator
};

struct Spin7Structure {
  CosetModel model;
  std::array<FrameEntry, 8> frame;
  int time_orientation = 1;
  // All three live on the group coframe (dim generators plus dt).
  Multivector<LaurentPoly> Omega;
  Multivector<LaurentPoly> omega;
  Multivector<LaurentPoly> star_omega;
};

std::array<FrameEntry, 8> model_frame(const CosetModel& model, int time_orientation = 1);

// time_orientation = -1 replaces dt by -dt in the frame.
Spin7Structure build_invariant_structure(const CosetModel& model, int time_orientation = 1);

// Tangent-coframe scales s_i with orthonormal coframe s_i e^i (1 on isotropy and dt).
std::vector<LaurentPoly> coframe_scales(const Spin7Structure& s);
// Sign of the relabelling f^1..f^7 -> e^1..e^7.
int frame_parity(const Spin7Structure& s);

// Simultaneous rotation of the planes (e1,e2), (e3,e4), (e5,e6) at integer speeds of a
// base angle psi. The family parameter is theta = parameter_scale * psi.
struct RotationFamily {
  std::array<long, 3> speeds{1, 1, 1};
  long parameter_scale = 1;
};

// Block rotations R_theta in all three planes.
RotationFamily reference_rotation();
// exp(theta ad X) for X = e7 (Q) or the unnormalized u(1) generator ê7 / 2 (M).
RotationFamily adjoint_rotation(const CosetModel& model);
std::vector<Rational> adjoint_generator(const CosetModel& model);
// Rotation generated by a rational element with block-rotation adjoint action.
RotationFamily rotation_from_element(const CosetModel& model, const std::vector<Rational>& x);

struct Angle {
  LaurentPoly cos;
  LaurentPoly sin;
};

// cos psi, sin psi as the symbols cos, sin (exact for every psi after circle reduction).
Angle symbolic_angle();
// A rational point on the unit circle.
Angle rational_angle(const Rational& c, const Rational& s);
Angle angle_multiple(const Angle& a, long n);
Angle angle_sum(const Angle& a, const Angle& b);
inline Angle zero_angle() { return {LaurentPoly(1), LaurentPoly(0)}; }
inline Angle half_turn() { return {LaurentPoly(-1), LaurentPoly(0)}; }
inline Angle quarter_turn() { return {LaurentPoly(0), LaurentPoly(1)}; }

// 1-form images of the rotation pullback on the coframe.
std::vector<Multivector<LaurentPoly>> rotation_pullback_images(const CosetModel& model, const RotationFamily& family,
                                                               const Angle& psi);

Multivector<LaurentPoly> rotate_form(const Multivector<LaurentPoly>& form, const CosetModel& model,
                                     const RotationFamily& family, const Angle& psi);

Spin7Structure rotate_structure(const Spin7Structure& s, const RotationFamily& family, const Angle& psi);

// Numeric value assignment for cos/sin of a base angle.
void assign_angle(Assignment& a, double psi);

// Names of the coframe generators ("e1".."e11", "dt").
std::vector<std::string> coframe_names(const CosetModel& model);

}  // namespace spin7
