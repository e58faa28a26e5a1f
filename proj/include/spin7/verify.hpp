#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spin7/closed_form.hpp"
#include "spin7/flow.hpp"
#include "spin7/integrate.hpp"
#include "spin7/structures.hpp"

namespace spin7 {

// ---- closure -------------------------------------------------------------

struct ClosureOptions {
  double fd_step = 1e-4;  // centered-difference step relative to t (capped by the local step size)
};

struct ClosureReport {
  double domega = 0.0;  // max normalized residual of d Omega
  double deta = 0.0;    // max normalized residual of d eta
  double t_worst = 0.0;
  std::size_t points = 0;
  double max() const { return domega > deta ? domega : deta; }
};

// Largest normalized residual of d(form) along the trajectory. Time derivatives of the coefficients
// come from five-point centered differences of the (dense or interpolated) trajectory.
double closure_residual(const Multivector<LaurentPoly>& form, const CosetModel& model, const Trajectory& traj,
                        const ClosureOptions& opts = {}, double* t_worst = nullptr);

ClosureReport check_closure(const Trajectory& traj, const Spin7Structure& s, const KaehlerCertificate& cert,
                            const ClosureOptions& opts = {});

// ---- cone ----------------------------------------------------------------

struct ConeQuantity {
  std::string name;     // e.g. "a^2/t^2", "|f|/t"
  double limit = 0.0;   // fitted constant term
  double rate = 0.0;    // fitted 1/t coefficient
  double reference = 0.0;
  double delta = 0.0;   // |limit - reference|
  double end_value = 0.0;
  double end_delta = 0.0;
  double residual = 0.0;  // rms of the fit
};

struct ConeFit {
  std::vector<ConeQuantity> quantities;
  double t_fit_begin = 0.0, t_fit_end = 0.0;
  std::size_t points = 0;
  bool partial = false;
  std::string warning;
  double max_delta() const;
  double max_end_delta() const;
};

ConeFit cone_fit(const Trajectory& traj);

// ---- singular orbits -----------------------------------------------------

struct CatalogEntry {
  std::string isotropy_algebra;
  std::string isotropy_group;
  std::string sphere;          // K/H
  std::string singular_orbit;  // G/K
  std::optional<Orbit> orbit;  // empty when K/H is not a sphere quotient
  std::vector<Symbol> collapsing;
  bool orbifold = false;
  std::string expected_verdict;  // "smooth", "non-smooth", or "" for inadmissible rows
  std::string remark;
};

struct OrbitCatalog {
  ModelKind kind = ModelKind::Q;
  std::vector<CatalogEntry> entries;
  std::vector<Orbit> admissible() const;
};

OrbitCatalog orbit_catalog(ModelKind kind);
// Throws an input error for Principal or an orbit outside the model's catalog.
const CatalogEntry& catalog_entry(ModelKind kind, Orbit orbit);

struct SmoothnessReport {
  std::string model;
  Orbit orbit = Orbit::Principal;
  std::map<Symbol, Rational> computed;  // signed limiting derivatives
  std::map<Symbol, Rational> required;  // magnitudes
  bool smooth = false;
  bool orbifold = false;
  std::string verdict() const { return smooth ? "smooth" : "non-smooth"; }
  std::string note;
  CircleData circle;  // computed cross-check of the circle period and S cap H
};

SmoothnessReport smoothness_report(const ODESystem& sys, const OrbitSpec& spec);
// Unit initial values for the surviving coefficients.
SmoothnessReport smoothness_report(const CosetModel& model, Orbit orbit);

// ---- SU(4) evidence ------------------------------------------------------

struct Su4Certificate {
  bool family_closed = false;        // d Omega_theta = 0 under the system, symbolic and sampled angles
  bool identity_at_zero = false;
  bool family_nontrivial = false;
  bool isotropy_invariant = false;   // isotropy rotations fix Omega
  bool adjoint_matches_reference = false;
  long adjoint_reference_speed = 0;  // lambda with Omega_ad(psi) = Omega_T(lambda psi)
  bool kaehler_unique = false;
  std::vector<int> kaehler_signs;
  bool parallel_excluded = false;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

Su4Certificate su4_family_check(const CosetModel& model, const ODESystem& sys);

// ---- full report ---------------------------------------------------------

struct ReportBars {
  double closure = 1e-9;
  double cone = 1e-3;
  double closed_form = 1e-8;
};

struct VerificationReport {
  std::string model;
  Orbit orbit = Orbit::Principal;
  IntegratorConfig config;
  double eps = 0.0;
  ClosureReport closure;
  ConeFit cone;
  KaehlerCertificate kaehler;
  std::optional<SmoothnessReport> smoothness;
  std::optional<std::string> expected_verdict;
  Su4Certificate su4;
  std::optional<Deviation> closed_form;
  ReportBars bars;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

// Every check on one trajectory; the orbit selects the smoothness section (Principal skips it).
VerificationReport verify_trajectory(const CosetModel& model, const ODESystem& sys, const Trajectory& traj,
                                     Orbit orbit, const IntegratorConfig& cfg, const ReportBars& bars = {},
                                     const Profile* profile = nullptr);

std::string report_json(const VerificationReport& r, int indent = 2);
std::string smoothness_json(const SmoothnessReport& r, int indent = 2);
std::string cone_json(const ConeFit& c, int indent = 2);

}  // namespace spin7
