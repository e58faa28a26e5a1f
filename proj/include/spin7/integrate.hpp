#pragma once

#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "spin7/error.hpp"
#include "spin7/flow.hpp"

namespace spin7 {

enum class Orbit { Principal, S2xS2xS2, S2xS2, CP2xS2, CP2, S2 };

std::string orbit_name(Orbit o);
Orbit parse_orbit(const std::string& name);
// Symbols vanishing at t = 0 on the singular orbit; throws if the orbit does not belong to the model.
std::vector<Symbol> collapsing_symbols(ModelKind kind, Orbit orbit);
// The coefficient whose primitive is carried along (f for Q, c for M).
Symbol primitive_symbol(ModelKind kind);

struct OrbitSpec {
  ModelKind kind = ModelKind::Q;
  Orbit orbit = Orbit::Principal;
  std::map<Symbol, Rational> initial;  // values of the surviving coefficients at t = 0
  bool negative_branch = false;

  // Validates: every surviving coefficient given and nonzero, no collapsing coefficient given.
  static OrbitSpec make(ModelKind kind, Orbit orbit, std::map<Symbol, Rational> initial, bool negative_branch = false);
};

struct State {
  double t = 0.0;
  std::vector<double> values;  // in ODESystem::state order
  double primitive = 0.0;
};

struct IntegratorConfig {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0: choose from the start offset
  double max_step = std::numeric_limits<double>::infinity();
  double t_end = 1e4;
  double eps = 0.0;  // 0: 1e-6 * min |initial value|
  long max_steps = 10'000'000;

  void validate() const;
};

struct SeriesStart {
  State state;
  std::map<Symbol, Rational> slopes;          // limiting derivatives of collapsing coefficients
  std::map<Symbol, Rational> surviving_rates;  // first derivatives of surviving coefficients (zero by parity)
  double eps = 0.0;
};

double default_eps(const OrbitSpec& spec);
SeriesStart series_start(const ODESystem& sys, const OrbitSpec& spec, const IntegratorConfig& cfg = {});
State initial_state(const ODESystem& sys, const OrbitSpec& spec, const IntegratorConfig& cfg = {});

// Right-hand side compiled to floating point.
class NumericSystem {
 public:
  explicit NumericSystem(const ODESystem& sys);
  std::size_t size() const { return rows_.size(); }
  // out = derivatives of the coefficients followed by the primitive's integrand.
  void eval(const double* y, double* out) const;
  int primitive_index() const { return primitive_index_; }

 private:
  struct Term {
    double coeff;
    std::vector<std::pair<int, int>> powers;  // (state index, exponent)
  };
  std::vector<std::vector<Term>> rows_;
  int primitive_index_ = 0;
};

enum class StopReason { Completed, ZeroCrossing, BlowUp, MaxSteps };
std::string stop_reason_name(StopReason r);

struct DenseSegment {
  double t0 = 0.0, h = 0.0;
  std::vector<double> r1, r2, r3, r4, r5;  // over coefficients + primitive
};

struct IntegrationStats {
  long steps = 0;
  long rejected = 0;
  long evaluations = 0;
  double max_error = 0.0;  // largest accepted normalized error estimate
};

struct Trajectory {
  ModelKind kind = ModelKind::Q;
  std::vector<Symbol> symbols;
  std::vector<State> samples;
  std::vector<DenseSegment> segments;  // empty for trajectories read from CSV
  IntegrationStats stats;
  StopReason stop = StopReason::Completed;
  double t_requested = 0.0;

  double t_begin() const { return samples.front().t; }
  double t_end() const { return samples.back().t; }
  // Coefficients followed by the primitive at time t (dense output, or local interpolation).
  std::vector<double> at(double t) const;
  // y(t_node + dt) - y(t_node) computed from increments, so small changes of large values keep
  // their relative precision. Stays within the neighbouring steps.
  std::vector<double> offset(std::size_t node, double dt) const;
  int index_of(Symbol s) const;
  std::size_t width() const { return symbols.size() + 1; }
};

class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, State last) : Error(ErrorKind::Integration, what), last_(std::move(last)) {}
  const State& last_state() const { return last_; }

 private:
  State last_;
};

// Dormand-Prince 5(4) with dense output and mixed absolute/relative error control.
Trajectory integrate(const ODESystem& sys, const State& start, const IntegratorConfig& cfg);
Trajectory solve(const ODESystem& sys, const OrbitSpec& spec, const IntegratorConfig& cfg);

std::string csv_header(ModelKind kind);
void write_csv(const Trajectory& traj, std::ostream& out);
Trajectory read_csv(std::istream& in, ModelKind kind);

}  // namespace spin7
