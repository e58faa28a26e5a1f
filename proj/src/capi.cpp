#include "spin7/spin7.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <new>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "spin7/closed_form.hpp"
#include "spin7/flow.hpp"
#include "spin7/homogeneous.hpp"
#include "spin7/integrate.hpp"
#include "spin7/verify.hpp"

struct s7_model {
  spin7::CosetModel model;
};

struct s7_system {
  spin7::ODESystem sys;
};

struct s7_trajectory {
  spin7::Trajectory traj;
};

namespace {

thread_local std::string last_error;

s7_status status_of(spin7::ErrorKind k) {
  switch (k) {
    case spin7::ErrorKind::Input: return S7_ERR_INPUT;
    case spin7::ErrorKind::Domain: return S7_ERR_DOMAIN;
    case spin7::ErrorKind::Derivation: return S7_ERR_DERIVATION;
    case spin7::ErrorKind::Integration: return S7_ERR_INTEGRATION;
    case spin7::ErrorKind::Internal: return S7_ERR_INTERNAL;
  }
  return S7_ERR_INTERNAL;
}

template <class F>
s7_status guarded(F&& f) {
  last_error.clear();
  try {
    f();
    return S7_OK;
  } catch (const spin7::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return S7_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return S7_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void require(const void* p, const char* what) {
  if (!p) throw spin7::input_error(std::string("null argument: ") + what);
}

spin7::IntegratorConfig to_config(const s7_integrator_config* c) {
  spin7::IntegratorConfig cfg;
  if (!c) return cfg;
  cfg.rtol = c->rtol;
  cfg.atol = c->atol;
  cfg.initial_step = c->initial_step;
  cfg.max_step = c->max_step > 0 ? c->max_step : std::numeric_limits<double>::infinity();
  cfg.t_end = c->t_end;
  cfg.eps = c->eps;
  cfg.max_steps = c->max_steps;
  cfg.validate();
  return cfg;
}

spin7::ReportBars to_bars(const s7_bars* b) {
  spin7::ReportBars bars;
  if (!b) return bars;
  bars.closure = b->closure;
  bars.cone = b->cone;
  bars.closed_form = b->closed_form;
  return bars;
}

spin7::OrbitSpec to_spec(spin7::ModelKind kind, const char* orbit, const s7_initial_value* init, size_t count,
                         int negative_branch) {
  require(orbit, "orbit");
  if (count > 0) require(init, "initial values");
  std::map<spin7::Symbol, spin7::Rational> values;
  for (size_t i = 0; i < count; ++i) {
    require(init[i].name, "initial value name");
    require(init[i].value, "initial value");
    auto sym = spin7::symbol_from_name(init[i].name);
    if (!sym || !spin7::is_base(*sym)) throw spin7::input_error(std::string("unknown coefficient '") + init[i].name + "'");
    if (values.count(*sym)) throw spin7::input_error(std::string("coefficient given twice: ") + init[i].name);
    values[*sym] = spin7::parse_rational(init[i].value);
  }
  return spin7::OrbitSpec::make(kind, spin7::parse_orbit(orbit), values, negative_branch != 0);
}

}  // namespace

extern "C" {

const char* s7_last_error(void) { return last_error.c_str(); }

const char* s7_version(void) { return "1.0.0"; }

void s7_free_string(char* s) { std::free(s); }

void s7_integrator_config_default(s7_integrator_config* cfg) {
  if (!cfg) return;
  spin7::IntegratorConfig d;
  cfg->rtol = d.rtol;
  cfg->atol = d.atol;
  cfg->initial_step = d.initial_step;
  cfg->max_step = d.max_step;
  cfg->t_end = d.t_end;
  cfg->eps = d.eps;
  cfg->max_steps = d.max_steps;
}

void s7_bars_default(s7_bars* bars) {
  if (!bars) return;
  spin7::ReportBars d;
  bars->closure = d.closure;
  bars->cone = d.cone;
  bars->closed_form = d.closed_form;
}

s7_status s7_model_create(s7_model_kind kind, const long* indices, size_t count, s7_model** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    if (count > 0) require(indices, "indices");
    std::vector<int> idx;
    for (size_t i = 0; i < count; ++i) {
      if (indices[i] > 1000000 || indices[i] < -1000000) throw spin7::input_error("index out of range");
      idx.push_back(static_cast<int>(indices[i]));
    }
    auto m = spin7::CosetModel::make(kind == S7_MODEL_Q ? "q" : "m", idx);
    *out = new s7_model{std::move(m)};
  });
}

void s7_model_destroy(s7_model* model) { delete model; }

s7_status s7_model_name(const s7_model* model, char** out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    *out = dup_string(model->model.name());
  });
}

s7_status s7_model_kind_of(const s7_model* model, s7_model_kind* out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    *out = model->model.kind() == spin7::ModelKind::Q ? S7_MODEL_Q : S7_MODEL_M;
  });
}

s7_status s7_classify(const s7_model* model, int* admissible, int* arithmetic) {
  return guarded([&] {
    require(model, "model");
    if (admissible) *admissible = spin7::classify_invariant_g2(model->model) ? 1 : 0;
    if (arithmetic) *arithmetic = spin7::classify_arithmetic(model->model) ? 1 : 0;
  });
}

s7_status s7_derive(const s7_model* model, s7_system** out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    *out = nullptr;
    *out = new s7_system{spin7::derive_flow(model->model)};
  });
}

void s7_system_destroy(s7_system* sys) { delete sys; }

s7_status s7_system_json(const s7_system* sys, int indent, char** out) {
  return guarded([&] {
    require(sys, "system");
    require(out, "out");
    *out = dup_string(spin7::ode_system_json(sys->sys, indent));
  });
}

s7_status s7_system_text(const s7_system* sys, char** out) {
  return guarded([&] {
    require(sys, "system");
    require(out, "out");
    std::ostringstream os;
    os << sys->sys.model_name << " (rank " << sys->sys.rank << ", " << sys->sys.equations << " equations)\n";
    for (auto s : sys->sys.state) os << spin7::symbol_name(s) << "' = " << sys->sys.of(s).to_string() << '\n';
    *out = dup_string(os.str());
  });
}

s7_status s7_solve(const s7_system* sys, const char* orbit, const s7_initial_value* init, size_t count,
                   int negative_branch, const s7_integrator_config* cfg, s7_trajectory** out) {
  return guarded([&] {
    require(sys, "system");
    require(out, "out");
    *out = nullptr;
    auto spec = to_spec(sys->sys.kind, orbit, init, count, negative_branch);
    *out = new s7_trajectory{spin7::solve(sys->sys, spec, to_config(cfg))};
  });
}

void s7_trajectory_destroy(s7_trajectory* traj) { delete traj; }

s7_status s7_trajectory_read_csv(s7_model_kind kind, const char* path, s7_trajectory** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    std::ifstream in(path);
    if (!in) throw spin7::input_error(std::string("cannot open ") + path);
    *out = new s7_trajectory{spin7::read_csv(in, kind == S7_MODEL_Q ? spin7::ModelKind::Q : spin7::ModelKind::M)};
  });
}

s7_status s7_trajectory_csv(const s7_trajectory* traj, char** out) {
  return guarded([&] {
    require(traj, "trajectory");
    require(out, "out");
    std::ostringstream os;
    spin7::write_csv(traj->traj, os);
    *out = dup_string(os.str());
  });
}

size_t s7_trajectory_size(const s7_trajectory* traj) { return traj ? traj->traj.samples.size() : 0; }

s7_status s7_trajectory_sample(const s7_trajectory* traj, size_t i, double* t, double* values, size_t capacity,
                               size_t* written) {
  return guarded([&] {
    require(traj, "trajectory");
    if (i >= traj->traj.samples.size()) throw spin7::input_error("sample index out of range");
    const auto& s = traj->traj.samples[i];
    if (t) *t = s.t;
    const size_t need = s.values.size() + 1;
    if (values) {
      if (capacity < need) throw spin7::input_error("value buffer too small");
      for (size_t k = 0; k < s.values.size(); ++k) values[k] = s.values[k];
      values[s.values.size()] = s.primitive;
    }
    if (written) *written = need;
  });
}

s7_status s7_trajectory_stats(const s7_trajectory* traj, long* steps, long* rejected, char** stop) {
  return guarded([&] {
    require(traj, "trajectory");
    if (steps) *steps = traj->traj.stats.steps;
    if (rejected) *rejected = traj->traj.stats.rejected;
    if (stop) *stop = dup_string(spin7::stop_reason_name(traj->traj.stop));
  });
}

s7_status s7_closed_form_deviation(const s7_trajectory* traj, const char* orbit, const s7_initial_value* init,
                                   size_t count, double t_max, double* deviation) {
  return guarded([&] {
    require(traj, "trajectory");
    require(deviation, "deviation");
    auto spec = to_spec(traj->traj.kind, orbit, init, count, 0);
    *deviation = spin7::compare(traj->traj, spin7::Profile::from_spec(spec), t_max).max();
  });
}

s7_status s7_verify(const s7_model* model, const s7_system* sys, const s7_trajectory* traj, const char* orbit,
                    const s7_integrator_config* cfg, const s7_bars* bars, char** json, int* passed) {
  return guarded([&] {
    require(model, "model");
    require(sys, "system");
    require(traj, "trajectory");
    require(orbit, "orbit");
    require(json, "json");
    if (traj->traj.kind != model->model.kind()) throw spin7::input_error("trajectory belongs to a different model");
    auto r = spin7::verify_trajectory(model->model, sys->sys, traj->traj, spin7::parse_orbit(orbit), to_config(cfg),
                                      to_bars(bars));
    *json = dup_string(spin7::report_json(r));
    if (passed) *passed = r.passed() ? 1 : 0;
  });
}

s7_status s7_cone(const s7_trajectory* traj, double bar, char** json, int* passed) {
  return guarded([&] {
    require(traj, "trajectory");
    require(json, "json");
    auto fit = spin7::cone_fit(traj->traj);
    auto j = nlohmann::ordered_json::parse(spin7::cone_json(fit, -1));
    j["bar"] = bar;
    const bool ok = !fit.partial && fit.max_delta() <= bar;
    j["passed"] = ok;
    *json = dup_string(j.dump(2));
    if (passed) *passed = ok ? 1 : 0;
  });
}

s7_status s7_smoothness(const s7_model* model, const char* orbit, char** json, int* matches) {
  return guarded([&] {
    require(model, "model");
    require(orbit, "orbit");
    require(json, "json");
    const auto o = spin7::parse_orbit(orbit);
    auto r = spin7::smoothness_report(model->model, o);
    const auto& entry = spin7::catalog_entry(model->model.kind(), o);
    auto j = nlohmann::ordered_json::parse(spin7::smoothness_json(r, -1));
    j["expected"] = entry.expected_verdict;
    *json = dup_string(j.dump(2));
    if (matches) *matches = r.verdict() == entry.expected_verdict ? 1 : 0;
  });
}

s7_status s7_catalog(const s7_model* model, char** json) {
  return guarded([&] {
    require(model, "model");
    require(json, "json");
    auto c = spin7::orbit_catalog(model->model.kind());
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& e : c.entries) {
      std::vector<std::string> coll;
      for (auto s : e.collapsing) coll.push_back(spin7::symbol_name(s));
      j.push_back({{"isotropy_algebra", e.isotropy_algebra},
                   {"isotropy_group", e.isotropy_group},
                   {"sphere", e.sphere},
                   {"singular_orbit", e.singular_orbit},
                   {"orbit", e.orbit ? spin7::orbit_name(*e.orbit) : std::string()},
                   {"collapsing", coll},
                   {"orbifold", e.orbifold},
                   {"expected_verdict", e.expected_verdict},
                   {"remark", e.remark}});
    }
    *json = dup_string(j.dump(2));
  });
}

s7_status s7_report(const s7_model* model, const char* orbit, const s7_initial_value* init, size_t count,
                    int negative_branch, const s7_integrator_config* cfg, const s7_bars* bars, char** json,
                    int* passed) {
  return guarded([&] {
    require(model, "model");
    require(json, "json");
    auto spec = to_spec(model->model.kind(), orbit, init, count, negative_branch);
    auto config = to_config(cfg);
    auto sys = spin7::derive_flow(model->model);
    auto traj = spin7::solve(sys, spec, config);
    auto profile = spin7::Profile::from_spec(spec);
    auto r = spin7::verify_trajectory(model->model, sys, traj, spec.orbit, config, to_bars(bars), &profile);
    *json = dup_string(spin7::report_json(r));
    if (passed) *passed = r.passed() ? 1 : 0;
  });
}

}  // extern "C"
