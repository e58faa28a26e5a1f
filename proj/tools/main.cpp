// Command-line front end; talks to the library through the C interface only.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spin7/spin7.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInvalid = 2;

struct Failure {
  int code;
};

int exit_code(s7_status s) { return (s == S7_ERR_INPUT || s == S7_ERR_DOMAIN) ? kExitInvalid : kExitCheckFailed; }

void check(s7_status s) {
  if (s == S7_OK) return;
  std::cerr << "error: " << s7_last_error() << '\n';
  throw Failure{exit_code(s)};
}

struct StringDeleter {
  void operator()(char* p) const { s7_free_string(p); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct ModelDeleter {
  void operator()(s7_model* p) const { s7_model_destroy(p); }
};
struct SystemDeleter {
  void operator()(s7_system* p) const { s7_system_destroy(p); }
};
struct TrajectoryDeleter {
  void operator()(s7_trajectory* p) const { s7_trajectory_destroy(p); }
};
using Model = std::unique_ptr<s7_model, ModelDeleter>;
using System = std::unique_ptr<s7_system, SystemDeleter>;
using Trajectory = std::unique_ptr<s7_trajectory, TrajectoryDeleter>;

struct ModelOptions {
  std::string model;
  long k = 1, l = 1;
  std::optional<long> m;  // shared by all subcommands, so presence is tracked here
};

struct InitOptions {
  std::string orbit;
  std::optional<std::string> a0, b0, c0, f0;
  bool negative_branch = false;
};

struct ConfigOptions {
  s7_integrator_config cfg{};
  double max_step = 0;
};

struct BarOptions {
  s7_bars bars{};
};

void add_model(CLI::App* app, ModelOptions& o) {
  app->add_option("--model", o.model, "Model family: q (Q^{k,l,m}) or m (M^{k,l,0})")
      ->required()
      ->check(CLI::IsMember({"q", "m", "Q", "M"}));
  app->add_option("--k", o.k, "First embedding index")->capture_default_str();
  app->add_option("--l", o.l, "Second embedding index")->capture_default_str();
  app->add_option("--m", o.m, "Third embedding index (model q only, default 1)");
}

void add_init(CLI::App* app, InitOptions& o, bool orbit_required = true) {
  auto* opt = app->add_option("--orbit", o.orbit,
                              "Orbit: s2xs2xs2, s2xs2 (q); cp2xs2, cp2, s2 (m); principal");
  if (orbit_required) opt->required();
  app->add_option("--a0", o.a0, "Initial a (exact rational)");
  app->add_option("--b0", o.b0, "Initial b");
  app->add_option("--c0", o.c0, "Initial c");
  app->add_option("--f0", o.f0, "Initial f (model q)");
  app->add_flag("--negative-branch", o.negative_branch, "Take the negative sign for the odd collapsing coefficient");
}

void add_config(CLI::App* app, ConfigOptions& o) {
  s7_integrator_config_default(&o.cfg);
  app->add_option("--rtol", o.cfg.rtol, "Relative tolerance")->capture_default_str();
  app->add_option("--atol", o.cfg.atol, "Absolute tolerance")->capture_default_str();
  app->add_option("--t-end", o.cfg.t_end, "Final arclength")->capture_default_str();
  app->add_option("--eps", o.cfg.eps, "Series-start offset (0: 1e-6 * min |initial value|)")->capture_default_str();
  app->add_option("--initial-step", o.cfg.initial_step, "Initial step (0: automatic)")->capture_default_str();
  app->add_option("--max-step", o.max_step, "Maximum step (0: unbounded)")->capture_default_str();
  app->add_option("--max-steps", o.cfg.max_steps, "Maximum number of attempted steps")->capture_default_str();
}

void add_bars(CLI::App* app, BarOptions& o) {
  s7_bars_default(&o.bars);
  app->add_option("--closure-bar", o.bars.closure, "Bar for normalized d(Omega), d(eta) residuals")->capture_default_str();
  app->add_option("--cone-bar", o.bars.cone, "Bar for cone-limit deviations")->capture_default_str();
  app->add_option("--closed-form-bar", o.bars.closed_form, "Bar for closed-form deviation (report)")
      ->capture_default_str();
}

s7_model_kind kind_of(const ModelOptions& o) { return (o.model == "q" || o.model == "Q") ? S7_MODEL_Q : S7_MODEL_M; }

Model make_model(const ModelOptions& o) {
  std::vector<long> idx = {o.k, o.l};
  if (kind_of(o) == S7_MODEL_Q) {
    idx.push_back(o.m.value_or(1));
  } else if (o.m) {
    std::cerr << "error: --m applies to model q only\n";
    throw Failure{kExitInvalid};
  }
  s7_model* m = nullptr;
  check(s7_model_create(kind_of(o), idx.data(), idx.size(), &m));
  return Model(m);
}

System derive(const s7_model* m) {
  s7_system* s = nullptr;
  check(s7_derive(m, &s));
  return System(s);
}

std::vector<s7_initial_value> init_values(const InitOptions& o) {
  std::vector<s7_initial_value> v;
  if (o.a0) v.push_back({"a", o.a0->c_str()});
  if (o.b0) v.push_back({"b", o.b0->c_str()});
  if (o.c0) v.push_back({"c", o.c0->c_str()});
  if (o.f0) v.push_back({"f", o.f0->c_str()});
  return v;
}

s7_integrator_config config_of(const ConfigOptions& o) {
  s7_integrator_config c = o.cfg;
  c.max_step = o.max_step > 0 ? o.max_step : std::numeric_limits<double>::infinity();
  return c;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << '\n';
    throw Failure{kExitInvalid};
  }
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
  if (!out) {
    std::cerr << "error: write to " << path << " failed\n";
    throw Failure{kExitCheckFailed};
  }
}

Trajectory solve(const s7_system* sys, const InitOptions& init, const ConfigOptions& cfg) {
  auto values = init_values(init);
  auto c = config_of(cfg);
  s7_trajectory* t = nullptr;
  check(s7_solve(sys, init.orbit.c_str(), values.data(), values.size(), init.negative_branch ? 1 : 0, &c, &t));
  return Trajectory(t);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Derive, integrate and verify cohomogeneity-one Spin(7) metrics on Q(1,1,1) and M(1,1,0) cones"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(s7_version()));

  ModelOptions model;
  InitOptions init;
  ConfigOptions config;
  BarOptions bars;
  std::string out_path, in_path;
  bool as_json = false;

  auto* classify = app.add_subcommand("classify", "Admissibility of (k,l,m) / (k,l) for invariant G2-structures");
  add_model(classify, model);

  auto* derive_cmd = app.add_subcommand("derive", "Derive the ODE system from d(Omega) = 0");
  add_model(derive_cmd, model);
  derive_cmd->add_flag("--json", as_json, "Print the system as JSON");
  derive_cmd->add_option("--out", out_path, "Output file (default stdout)");

  auto* solve_cmd = app.add_subcommand("solve", "Integrate from singular-orbit data and write a trajectory CSV");
  add_model(solve_cmd, model);
  add_init(solve_cmd, init);
  add_config(solve_cmd, config);
  solve_cmd->add_option("--out", out_path, "CSV output file (default stdout)");

  auto* verify_cmd = app.add_subcommand("verify", "Check a trajectory CSV and write the verification report JSON");
  add_model(verify_cmd, model);
  add_init(verify_cmd, init);
  add_config(verify_cmd, config);
  add_bars(verify_cmd, bars);
  verify_cmd->add_option("--in", in_path, "Trajectory CSV")->required();
  verify_cmd->add_option("--out", out_path, "Report output file (default stdout)");

  auto* cone_cmd = app.add_subcommand("cone", "Fit the asymptotic cone limits (from --in CSV or a fresh run)");
  add_model(cone_cmd, model);
  add_init(cone_cmd, init, false);
  add_config(cone_cmd, config);
  add_bars(cone_cmd, bars);
  cone_cmd->add_option("--in", in_path, "Trajectory CSV (default: integrate the orbit spec)");
  cone_cmd->add_option("--out", out_path, "Output file (default stdout)");

  auto* smooth_cmd = app.add_subcommand("smoothness", "Limiting derivatives against the smoothness requirements");
  add_model(smooth_cmd, model);
  smooth_cmd->add_option("--orbit", init.orbit, "Singular orbit")->required();
  smooth_cmd->add_option("--out", out_path, "Output file (default stdout)");

  auto* report_cmd = app.add_subcommand("report", "Full pipeline for one orbit spec");
  add_model(report_cmd, model);
  add_init(report_cmd, init);
  add_config(report_cmd, config);
  add_bars(report_cmd, bars);
  report_cmd->add_option("--out", out_path, "Report output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    Model m = make_model(model);

    if (classify->parsed()) {
      OwnedString name;
      char* raw = nullptr;
      check(s7_model_name(m.get(), &raw));
      name.reset(raw);
      int admissible = 0, arithmetic = 0;
      check(s7_classify(m.get(), &admissible, &arithmetic));
      std::cout << "model: " << name.get() << '\n'
                << "admissible: " << (admissible ? "true" : "false") << '\n'
                << "arithmetic check: " << (arithmetic ? "true" : "false") << '\n';
      return admissible == arithmetic ? kExitOk : kExitCheckFailed;
    }

    System sys = derive(m.get());

    if (derive_cmd->parsed()) {
      char* raw = nullptr;
      check(as_json ? s7_system_json(sys.get(), 2, &raw) : s7_system_text(sys.get(), &raw));
      OwnedString text(raw);
      emit(text.get(), out_path);
      return kExitOk;
    }

    if (solve_cmd->parsed()) {
      Trajectory t = solve(sys.get(), init, config);
      char* raw = nullptr;
      check(s7_trajectory_csv(t.get(), &raw));
      OwnedString csv(raw);
      emit(csv.get(), out_path);
      char* stop = nullptr;
      long steps = 0, rejected = 0;
      check(s7_trajectory_stats(t.get(), &steps, &rejected, &stop));
      OwnedString stop_name(stop);
      std::cerr << "steps " << steps << ", rejected " << rejected << ", stop " << stop_name.get() << '\n';
      return kExitOk;
    }

    if (verify_cmd->parsed()) {
      s7_model_kind kind;
      check(s7_model_kind_of(m.get(), &kind));
      s7_trajectory* raw_t = nullptr;
      check(s7_trajectory_read_csv(kind, in_path.c_str(), &raw_t));
      Trajectory t(raw_t);
      auto c = config_of(config);
      char* raw = nullptr;
      int passed = 0;
      check(s7_verify(m.get(), sys.get(), t.get(), init.orbit.c_str(), &c, &bars.bars, &raw, &passed));
      OwnedString json(raw);
      emit(json.get(), out_path);
      return passed ? kExitOk : kExitCheckFailed;
    }

    if (cone_cmd->parsed()) {
      Trajectory t;
      if (!in_path.empty()) {
        s7_model_kind kind;
        check(s7_model_kind_of(m.get(), &kind));
        s7_trajectory* raw_t = nullptr;
        check(s7_trajectory_read_csv(kind, in_path.c_str(), &raw_t));
        t.reset(raw_t);
      } else {
        if (init.orbit.empty()) {
          std::cerr << "error: cone needs --in or --orbit\n";
          return kExitInvalid;
        }
        t = solve(sys.get(), init, config);
      }
      char* raw = nullptr;
      int passed = 0;
      check(s7_cone(t.get(), bars.bars.cone, &raw, &passed));
      OwnedString json(raw);
      emit(json.get(), out_path);
      return passed ? kExitOk : kExitCheckFailed;
    }

    if (smooth_cmd->parsed()) {
      char* raw = nullptr;
      int matches = 0;
      check(s7_smoothness(m.get(), init.orbit.c_str(), &raw, &matches));
      OwnedString json(raw);
      emit(json.get(), out_path);
      return matches ? kExitOk : kExitCheckFailed;
    }

    if (report_cmd->parsed()) {
      auto values = init_values(init);
      auto c = config_of(config);
      char* raw = nullptr;
      int passed = 0;
      check(s7_report(m.get(), init.orbit.c_str(), values.data(), values.size(), init.negative_branch ? 1 : 0, &c,
                      &bars.bars, &raw, &passed));
      OwnedString json(raw);
      emit(json.get(), out_path);
      return passed ? kExitOk : kExitCheckFailed;
    }
  } catch (const Failure& f) {
    return f.code;
  }
  return kExitInvalid;
}
