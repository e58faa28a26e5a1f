/* C interface to the spin7 library: opaque handles, status codes, heap strings. */
#ifndef SPIN7_SPIN7_H
#define SPIN7_SPIN7_H

#include <stddef.h>

#if defined(_WIN32)
#define S7_API __declspec(dllexport)
#else
#define S7_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum s7_status {
  S7_OK = 0,
  S7_ERR_INPUT = 1,
  S7_ERR_DOMAIN = 2,
  S7_ERR_DERIVATION = 3,
  S7_ERR_INTEGRATION = 4,
  S7_ERR_INTERNAL = 5
} s7_status;

typedef enum s7_model_kind { S7_MODEL_Q = 0, S7_MODEL_M = 1 } s7_model_kind;

typedef struct s7_model s7_model;
typedef struct s7_system s7_system;
typedef struct s7_trajectory s7_trajectory;

typedef struct s7_integrator_config {
  double rtol;
  double atol;
  double initial_step; /* 0: automatic */
  double max_step;     /* <= 0 or inf: unbounded */
  double t_end;
  double eps; /* series-start offset, 0: 1e-6 * min |initial value| */
  long max_steps;
} s7_integrator_config;

/* Initial value of one coefficient ("a", "b", "c", "f") as an exact rational string ("1", "-3/2", "0.5"). */
typedef struct s7_initial_value {
  const char* name;
  const char* value;
} s7_initial_value;

typedef struct s7_bars {
  double closure;
  double cone;
  double closed_form;
} s7_bars;

/* Message of the last failed call on this thread ("" if none). Valid until the next call. */
S7_API const char* s7_last_error(void);
S7_API const char* s7_version(void);
S7_API void s7_free_string(char* s);

S7_API void s7_integrator_config_default(s7_integrator_config* cfg);
S7_API void s7_bars_default(s7_bars* bars);

/* indices: (k,l,m) for Q, (k,l) for M. */
S7_API s7_status s7_model_create(s7_model_kind kind, const long* indices, size_t count, s7_model** out);
S7_API void s7_model_destroy(s7_model* model);
S7_API s7_status s7_model_name(const s7_model* model, char** out);
S7_API s7_status s7_model_kind_of(const s7_model* model, s7_model_kind* out);
/* Invariant G2-structure admissibility, computed from isotropy weights; arithmetic cross-check separately. */
S7_API s7_status s7_classify(const s7_model* model, int* admissible, int* arithmetic);

S7_API s7_status s7_derive(const s7_model* model, s7_system** out);
S7_API void s7_system_destroy(s7_system* sys);
S7_API s7_status s7_system_json(const s7_system* sys, int indent, char** out);
S7_API s7_status s7_system_text(const s7_system* sys, char** out);

/* Integrates from the singular orbit (or principal data) named by `orbit`. */
S7_API s7_status s7_solve(const s7_system* sys, const char* orbit, const s7_initial_value* init, size_t count,
                          int negative_branch, const s7_integrator_config* cfg, s7_trajectory** out);
S7_API void s7_trajectory_destroy(s7_trajectory* traj);
S7_API s7_status s7_trajectory_read_csv(s7_model_kind kind, const char* path, s7_trajectory** out);
S7_API s7_status s7_trajectory_csv(const s7_trajectory* traj, char** out);
S7_API size_t s7_trajectory_size(const s7_trajectory* traj);
/* Sample i: t, then coefficients, then the primitive; `values` must hold `capacity` doubles. */
S7_API s7_status s7_trajectory_sample(const s7_trajectory* traj, size_t i, double* t, double* values, size_t capacity,
                                      size_t* written);
/* Steps, rejected steps and the stop reason ("completed", "zero-crossing", ...). */
S7_API s7_status s7_trajectory_stats(const s7_trajectory* traj, long* steps, long* rejected, char** stop);

/* Max relative deviation from the closed form over samples with t <= t_max (init as in s7_solve). */
S7_API s7_status s7_closed_form_deviation(const s7_trajectory* traj, const char* orbit, const s7_initial_value* init,
                                          size_t count, double t_max, double* deviation);

/* Report JSON for one trajectory; `passed` is 1 when every bar holds. orbit may be "principal". */
S7_API s7_status s7_verify(const s7_model* model, const s7_system* sys, const s7_trajectory* traj, const char* orbit,
                           const s7_integrator_config* cfg, const s7_bars* bars, char** json, int* passed);
S7_API s7_status s7_cone(const s7_trajectory* traj, double bar, char** json, int* passed);
/* `matches` is 1 when the verdict agrees with the singular-orbit catalog. */
S7_API s7_status s7_smoothness(const s7_model* model, const char* orbit, char** json, int* matches);
S7_API s7_status s7_catalog(const s7_model* model, char** json);
/* Full pipeline: derive, solve, verify, closed-form comparison. */
S7_API s7_status s7_report(const s7_model* model, const char* orbit, const s7_initial_value* init, size_t count,
                           int negative_branch, const s7_integrator_config* cfg, const s7_bars* bars, char** json,
                           int* passed);

#ifdef __cplusplus
}
#endif

#endif
