/*
 * C interface to the constrained Fisher market library.
 *
 * Every fallible call returns a cfm_status; on failure cfm_last_error()
 * describes the problem for the calling thread. Strings returned through
 * char** out-parameters are owned by the caller and released with
 * cfm_string_free(). Instances are immutable once created and may be shared
 * between threads.
 */
#ifndef CFM_CFM_H
#define CFM_CFM_H

#include <stddef.h>
#include <stdint.h>

#if defined(CFM_BUILDING_LIBRARY)
#define CFM_API __attribute__((visibility("default")))
#else
#define CFM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cfm_status {
  CFM_OK = 0,
  CFM_INVALID_ARGUMENT = 1,
  CFM_PARSE_ERROR = 2,
  CFM_VALIDATION_FAILED = 3,
  CFM_UNKNOWN_NAME = 4,
  CFM_INFEASIBLE = 5,
  CFM_UNBOUNDED_DEMAND = 6,
  CFM_LOG_DOMAIN = 7,
  CFM_NOT_AT_FIXED_POINT = 8,
  CFM_DIMENSION_MISMATCH = 9,
  CFM_GRID_TOO_LARGE = 10,
  CFM_IO_ERROR = 11,
  CFM_SOLVER_FAILURE = 12,
  CFM_OUT_OF_MEMORY = 98,
  CFM_INTERNAL_ERROR = 99
} cfm_status;

typedef struct cfm_instance cfm_instance;

typedef struct cfm_options {
  double solver_tol;        /* interior-point tolerance, default 1e-8 */
  size_t solver_max_iter;   /* default 200 */
  double eps;               /* fixed-point tolerance, default 1e-6 */
  size_t fp_max_iter;       /* default 500 */
  double tol_clearing;      /* default 1e-5 */
  double tol_budget;        /* default 1e-5 */
  double tol_opt;           /* default 1e-6 */
  uint64_t seed;            /* builtin experiment draw, default 1 */
} cfm_options;

CFM_API void cfm_options_init(cfm_options* opts);

CFM_API const char* cfm_version(void);
CFM_API const char* cfm_status_name(cfm_status status);
/* Message of the last failing call on this thread; "" if none. */
CFM_API const char* cfm_last_error(void);
CFM_API void cfm_string_free(char* s);

/* ---- instances ---- */

CFM_API cfm_status cfm_instance_from_json(const char* json, cfm_instance** out);
CFM_API cfm_status cfm_instance_load(const char* path, cfm_instance** out);
/* prop1, prop2, iop_ex1, iop_ex2, experiment (seed used by experiment) */
CFM_API cfm_status cfm_instance_builtin(const char* name, uint64_t seed, cfm_instance** out);
/* type_spec: "KxS" or "none"; capacity <= 0 selects the default rule. */
CFM_API cfm_status cfm_instance_random(uint64_t seed, size_t n_agents, size_t n_goods,
                                       const char* type_spec, double budget_lo,
                                       double budget_hi, double utility_lo,
                                       double utility_hi, double capacity,
                                       cfm_instance** out);
CFM_API void cfm_instance_free(cfm_instance* inst);

CFM_API size_t cfm_instance_agents(const cfm_instance* inst);
CFM_API size_t cfm_instance_goods(const cfm_instance* inst);
CFM_API size_t cfm_instance_types(const cfm_instance* inst);
/* Exact (round-trip) JSON serialization. */
CFM_API cfm_status cfm_instance_to_json(const cfm_instance* inst, char** out);

/* ---- operations; *_json outputs may be NULL when not wanted ---- */

/* *ok = 1 iff the report has no errors. */
CFM_API cfm_status cfm_validate(const cfm_instance* inst, int* ok, char** report_json);

/* lambda may be NULL for the unperturbed program; otherwise it has
 * n_lambda == agents entries. *solved = 1 on a converged solve. */
CFM_API cfm_status cfm_solve(const cfm_instance* inst, const double* lambda, size_t n_lambda,
                             const cfm_options* opts, int* solved, char** result_json);

/* *converged = 1 iff the iteration met eps. trace_csv receives the
 * iter,residual,lambda_1..lambda_n table. */
CFM_API cfm_status cfm_fixed_point(const cfm_instance* inst, const cfm_options* opts,
                                   int* converged, char** result_json, char** trace_csv);

CFM_API cfm_status cfm_demand(const cfm_instance* inst, size_t agent, const double* prices,
                              size_t n_prices, char** result_json);

/* allocation is row-major agents x goods. */
CFM_API cfm_status cfm_check_equilibrium(const cfm_instance* inst, const double* prices,
                                         size_t n_prices, const double* allocation,
                                         size_t n_allocation, const cfm_options* opts,
                                         int* pass, char** report_json);

/* Same with JSON text inputs: prices as an array or an object with
 * "prices"; the allocation as an array of rows or an object with
 * "allocation" (for example a results document). */
CFM_API cfm_status cfm_check_equilibrium_json(const cfm_instance* inst,
                                              const char* prices_json,
                                              const char* allocation_json,
                                              const cfm_options* opts, int* pass,
                                              char** report_json);

CFM_API cfm_status cfm_sop1_budget_gap(const cfm_instance* inst, const cfm_options* opts,
                                       int* witness, char** report_json);

CFM_API cfm_status cfm_grid_scan(const cfm_instance* inst, double p_max, double step,
                                 char** report_json);

/* prop1, prop2, iop_ex1, iop_ex2, experiment, sop1_gap */
CFM_API cfm_status cfm_reproduce(const char* name, const cfm_options* opts, int* pass,
                                 char** table, char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* CFM_CFM_H */
