/* C interface to the pauli2d library. Every call returns a status code;
   on failure p2d_last_error_message() describes the error for this thread. */
#ifndef PAULI2D_H
#define PAULI2D_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  P2D_OK = 0,
  P2D_ERR_CONFIG = 2,           /* invalid configuration or parameters */
  P2D_ERR_NUMERICAL = 3,        /* tolerance not reached, degenerate basis */
  P2D_ERR_DOMAIN = 4,           /* valid input outside a method's domain */
  P2D_ERR_CONTRACT = 5,         /* precondition violated by the caller */
  P2D_ERR_INVALID_ARGUMENT = 6, /* null pointer or bad size */
  P2D_ERR_INTERNAL = 7
} p2d_status;

typedef struct p2d_field p2d_field;
typedef struct p2d_operator p2d_operator;
typedef struct p2d_result p2d_result;

const char* p2d_version(void);
const char* p2d_last_error_message(void);
const char* p2d_status_name(int status);

/* Worker thread cap; 0 selects the hardware concurrency. */
p2d_status p2d_set_max_threads(int threads);
/* "trace", "debug", "info", "warn", "error", "off" */
p2d_status p2d_set_log_level(const char* level);

/* Fields from a JSON descriptor {"kind": ..., "params": {...}}. */
p2d_status p2d_field_from_json(const char* json, p2d_field** out);
void p2d_field_free(p2d_field* f);
p2d_status p2d_field_evaluate(const p2d_field* f, double x, double y, double* out);
/* Analytic flux when available (has_analytic = 1), quadrature otherwise. */
p2d_status p2d_field_flux(const p2d_field* f, double* out, int* has_analytic);
p2d_status p2d_field_quadrature_flux(const p2d_field* f, double* value, double* error);
p2d_status p2d_potential_at(const p2d_field* f, double x, double y, double* out);

/* Pauli operator on the box [-L, L]^2 with n x n nodes; spin is +1 or -1.
   Vectors hold 2 n^2 doubles: interleaved real/imag, node index j n + i. */
p2d_status p2d_operator_create(const p2d_field* f, double L, int n, double g, int spin,
                               double lambda, p2d_operator** out);
void p2d_operator_free(p2d_operator* op);
p2d_status p2d_operator_dimension(const p2d_operator* op, size_t* out);
p2d_status p2d_operator_apply(const p2d_operator* op, const double* in, double* out);
p2d_status p2d_operator_energy(const p2d_operator* op, const double* psi, double* out);
/* Lowest k eigenvalues into values[k]; converged receives 0 or 1. */
p2d_status p2d_operator_lowest_eigenvalues(const p2d_operator* op, int k, double tolerance,
                                           uint64_t seed, double* values, int* converged);

/* Runs a task ("fields", "potential", "spectrum", "certify", "weak",
   "asymptotics", "check") on a scenario config. options is a JSON object
   with an optional "seed" override, or null. A result is returned even
   when the status is P2D_ERR_NUMERICAL, so the report can be written. */
p2d_status p2d_run(const char* task, const char* config_json, const char* options_json,
                   p2d_result** out);
void p2d_result_free(p2d_result* r);
const char* p2d_result_report_name(const p2d_result* r);
const char* p2d_result_report(const p2d_result* r);
size_t p2d_result_artifact_count(const p2d_result* r);
const char* p2d_result_artifact_name(const p2d_result* r, size_t i);
const char* p2d_result_artifact_content(const p2d_result* r, size_t i);

#ifdef __cplusplus
}
#endif

#endif
