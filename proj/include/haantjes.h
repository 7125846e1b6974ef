/*
 * C interface to the haantjes library: model loading, verification runs,
 * report access, and standalone expression evaluation.
 *
 * Conventions: every function that can fail returns an hj_status; HJ_OK is
 * zero. On failure, hj_last_error() returns a message for the calling
 * thread. Output handles are written only on HJ_OK and must be released
 * with the matching hj_*_free function. Strings returned through char**
 * are released with hj_string_free.
 */
#ifndef HAANTJES_H
#define HAANTJES_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hj_status {
  HJ_OK = 0,
  HJ_ERROR_PARSE = 1,            /* malformed expression or model text */
  HJ_ERROR_INVALID_ARGUMENT = 2, /* structural precondition failed */
  HJ_ERROR_DOMAIN = 3,           /* evaluation left a function's domain */
  HJ_ERROR_IO = 4,               /* file not readable */
  HJ_ERROR_INTERNAL = 5
} hj_status;

typedef struct hj_model hj_model;
typedef struct hj_report hj_report;
typedef struct hj_expression hj_expression;

/* Message of the calling thread's most recent failure; "" when none. */
const char* hj_last_error(void);

const char* hj_version(void);

/*
 * Parameter bindings are parallel arrays of `param_count` names and values;
 * pass NULL, NULL, 0 for none. File models: bindings override `param` lines
 * before expressions are parsed. Builtins: "calogero3" takes a; "goldfish"
 * takes n, a, b.
 */
hj_status hj_model_open_file(const char* path, const char* const* param_names,
                             const double* param_values, size_t param_count, hj_model** out);
hj_status hj_model_open_builtin(const char* id, const char* const* param_names,
                                const double* param_values, size_t param_count, hj_model** out);
void hj_model_free(hj_model* m);

typedef struct hj_verify_options {
  const char* suite; /* structure, chains, involution, killing, independence, all; NULL = all */
  int samples;       /* number of sampled points; <= 0 selects 100 */
  unsigned long long seed;
  double tol; /* > 0 replaces the default tolerance of every asserted check */
} hj_verify_options;

/* Runs the suite; opt == NULL uses the defaults above with seed 7. */
hj_status hj_verify(const hj_model* m, const hj_verify_options* opt, hj_report** out);

typedef struct hj_check {
  const char* id;   /* borrowed from the report */
  const char* note; /* borrowed from the report, "" when empty */
  int samples;
  double residual;
  double tol;
  int pass;
  int asserted; /* 0 marks measured-only records that never fail a run */
} hj_check;

size_t hj_report_count(const hj_report* r);
hj_status hj_report_check(const hj_report* r, size_t index, hj_check* out);
int hj_report_passed(const hj_report* r); /* 1 iff every asserted check passed */
/* format is "text" or "machine". */
hj_status hj_report_render(const hj_report* r, const char* format, char** out);
void hj_report_free(hj_report* r);
void hj_string_free(char* s);

/*
 * Expressions over canonical coordinates q1..qn, p1..pn with n = n_dof.
 * Coordinate layouts below are flat arrays [q1..qn, p1..pn] of length
 * 2*n_dof, and n_dof must match the value used at parse time.
 */
hj_status hj_expression_parse(const char* text, int n_dof, const char* const* param_names,
                              const double* param_values, size_t param_count,
                              hj_expression** out);
hj_status hj_expression_eval(const hj_expression* e, const double* coords, int n_dof,
                             double* out_value);
/* out_gradient receives 2*n_dof partials in coordinate order. */
hj_status hj_expression_gradient(const hj_expression* e, const double* coords, int n_dof,
                                 double* out_value, double* out_gradient);
void hj_expression_free(hj_expression* e);

#ifdef __cplusplus
}
#endif

#endif /* HAANTJES_H */
