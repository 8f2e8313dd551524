#ifndef FOMCELL_FOMCELL_H
#define FOMCELL_FOMCELL_H

/* C interface to the fractional-order cell library. Every function returns a
 * fomcell_status; on failure fomcell_last_error() describes the problem for
 * the calling thread. Handles are opaque and owned by the caller; strings
 * returned through out-parameters are released with fomcell_free_string. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef FOMCELL_BUILDING_LIBRARY
#    define FOMCELL_API __declspec(dllexport)
#  else
#    define FOMCELL_API __declspec(dllimport)
#  endif
#else
#  define FOMCELL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fomcell_status {
  FOMCELL_OK = 0,
  FOMCELL_INVALID_ARGUMENT = 1,
  FOMCELL_DOMAIN = 2,
  FOMCELL_RANGE = 3,
  FOMCELL_NONFINITE = 4,
  FOMCELL_IO = 5,
  FOMCELL_PARSE = 6,
  FOMCELL_INTERNAL = 99
} fomcell_status;

typedef struct fomcell_model fomcell_model;
typedef struct fomcell_table fomcell_table;

FOMCELL_API const char* fomcell_status_name(fomcell_status s);
/* Message of the last failed call on this thread; "" if none. */
FOMCELL_API const char* fomcell_last_error(void);
FOMCELL_API const char* fomcell_version(void);
FOMCELL_API void fomcell_free_string(char* s);

/* ---- Mittag-Leffler ---- */

typedef struct fomcell_ml_result {
  double value;
  int32_t terms_used;
  int32_t converged; /* 0 or 1 */
  int32_t method;    /* 0 series, 1 integral, 2 extended series */
} fomcell_ml_result;

/* beta == 1 gives the one-parameter function. */
FOMCELL_API fomcell_status fomcell_ml_eval(double alpha, double beta, double z, double tol, int32_t max_terms,
                                           fomcell_ml_result* out);
FOMCELL_API fomcell_status fomcell_gamma(double x, double* out);

/* ---- models ---- */

FOMCELL_API fomcell_status fomcell_model_from_json(const char* json, fomcell_model** out);
FOMCELL_API fomcell_status fomcell_model_load(const char* path, fomcell_model** out);
FOMCELL_API fomcell_status fomcell_model_to_json(const fomcell_model* m, char** out);
FOMCELL_API fomcell_status fomcell_model_save(const fomcell_model* m, const char* path);
FOMCELL_API void fomcell_model_free(fomcell_model* m);

/* ---- tables (column-major, named columns) ---- */

FOMCELL_API fomcell_status fomcell_table_create(fomcell_table** out);
FOMCELL_API fomcell_status fomcell_table_read_csv(const char* path, fomcell_table** out);
FOMCELL_API fomcell_status fomcell_table_write_csv(const fomcell_table* t, const char* path);
FOMCELL_API fomcell_status fomcell_table_add_column(fomcell_table* t, const char* name, const double* values,
                                                    size_t n);
FOMCELL_API size_t fomcell_table_rows(const fomcell_table* t);
FOMCELL_API size_t fomcell_table_columns(const fomcell_table* t);
/* Pointer stays valid until the table is modified or freed. */
FOMCELL_API fomcell_status fomcell_table_column(const fomcell_table* t, const char* name, const double** data,
                                                size_t* n);
FOMCELL_API const char* fomcell_table_column_name(const fomcell_table* t, size_t idx);
FOMCELL_API void fomcell_table_free(fomcell_table* t);

/* ---- simulation ---- */

typedef enum fomcell_method { FOMCELL_CAPUTO = 0, FOMCELL_GL = 1, FOMCELL_ANALYTIC = 2 } fomcell_method;

typedef struct fomcell_sim_options {
  fomcell_method method;
  int32_t memory; /* G-L memory length N */
  double tol;     /* Mittag-Leffler tolerance */
  double soc0;    /* NaN: the model document's soc0, else 0.5 */
} fomcell_sim_options;

FOMCELL_API fomcell_sim_options fomcell_sim_options_default(void);

/* trace needs columns t and i; out gets t, i, v, soc, u1..un. */
FOMCELL_API fomcell_status fomcell_simulate(const fomcell_model* m, const fomcell_table* trace,
                                            const fomcell_sim_options* opt, fomcell_table** out);

typedef struct fomcell_report {
  double rmse;
  double mae;
  double max_abs_err;
  double runtime_per_step;
  size_t peak_history_len;
  size_t samples;
} fomcell_report;

FOMCELL_API fomcell_status fomcell_evaluate(const double* pred, const double* meas, size_t n, fomcell_report* out);

/* Caputo vs. G-L comparison on trace (columns t, i); JSON report in *out. */
FOMCELL_API fomcell_status fomcell_benchmark(const fomcell_model* m, const fomcell_table* trace, int32_t memory,
                                             double tol, double soc0, int32_t repeats, char** out);

/* Synthetic data from a protocol JSON document. *table gets t, i, v (noisy)
 * and v_true; *truth_json gets {model, protocol, states}. */
FOMCELL_API fomcell_status fomcell_generate(const fomcell_model* m, const char* protocol_json, fomcell_table** table,
                                            char** truth_json);

/* HPPC identification. ocv_discharge may be NULL, in which case ocv_charge
 * (columns soc, v) is used as the OCV table directly. *model_json receives
 * the identified model; *report_jsonl one JSON line per segment. */
FOMCELL_API fomcell_status fomcell_identify(const fomcell_table* trace, const fomcell_table* ocv_charge,
                                            const fomcell_table* ocv_discharge, const char* config_json,
                                            char** model_json, char** report_jsonl);

#ifdef __cplusplus
}
#endif

#endif
