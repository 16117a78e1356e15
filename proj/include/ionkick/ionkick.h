#ifndef IONKICK_H
#define IONKICK_H

/* C API of the ionkick engine. All entry points are thread-compatible: a
 * context (and any handle created from it) must not be shared across threads
 * without external locking, but distinct contexts are independent.
 *
 * Status codes: 0 = ok, 2 = config error, 3 = numeric error, 4 = i/o error.
 * On any nonzero status the context holds a message (ik_last_error). */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define IK_API __declspec(dllexport)
#else
#define IK_API __attribute__((visibility("default")))
#endif

enum {
  IK_OK = 0,
  IK_ERR_CONFIG = 2,
  IK_ERR_NUMERIC = 3,
  IK_ERR_IO = 4
};

typedef struct ik_context ik_context;
typedef struct ik_sequence ik_sequence;

IK_API ik_context* ik_context_create(void);
IK_API void ik_context_destroy(ik_context* ctx);

/* Message from the most recent failed call on this context; empty string if
 * the last call succeeded. Owned by the context, valid until the next call. */
IK_API const char* ik_last_error(const ik_context* ctx);

/* Library version, e.g. "1.0.0". */
IK_API const char* ik_version(void);

/* A complete example configuration (static storage, do not free). */
IK_API const char* ik_example_config(void);

/* Parses and validates a JSON configuration. overrides is an array of
 * n_overrides dotted `section.key=value` strings (may be NULL when 0); an
 * override of `experiment=...` switches the experiment. On success writes the
 * 16-hex-digit config hash plus NUL into hash_out when it is non-NULL
 * (hash_cap must then be >= 17). */
IK_API int ik_validate_config(ik_context* ctx, const char* json_text,
                              const char* const* overrides, int n_overrides,
                              char* hash_out, size_t hash_cap);

/* Runs the configured experiment, writing its artifacts under out_dir
 * (created if missing; NULL or "" means the current directory). threads <= 0
 * selects hardware concurrency. On success copies a one-line summary into
 * summary_out (truncated to summary_cap - 1 characters) when non-NULL. */
IK_API int ik_run_config(ik_context* ctx, const char* json_text,
                         const char* const* overrides, int n_overrides,
                         const char* out_dir, int threads,
                         char* summary_out, size_t summary_cap);

/* Same, reading the configuration from a file. */
IK_API int ik_run_file(ik_context* ctx, const char* config_path,
                       const char* const* overrides, int n_overrides,
                       const char* out_dir, int threads,
                       char* summary_out, size_t summary_cap);

/* Cumulative spin fidelity of a gate built from np pulse pairs, each with
 * transfer error eps: |1 - 2*np*eps + np^2*eps^2|. */
IK_API double ik_cumulative_fidelity(double eps, int np);

/* Solves the kick timings of scheme ("gzc" or "frag") at repetition n for a
 * trap with COM angular frequency omega (rad/s) and Lamb-Dicke parameter eta.
 * seed3 optionally supplies the three timing magnitudes (tau1 < tau2 < tau3,
 * seconds); pass NULL for automatic seeding. Returns NULL on failure. */
IK_API ik_sequence* ik_sequence_solve(ik_context* ctx, const char* scheme,
                                      int n, double omega, double eta,
                                      const double* seed3);
IK_API void ik_sequence_destroy(ik_sequence* seq);

/* Indices into the report array of ik_sequence_report. */
enum {
  IK_REP_TAU1 = 0,
  IK_REP_TAU2,
  IK_REP_TAU3,
  IK_REP_RESIDUAL,
  IK_REP_GATE_TIME,
  IK_REP_PHASE,
  IK_REP_ALPHA_COM_ABS,
  IK_REP_ALPHA_STRETCH_ABS,
  IK_REP_ONE_MINUS_FO,
  IK_REP_PULSE_PAIRS,
  IK_REP_COUNT
};

IK_API int ik_sequence_report(ik_context* ctx, const ik_sequence* seq,
                              double out[IK_REP_COUNT]);

/* Phase-EOM sideband amplitudes J_n(beta): fills out[0..2*n_max] with orders
 * -n_max .. +n_max. */
IK_API int ik_bessel_sidebands(ik_context* ctx, double beta, int n_max,
                               double* out);

#ifdef __cplusplus
}
#endif

#endif /* IONKICK_H */
