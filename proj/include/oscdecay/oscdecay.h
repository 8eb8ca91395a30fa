/* oscdecay — C API for oscillatory-integral decay analysis.
 *
 * All functions return osc_status; OSC_OK means success. On failure the
 * optional out_error receives a malloc'd message — free it (and every
 * returned string) with osc_string_free. Handles are opaque; free them
 * with their matching *_free function. All functions are thread-safe as
 * long as each handle is used from one thread at a time.
 */
#ifndef OSCDECAY_H
#define OSCDECAY_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum osc_status {
  OSC_OK = 0,
  OSC_ERR_INVALID = 1,  /* invalid argument or configuration */
  OSC_ERR_PARSE = 2,    /* phase expression could not be parsed */
  OSC_ERR_GUARD = 3,    /* a safety guard rejected the request */
  OSC_ERR_CEILING = 4,  /* lambda or grid beyond the supported ceiling */
  OSC_ERR_INTERNAL = 5  /* unexpected internal failure */
} osc_status;

/* Version string of the library ("major.minor.patch"). Static storage;
 * do not free. */
const char* osc_version(void);

/* Free any string returned through a char** out parameter. NULL is ok. */
void osc_string_free(char* s);

/* ---- Polynomial handles -------------------------------------------- */

typedef struct osc_poly osc_poly;

/* Parse a polynomial in variables x1..xd, y1..yd (and t1..td when
 * allow_tau is nonzero) over dimension dim (1..6). */
osc_status osc_poly_parse(const char* text, int dim, int allow_tau,
                          osc_poly** out, char** out_error);

void osc_poly_free(osc_poly* p);

/* Canonical text form (grammar-compatible; exact coefficients). */
osc_status osc_poly_to_string(const osc_poly* p, char** out);

/* Total degree; -1 for the zero polynomial. */
osc_status osc_poly_degree(const osc_poly* p, int* out_degree);

/* Evaluate at a point laid out as [x1..xd, y1..yd, t1..td] (len = 3*dim). */
osc_status osc_poly_evaluate(const osc_poly* p, const double* point,
                             size_t len, double* out, char** out_error);

/* ---- High-level commands ------------------------------------------- */

/* Each command takes a JSON configuration object (may be empty "{}");
 * omitted keys take documented defaults. The full resolved configuration
 * is echoed inside the returned JSON report, so a report can be replayed.
 *
 * analyze: parse a phase, form the shift-difference mixed Hessian, scan
 *          all minors, estimate sublevel decay, and predict a decay rate.
 * verify:  evaluate the trilinear oscillatory integral on a geometric
 *          lambda ladder for a test-function family and fit the observed
 *          decay slope.
 * table:   run the analyze pipeline on the built-in benchmark phases and
 *          compare against their nominal exponents.
 */
osc_status osc_analyze(const char* config_json, char** out_report,
                       char** out_error);
osc_status osc_verify(const char* config_json, char** out_report,
                      char** out_error);
osc_status osc_table(const char* config_json, char** out_report,
                     char** out_error);

/* Render a JSON report produced by the commands above as CSV. */
osc_status osc_report_csv(const char* report_json, char** out_csv,
                          char** out_error);

#ifdef __cplusplus
}
#endif

#endif /* OSCDECAY_H */
