/* C interface of the ifd shared library.
 *
 * A scenario is parsed from JSON text into an opaque handle, optionally
 * adjusted (output directory, grid override, worker count), and run. All
 * functions returning int use the process exit-code contract:
 *   0 success, 2 invalid configuration, 3 numerical failure,
 *   4 infeasible environment where feasibility was required.
 * On any nonzero return ifd_last_error() describes the failure; the message
 * is thread-local and valid until the next ifd_* call on that thread.
 */
#ifndef IFD_IFD_H
#define IFD_IFD_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ifd_scenario ifd_scenario;

/* Parses and validates the configuration. On success *out owns the handle
 * (release with ifd_scenario_free); on failure *out is NULL. */
int ifd_scenario_parse(const char* config_json, ifd_scenario** out);

/* Validation only; no handle is created. */
int ifd_validate(const char* config_json);

/* Overrides applied before ifd_scenario_run. */
int ifd_scenario_set_output_dir(ifd_scenario* s, const char* dir);
int ifd_scenario_set_grid(ifd_scenario* s, unsigned nx, unsigned nt);
int ifd_scenario_set_jobs(ifd_scenario* s, unsigned jobs);

/* Executes the scenario, writing report.json and CSV artifacts into the
 * output directory. The report (including the error object on failure) is
 * retrievable afterwards regardless of the return value. */
int ifd_scenario_run(ifd_scenario* s);

/* The report JSON of the last run on this handle; NULL before any run.
 * Owned by the handle. */
const char* ifd_scenario_report_json(const ifd_scenario* s);

/* Human-readable configuration schema; static storage. */
const char* ifd_schema(void);

/* Last error message on this thread; empty string if none. */
const char* ifd_last_error(void);

void ifd_scenario_free(ifd_scenario* s);

#ifdef __cplusplus
}
#endif

#endif
