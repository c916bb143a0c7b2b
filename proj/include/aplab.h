/* aplab C API: scenario loading, pipeline runs and report emission for the
 * parametric argument-principle workbench. All objects are opaque handles;
 * every function that can fail returns an aplab_status and leaves a message
 * readable through aplab_last_error() (thread-local).
 */
#ifndef APLAB_H
#define APLAB_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct aplab_scenario aplab_scenario;
typedef struct aplab_report aplab_report;

typedef enum aplab_status {
  APLAB_OK = 0,
  APLAB_ERR_INVALID = 1,  /* bad argument / unknown id */
  APLAB_ERR_EVAL = 2,     /* expression or pipeline evaluation failure */
  APLAB_ERR_SCHEMA = 3,   /* scenario file or schema violation */
  APLAB_ERR_NUMERIC = 4,  /* numerical validation failure */
  APLAB_ERR_IO = 5        /* file system failure */
} aplab_status;

const char* aplab_version(void);

/* Message for the most recent failure on this thread; never NULL. */
const char* aplab_last_error(void);

/* Built-in scenario registry. */
int aplab_builtin_count(void);
const char* aplab_builtin_id(int index); /* NULL when out of range */

/* Constructors; *out receives a handle owned by the caller. */
aplab_status aplab_scenario_builtin(const char* id, aplab_scenario** out);
aplab_status aplab_scenario_load_file(const char* path, aplab_scenario** out);
aplab_status aplab_scenario_load_json(const char* text, aplab_scenario** out);
void aplab_scenario_free(aplab_scenario* s);

const char* aplab_scenario_id(const aplab_scenario* s);

/* boundary > 0 replaces the boundary sample count (power of two, scales the
 * radial rings along); param_axis0 > 0 rescales the parameter lattice (and
 * any patch lattice) proportionally to its first axis. Pass 0 to keep. */
aplab_status aplab_scenario_set_grid(aplab_scenario* s, int boundary,
                                     int param_axis0);
aplab_status aplab_scenario_set_tolerance(aplab_scenario* s, const char* name,
                                          double value);

/* Runs the full pipeline for the scenario kind. */
aplab_status aplab_run(const aplab_scenario* s, aplab_report** out);
void aplab_report_free(aplab_report* r);

/* Canonical report JSON (owned by the report handle). */
const char* aplab_report_json(const aplab_report* r);

/* 1 when every check in the report passed. */
int aplab_report_all_passed(const aplab_report* r);

/* formats: comma-separated subset of "json,csv,svg". */
aplab_status aplab_report_write(const aplab_report* r, const char* dir,
                                const char* formats);

#ifdef __cplusplus
}
#endif

#endif /* APLAB_H */
