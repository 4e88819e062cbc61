#ifndef GLAB_H
#define GLAB_H

#include <stdint.h>

#if defined(_WIN32)
#define GLAB_API __declspec(dllexport)
#else
#define GLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum glab_status {
  GLAB_OK = 0,
  GLAB_INVALID_ARGUMENT = 1,
  GLAB_SELF_INTERSECTION = 2,
  GLAB_OPEN_CURVE = 3,
  GLAB_TOO_FEW_SAMPLES = 4,
  GLAB_OUTSIDE_TUBE = 5,
  GLAB_INVALID_POTENTIAL = 6,
  GLAB_DEGENERATE_POTENTIAL = 7,
  GLAB_NOT_STAR_SHAPED = 8,
  GLAB_GRID_TOO_SMALL = 9,
  GLAB_DEGREE_MISMATCH = 10,
  GLAB_DIVERGED = 11,
  GLAB_LINEAR_SOLVE_FAILED = 12,
  GLAB_NEWTON_FAILED = 13,
  GLAB_REGION_INVALID = 14,
  GLAB_BOUNDARY_CONTACT = 15,
  GLAB_UNWRAP_INCONSISTENT = 16,
  GLAB_INSUFFICIENT_DATA = 17,
  GLAB_PARSE = 18,
  GLAB_IO = 19,
  GLAB_MISSING_FILE = 20,
  GLAB_INTERNAL = 99
} glab_status;

typedef struct glab_scenario glab_scenario;
typedef struct glab_options glab_options;
typedef struct glab_result glab_result;
typedef struct glab_curve glab_curve;

typedef void (*glab_progress_fn)(const char* message, void* user);

GLAB_API const char* glab_version(void);
// Message of the last failing call on this thread ("" if none).
GLAB_API const char* glab_last_error(void);
GLAB_API const char* glab_status_name(glab_status status);

// Scenarios. Strings returned by accessors are owned by the handle.
GLAB_API glab_status glab_scenario_load(const char* path, glab_scenario** out);
GLAB_API glab_status glab_scenario_parse(const char* text, const char* origin, glab_scenario** out);
GLAB_API void glab_scenario_free(glab_scenario* s);
GLAB_API glab_status glab_scenario_set_grid(glab_scenario* s, int n);
GLAB_API glab_status glab_scenario_set_seed(glab_scenario* s, uint64_t seed);
GLAB_API glab_status glab_scenario_set_out_dir(glab_scenario* s, const char* dir);
GLAB_API const char* glab_scenario_canonical(glab_scenario* s);
GLAB_API const char* glab_scenario_hash(glab_scenario* s);
GLAB_API int glab_scenario_eps_count(const glab_scenario* s);
GLAB_API double glab_scenario_eps(const glab_scenario* s, int index);
GLAB_API int glab_scenario_warning_count(const glab_scenario* s);
GLAB_API const char* glab_scenario_warning(const glab_scenario* s, int index);

// Run options; a NULL options pointer means defaults.
GLAB_API glab_status glab_options_create(glab_options** out);
GLAB_API void glab_options_free(glab_options* o);
GLAB_API glab_status glab_options_set_cold_start(glab_options* o, int cold);
// Comma-separated check names replacing the scenario's list.
GLAB_API glab_status glab_options_set_checks(glab_options* o, const char* list);
GLAB_API glab_status glab_options_set_progress(glab_options* o, glab_progress_fn fn, void* user);

// Operations. Each fills *out with a result handle on success.
GLAB_API glab_status glab_solve(const glab_scenario* s, int eps_index, const glab_options* o, glab_result** out);
GLAB_API glab_status glab_sweep(const glab_scenario* s, const glab_options* o, glab_result** out);
GLAB_API glab_status glab_report(const char* manifest_path, glab_result** out);
GLAB_API glab_status glab_validate(const glab_scenario* s, glab_result** out);

GLAB_API const char* glab_result_text(const glab_result* r);
// Manifest (sweep, report) or result file (solve); "" for validate.
GLAB_API const char* glab_result_path(const glab_result* r);
// 1 when every enabled check passed (solve: converged; validate: hypotheses hold).
GLAB_API int glab_result_passed(const glab_result* r);
GLAB_API int glab_result_check_count(const glab_result* r);
GLAB_API const char* glab_result_check_name(const glab_result* r, int index);
GLAB_API int glab_result_check_passed(const glab_result* r, int index);
GLAB_API const char* glab_result_check_detail(const glab_result* r, int index);
GLAB_API void glab_result_free(glab_result* r);

// Curves normalized to length 2 pi.
GLAB_API glab_status glab_curve_circle(glab_curve** out);
GLAB_API glab_status glab_curve_ellipse(double a, double b, glab_curve** out);
GLAB_API glab_status glab_curve_points(const double* xy, int count, glab_curve** out);
GLAB_API void glab_curve_free(glab_curve* c);
GLAB_API double glab_curve_tube_radius(const glab_curve* c);
GLAB_API glab_status glab_curve_point(const glab_curve* c, double s, double* x, double* y);
// Arc-length coordinate and signed distance (positive inside) of the nearest point.
GLAB_API glab_status glab_curve_tube_coords(const glab_curve* c, double x, double y, double* s, double* t);

#ifdef __cplusplus
}
#endif

#endif
