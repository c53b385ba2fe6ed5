/* C interface to the hillwave library: opaque handles, status codes and a
 * thread-local error message. Every function that can fail returns a
 * hw_status; outputs are written only on HW_OK. */
#ifndef HILLWAVE_H
#define HILLWAVE_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(HILLWAVE_BUILDING_LIBRARY)
#define HW_API __attribute__((visibility("default")))
#else
#define HW_API
#endif

typedef enum hw_status {
  HW_OK = 0,
  HW_ERR_INVALID_ARGUMENT = 1,
  HW_ERR_NON_POSITIVE_PROFILE = 2,
  HW_ERR_INTEGRATOR_FAILURE = 3,
  HW_ERR_NO_INSTABILITY = 4,
  HW_ERR_SELECTION_FAILED = 5,
  HW_ERR_DEGENERATE_MONODROMY = 6,
  HW_ERR_NO_CONVERGENCE = 7,
  HW_ERR_DOMAIN_EXIT = 8,
  HW_ERR_UNSUPPORTED_FAMILY = 9,
  HW_ERR_UNSUPPORTED_ORDER = 10,
  HW_ERR_CFL_VIOLATION = 11,
  HW_ERR_NO_RESONANT_ENERGY = 12,
  HW_ERR_CONFIG = 13,
  HW_ERR_IO = 14,
  HW_ERR_INTERNAL = 99
} hw_status;

typedef struct hw_profile hw_profile;
typedef struct hw_scan hw_scan;
typedef struct hw_config hw_config;
typedef struct hw_result hw_result;

HW_API const char* hw_version(void);
HW_API const char* hw_status_name(hw_status status);
/* Message of the last failed call on this thread ("" if none). */
HW_API const char* hw_last_error(void);

/* R(t) = mean + sum_k cos_coeffs[k-1] cos(2 pi k t). */
HW_API hw_status hw_profile_create(double mean, const double* cos_coeffs, size_t count, hw_profile** out);
HW_API void hw_profile_destroy(hw_profile* profile);
HW_API hw_status hw_profile_eval(const hw_profile* profile, double t, double* R, double* dR, double* d2R);
HW_API hw_status hw_profile_potential(const hw_profile* profile, int n, double t, double* q);

/* Monodromy entries {b11, b12, b21, b22} of the Hill system. */
HW_API hw_status hw_monodromy(const hw_profile* profile, int n, double lambda, double tol, double out[4]);
/* W(m), V(m) at integer m from monodromy entries. */
HW_API hw_status hw_closed_form_wv(const double b[4], int m, double* W, double* V);

HW_API hw_status hw_scan_create(const hw_profile* profile, int n, double lambda_min, double lambda_max, int steps,
                                hw_scan** out);
HW_API size_t hw_scan_interval_count(const hw_scan* scan);
HW_API hw_status hw_scan_interval(const hw_scan* scan, size_t index, double* lo, double* hi, double* star);
HW_API void hw_scan_destroy(hw_scan* scan);

HW_API hw_status hw_hyp2f1(double a, double b, double c, double z, double* out);
HW_API hw_status hw_gaussian_curvature(double l, double u1, double u2, double* K);

/* Run configuration (JSON). Invalid documents yield HW_ERR_CONFIG. */
HW_API hw_status hw_config_parse(const char* json, hw_config** out);
HW_API hw_status hw_config_load(const char* path, hw_config** out);
HW_API void hw_config_destroy(hw_config* config);
/* Borrowed pointer, valid while the config lives. */
HW_API const char* hw_config_output_dir(const hw_config* config);

HW_API size_t hw_command_count(void);
HW_API const char* hw_command_name(size_t index);
/* Runs a named command, writing its CSV/JSON outputs under out_dir
 * (config output_dir when NULL). */
HW_API hw_status hw_run(const hw_config* config, const char* command, const char* out_dir, hw_result** out);
HW_API const char* hw_result_summary(const hw_result* result);
HW_API size_t hw_result_file_count(const hw_result* result);
HW_API const char* hw_result_file(const hw_result* result, size_t index);
HW_API void hw_result_destroy(hw_result* result);

#ifdef __cplusplus
}
#endif

#endif
