#ifndef HRKIT_C_H
#define HRKIT_C_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(HRK_BUILDING_LIBRARY)
#define HRK_API __attribute__((visibility("default")))
#else
#define HRK_API
#endif

typedef enum hrk_status {
  HRK_OK = 0,
  HRK_E_INVALID_ARGUMENT = 1,
  HRK_E_DOMAIN = 2,
  HRK_E_NOT_BESSEL_PAIR = 3,
  HRK_E_CRITICAL_BOUNDARY = 4,
  HRK_E_NO_CONVERGENCE = 5,
  HRK_E_STEP_COLLAPSE = 6,
  HRK_E_DIVERGENT_INTEGRAL = 7,
  HRK_E_UNSUPPORTED = 8,
  HRK_E_NEVER_POSITIVE = 9,
  HRK_E_INTERNAL = 100
} hrk_status;

typedef struct hrk_potential hrk_potential;

/* Library version, "major.minor.patch". */
HRK_API const char* hrk_version(void);

/* Message of the last failed call on this thread ("" when none). */
HRK_API const char* hrk_last_error(void);
HRK_API const char* hrk_status_name(hrk_status s);

/* Potentials from a short string ("power:0.5", "log:1", ...) or a JSON object. */
HRK_API hrk_status hrk_potential_create(const char* spec, double R_max, hrk_potential** out);
HRK_API void hrk_potential_destroy(hrk_potential* p);
HRK_API hrk_status hrk_potential_eval(const hrk_potential* p, double r, double* value,
                                      double* d1, double* d2);

/* Optimal weight beta(V, W; R) for the n-dimensional equation (two_d != 0: the 2-D form). */
HRK_API hrk_status hrk_weight(const hrk_potential* V, const hrk_potential* W, int n, double R,
                              int two_d, double rel_tol, double* beta, double* c_lo,
                              double* c_hi, int* unbounded);
/* theta = V(R) phi'(R)/phi(R) at multiplier c. */
HRK_API hrk_status hrk_theta(const hrk_potential* V, const hrk_potential* W, int n, double R,
                             int two_d, double c, double* theta);

HRK_API hrk_status hrk_mu(int n, double* mu, double* residual);
HRK_API double hrk_first_zero_j0(void);

/* Runs a command ("shoot", "weight", "theta", "sweep", "rayleigh", "constants", "verify",
 * "mu") on a JSON config. On success *result_json holds the JSON output (free it with
 * hrk_free_string) and *violation is set when verify found a violated inequality. */
HRK_API hrk_status hrk_run(const char* command, const char* config_json, char** result_json,
                           int* violation);
HRK_API void hrk_free_string(char* s);

#ifdef __cplusplus
}
#endif

#endif
