/* C interface to the AoI tail-constrained power allocation simulator.
 *
 * All entry points return a status code; on failure aoitail_last_error()
 * carries a thread-local description of what went wrong. Handles are opaque
 * and owned by the caller through the matching create/destroy pair.
 */
#ifndef AOITAIL_H
#define AOITAIL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum aoitail_status {
  AOITAIL_OK = 0,
  AOITAIL_ERR_INVALID_ARGUMENT = 1, /* bad inputs, config, preconditions */
  AOITAIL_ERR_RUNTIME = 2,          /* I/O failures, fitting failures */
  AOITAIL_ERR_INTERNAL = 3          /* internal consistency check tripped */
} aoitail_status;

const char* aoitail_version(void);

/* message of the most recent failing call on this thread; never NULL */
const char* aoitail_last_error(void);

/* ---- run configuration ------------------------------------------------ */

typedef struct aoitail_config aoitail_config;

/* fresh config with built-in defaults; NULL only on allocation failure */
aoitail_config* aoitail_config_create(void);
void aoitail_config_destroy(aoitail_config* cfg);

/* merge key = value lines from a file into cfg */
aoitail_status aoitail_config_load(aoitail_config* cfg, const char* path);

/* set or read a single key; values use the config-file syntax */
aoitail_status aoitail_config_set(aoitail_config* cfg, const char* key,
                                  const char* value);
aoitail_status aoitail_config_get(const aoitail_config* cfg, const char* key,
                                  char* buf, size_t buf_len);

/* ---- pipeline phases --------------------------------------------------- */

/* offline federated training; writes models.csv and selection.csv */
aoitail_status aoitail_train(const aoitail_config* cfg, const char* out_dir);

/* online power-allocation phase using the tail model from the given row of
 * models_csv ("global_selected" or "global_fedavg"; NULL means selected);
 * writes metrics.csv, records.csv and ccdf.csv */
aoitail_status aoitail_simulate(const aoitail_config* cfg,
                                const char* models_csv, const char* global_row,
                                const char* out_dir);

/* online phase per v value with common random numbers; writes sweep.csv.
 * models_csv NULL runs the training phase first. */
aoitail_status aoitail_sweep(const aoitail_config* cfg, const char* models_csv,
                             const char* global_row, const double* v_values,
                             size_t v_count, const char* out_dir);

/* ---- numerical helpers ------------------------------------------------- */

/* rescaled-range Hurst exponent estimate, clamped to [0.5, 1) */
aoitail_status aoitail_hurst(const double* values, size_t count,
                             double* estimate);

/* same estimate on the first column of a CSV file (header optional) */
aoitail_status aoitail_hurst_file(const char* path, double* estimate);

/* batch gradient-ascent GPD fit on positive exceedances */
aoitail_status aoitail_gpd_fit(const double* exceedances, size_t count,
                               double sigma0, double xi0, double rate,
                               int iters, double* sigma_out, double* xi_out);

/* P(Y > y) under GPD(sigma, xi) */
aoitail_status aoitail_gpd_ccdf(double sigma, double xi, double y, double* out);

/* smallest transmit power meeting the delay-tail constraint this slot under
 * the config's link budget; feasible_out is 1 when the bound fits under
 * p_max, else 0 with the returned power clamped to p_max */
aoitail_status aoitail_min_power(const aoitail_config* cfg, double sigma,
                                 double xi, double gain, double queue_delay_s,
                                 double* power_out, int* feasible_out);

#ifdef __cplusplus
}
#endif

#endif /* AOITAIL_H */
