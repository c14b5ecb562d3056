/* C interface to the string-bead wave laboratory. All entry points return
 * a status code; on failure sw_last_error() describes the problem for the
 * calling thread. Strings returned through char** outputs are owned by the
 * caller and released with sw_string_free(). */
#ifndef STRWAVE_H
#define STRWAVE_H

#ifdef __cplusplus
extern "C" {
#endif

enum sw_status {
    SW_OK = 0,
    SW_ERR_INVALID = 1,  /* bad arguments or configuration */
    SW_ERR_RUNTIME = 2,  /* I/O or internal failure */
    SW_ERR_UNSTABLE = 3  /* simulation aborted on the instability guard */
};

typedef struct sw_config sw_config;
typedef struct sw_solution sw_solution;

/* --- configuration ----------------------------------------------------- */

/* Default configuration (transparency-less zero field). */
int sw_config_create(sw_config** out);
/* Parse an INI file from disk. */
int sw_config_from_file(const char* path, sw_config** out);
/* Built-in scenario seed: bradyon_fig2, tachyon_fig3, dispersion,
 * conservation or convergence. */
int sw_config_from_scenario(const char* name, sw_config** out);
/* Set "section.key" to a value string, as the --override CLI flag does. */
int sw_config_set(sw_config* cfg, const char* dotted_key, const char* value);
/* Canonical INI text of the fully resolved configuration. */
int sw_config_serialize(const sw_config* cfg, char** out_text);
void sw_config_free(sw_config* cfg);

/* --- closed-form solutions --------------------------------------------- */

/* Build the analytic solution described by the config's [init] section
 * (analytic_bradyon, analytic_tachyon or surfer modes). */
int sw_solution_create(const sw_config* cfg, sw_solution** out);
/* Field value and carrier/envelope phases at (t, x). Null outputs are
 * skipped. */
int sw_solution_eval(const sw_solution* sol, double t, double x, double* u,
                     double* carrier_phase, double* envelope_phase);
/* Named derived constant: omega_lab, k_lab, gamma, clock_pulsation, A, phi,
 * B, omega_prime, speed, c, lambda_phase, lambda_group, debroglie. */
int sw_solution_get(const sw_solution* sol, const char* name, double* out);
/* CSV table of field/phases over times x positions, with a constants
 * header. */
int sw_solution_table(const sw_solution* sol, const double* times,
                      int n_times, const double* positions, int n_positions,
                      char** out_csv);
void sw_solution_free(sw_solution* sol);

/* --- simulation, validation, studies ----------------------------------- */

/* Run the configuration and write trajectory.csv, snapshots.ndjson,
 * diagnostics.csv and config.ini into out_dir. Returns SW_ERR_UNSTABLE if
 * the run tripped the instability guard (partial outputs are kept). */
int sw_simulate(const sw_config* cfg, const char* out_dir);

/* Run the named scenario's check family. overrides may be NULL. The report
 * is a human-readable table; report_csv a machine-readable one; both may be
 * NULL when not wanted. all_pass receives 1 or 0. */
int sw_validate(const char* scenario, const sw_config* overrides,
                char** report, char** report_csv, int* all_pass);

/* Spatial (transparency trajectory) and temporal (free-field mode) order
 * measurements seeded by the config; either output may be NULL. */
int sw_convergence(const sw_config* cfg, double* spatial_order,
                   double* temporal_order);

/* Cartesian sweep: axis_specs are "section.key=v1,v2,..." strings. Writes
 * one subdirectory per point plus index.csv under out_dir; index_csv (when
 * non-NULL) receives the index contents. */
int sw_sweep(const sw_config* cfg, const char* const* axis_specs, int n_axes,
             const char* out_dir, char** index_csv);

/* --- diagnostics of the API itself ------------------------------------- */

/* Message for the last failing call on this thread; empty string if none. */
const char* sw_last_error(void);
void sw_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* STRWAVE_H */
