/*
 * kitepump C interface.
 *
 * Every fallible call returns a kp_status. On failure a description is kept
 * per thread and can be read with kp_last_error() until the next call on
 * that thread. Strings returned through char** are owned by the caller and
 * released with kp_string_free().
 */
#ifndef KITEPUMP_H
#define KITEPUMP_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(KITEPUMP_BUILD)
#    define KP_API __declspec(dllexport)
#  else
#    define KP_API __declspec(dllimport)
#  endif
#else
#  define KP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kp_status {
    KP_OK = 0,
    KP_ERR_DOMAIN = 1,
    KP_ERR_PARSE = 2,
    KP_ERR_VALIDATION = 3,
    KP_ERR_NO_TENSION = 4,
    KP_ERR_NO_SOLUTION = 5,
    KP_ERR_NO_QUASI_STEADY_SOLUTION = 6,
    KP_ERR_SAG_TOO_LARGE = 7,
    KP_ERR_UNREACHABLE = 8,
    KP_ERR_NON_TERMINATION = 9,
    KP_ERR_NON_CONVERGENCE = 10,
    KP_ERR_EMPTY_PHASE = 11,
    KP_ERR_IO = 12,
    KP_ERR_INVALID_ARGUMENT = 13,
    KP_ERR_INTERNAL = 14
} kp_status;

typedef enum kp_family {
    KP_FAMILY_NONE = 0,
    KP_FAMILY_INPUT = 1,
    KP_FAMILY_SOLVER = 2,
    KP_FAMILY_IO = 3,
    KP_FAMILY_INTERNAL = 4
} kp_family;

typedef enum kp_phase {
    KP_PHASE_RETRACTION = 0,
    KP_PHASE_TRANSITION = 1,
    KP_PHASE_TRACTION = 2
} kp_phase;

KP_API const char* kp_status_name(kp_status status);
KP_API kp_family kp_status_family(kp_status status);
KP_API const char* kp_last_error(void);
KP_API const char* kp_version(void);
KP_API void kp_string_free(char* s);

/* configuration */

typedef struct kp_config kp_config;

KP_API kp_status kp_config_load(const char* path, kp_config** out);
KP_API kp_status kp_config_parse(const char* json_text, kp_config** out);
KP_API kp_status kp_config_serialize(const kp_config* cfg, char** out);
KP_API kp_status kp_config_save(const kp_config* cfg, const char* path);
KP_API kp_status kp_config_set_gravity(kp_config* cfg, int enabled);
KP_API kp_status kp_config_set_output_dir(kp_config* cfg, const char* dir);
KP_API kp_status kp_config_output_dir(const kp_config* cfg, char** out);
/* numeric value at a dotted path such as "operation.F_out" */
KP_API kp_status kp_config_get_number(const kp_config* cfg, const char* path, double* out);
KP_API kp_status kp_config_set_number(kp_config* cfg, const char* path, double value);
KP_API void kp_config_free(kp_config* cfg);

/* cycle simulation */

typedef struct kp_cycle kp_cycle;

typedef struct kp_cycle_summary {
    double P_m;
    double zeta_m;
    double z_mt;
    double v_w_mt;
    double duration;
    int steps;
} kp_cycle_summary;

typedef struct kp_phase_summary {
    double t_start;
    double duration;
    double energy;
    double mean_power;
    int steps;
    size_t samples;
} kp_phase_summary;

KP_API kp_status kp_simulate(const kp_config* cfg, kp_cycle** out);
KP_API kp_status kp_cycle_summary_get(const kp_cycle* cycle, kp_cycle_summary* out);
KP_API kp_status kp_cycle_phase(const kp_cycle* cycle, kp_phase phase, kp_phase_summary* out);
KP_API kp_status kp_cycle_summary_json(const kp_cycle* cycle, char** out);
KP_API kp_status kp_cycle_timeseries_csv(const kp_cycle* cycle, char** out);
KP_API kp_status kp_cycle_telemetry_csv(const kp_cycle* cycle, char** out);
/* writes cycle_summary.json and timeseries.csv into dir (created if needed) */
KP_API kp_status kp_cycle_write(const kp_cycle* cycle, const char* dir);
KP_API void kp_cycle_free(kp_cycle* cycle);

/* tables: convergence studies and sweeps */

typedef struct kp_table kp_table;

KP_API kp_status kp_convergence(const kp_config* cfg, const double* dT, size_t n,
                                kp_table** out);
KP_API kp_status kp_sweep(const kp_config* cfg, const char* spec_json, kp_table** out);
KP_API size_t kp_table_rows(const kp_table* table);
KP_API size_t kp_table_columns(const kp_table* table);
KP_API const char* kp_table_column_name(const kp_table* table, size_t column);
/* NaN marks a missing cell (failed sweep run) */
KP_API kp_status kp_table_value(const kp_table* table, size_t row, size_t column, double* out);
KP_API kp_status kp_table_csv(const kp_table* table, char** out);
/* sweep: argmax row; convergence: reference row */
KP_API kp_status kp_table_summary_json(const kp_table* table, char** out);
/* convergence.csv, or sweep.csv plus sweep_best.json */
KP_API kp_status kp_table_write(const kp_table* table, const char* dir);
KP_API void kp_table_free(kp_table* table);

/* telemetry estimation */

typedef struct kp_estimate kp_estimate;

typedef struct kp_estimate_options {
    double crosswind_ratio;   /* minimum v_k / v_w for traction L/D samples */
    double in_plane_tol_deg;  /* retraction course/azimuth tolerance */
} kp_estimate_options;

typedef struct kp_phase_averages {
    double C_R_o, C_R_i;
    double C_R_k_o, C_R_k_i;
    double LD_sys_o, LD_sys_i;
    double LD_k_o, LD_k_i;
    int has_LD_o, has_LD_i;
    int cr_valid_o, cr_valid_i;
    int ld_valid_o, ld_valid_i;
} kp_phase_averages;

KP_API void kp_estimate_options_default(kp_estimate_options* out);
KP_API kp_status kp_estimate_run(const kp_config* cfg, const char* telemetry_csv,
                                 const kp_estimate_options* options, kp_estimate** out);
KP_API kp_status kp_estimate_run_file(const kp_config* cfg, const char* path,
                                      const kp_estimate_options* options, kp_estimate** out);
KP_API kp_status kp_estimate_averages(const kp_estimate* est, kp_phase_averages* out);
/* KP_ERR_EMPTY_PHASE when a lift-to-drag average has no valid sample */
KP_API kp_status kp_estimate_complete(const kp_estimate* est);
KP_API kp_status kp_estimate_records_csv(const kp_estimate* est, char** out);
KP_API kp_status kp_estimate_averages_json(const kp_estimate* est, char** out);
/* writes estimates.csv and phase_averages.json into dir */
KP_API kp_status kp_estimate_write(const kp_estimate* est, const char* dir);
KP_API void kp_estimate_free(kp_estimate* est);

/* misc */
KP_API kp_status kp_write_file(const char* path, const char* text);

#ifdef __cplusplus
}
#endif

#endif /* KITEPUMP_H */
