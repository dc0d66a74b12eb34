#include "kitepump/kitepump.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "kitepump/config.hpp"
#include "kitepump/cycle.hpp"
#include "kitepump/errors.hpp"
#include "kitepump/estimation.hpp"
#include "kitepump/io.hpp"
#include "kitepump/sweep.hpp"

using namespace kitepump;

struct kp_config {
    RunConfig config;
};

struct kp_cycle {
    SystemParams params;
    CycleResult result;
};

struct kp_table {
    bool sweep = false;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::string csv;
    std::string summary;
};

struct kp_estimate {
    EstimationResult result;
};

namespace {

thread_local std::string last_error;

kp_status status_of(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Domain: return KP_ERR_DOMAIN;
    case ErrorKind::Parse: return KP_ERR_PARSE;
    case ErrorKind::Validation: return KP_ERR_VALIDATION;
    case ErrorKind::NoTension: return KP_ERR_NO_TENSION;
    case ErrorKind::NoSolution: return KP_ERR_NO_SOLUTION;
    case ErrorKind::NoQuasiSteadySolution: return KP_ERR_NO_QUASI_STEADY_SOLUTION;
    case ErrorKind::SagTooLarge: return KP_ERR_SAG_TOO_LARGE;
    case ErrorKind::Unreachable: return KP_ERR_UNREACHABLE;
    case ErrorKind::NonTermination: return KP_ERR_NON_TERMINATION;
    case ErrorKind::NonConvergence: return KP_ERR_NON_CONVERGENCE;
    case ErrorKind::EmptyPhase: return KP_ERR_EMPTY_PHASE;
    case ErrorKind::Io: return KP_ERR_IO;
    }
    return KP_ERR_INTERNAL;
}

kp_status set_error(kp_status status, const std::string& message) {
    last_error = message;
    return status;
}

template <class F>
kp_status guarded(F&& body) {
    try {
        last_error.clear();
        body();
        return KP_OK;
    } catch (const Error& e) {
        return set_error(status_of(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(KP_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(KP_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(KP_ERR_INTERNAL, "unknown failure");
    }
}

#define KP_REQUIRE_ARG(cond)                                                                  \
    do {                                                                                      \
        if (!(cond)) return set_error(KP_ERR_INVALID_ARGUMENT, "invalid argument: " #cond);  \
    } while (0)

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.data(), s.size() + 1);
    return out;
}

std::string table_csv(const kp_table& t) {
    std::string out;
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
        out += (j ? "," : "") + t.columns[j];
    }
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out += ",";
            if (!std::isnan(row[j])) out += format_double(row[j]);
        }
        out += "\n";
    }
    return out;
}

}  // namespace

extern "C" {

const char* kp_status_name(kp_status status) {
    switch (status) {
    case KP_OK: return "Ok";
    case KP_ERR_DOMAIN: return "DomainError";
    case KP_ERR_PARSE: return "ParseError";
    case KP_ERR_VALIDATION: return "ValidationError";
    case KP_ERR_NO_TENSION: return "NoTension";
    case KP_ERR_NO_SOLUTION: return "NoSolution";
    case KP_ERR_NO_QUASI_STEADY_SOLUTION: return "NoQuasiSteadySolution";
    case KP_ERR_SAG_TOO_LARGE: return "SagTooLarge";
    case KP_ERR_UNREACHABLE: return "Unreachable";
    case KP_ERR_NON_TERMINATION: return "NonTermination";
    case KP_ERR_NON_CONVERGENCE: return "NonConvergence";
    case KP_ERR_EMPTY_PHASE: return "EmptyPhase";
    case KP_ERR_IO: return "IoError";
    case KP_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case KP_ERR_INTERNAL: return "InternalError";
    }
    return "UnknownStatus";
}

kp_family kp_status_family(kp_status status) {
    switch (status) {
    case KP_OK: return KP_FAMILY_NONE;
    case KP_ERR_DOMAIN:
    case KP_ERR_PARSE:
    case KP_ERR_VALIDATION:
    case KP_ERR_INVALID_ARGUMENT:
        return KP_FAMILY_INPUT;
    case KP_ERR_IO: return KP_FAMILY_IO;
    case KP_ERR_INTERNAL: return KP_FAMILY_INTERNAL;
    default: return KP_FAMILY_SOLVER;
    }
}

const char* kp_last_error(void) { return last_error.c_str(); }

const char* kp_version(void) { return "1.0.0"; }

void kp_string_free(char* s) { std::free(s); }

kp_status kp_config_load(const char* path, kp_config** out) {
    KP_REQUIRE_ARG(path && out);
    *out = nullptr;
    return guarded([&] { *out = new kp_config{load_config(path)}; });
}

kp_status kp_config_parse(const char* json_text, kp_config** out) {
    KP_REQUIRE_ARG(json_text && out);
    *out = nullptr;
    return guarded([&] { *out = new kp_config{parse_config(json_text)}; });
}

kp_status kp_config_serialize(const kp_config* cfg, char** out) {
    KP_REQUIRE_ARG(cfg && out);
    return guarded([&] { *out = dup_string(serialize_config(cfg->config)); });
}

kp_status kp_config_save(const kp_config* cfg, const char* path) {
    KP_REQUIRE_ARG(cfg && path);
    return guarded([&] { save_config(cfg->config, path); });
}

kp_status kp_config_set_gravity(kp_config* cfg, int enabled) {
    KP_REQUIRE_ARG(cfg);
    cfg->config.gravity = enabled != 0;
    return KP_OK;
}

kp_status kp_config_set_output_dir(kp_config* cfg, const char* dir) {
    KP_REQUIRE_ARG(cfg && dir);
    return guarded([&] { cfg->config.output_dir = dir; });
}

kp_status kp_config_output_dir(const kp_config* cfg, char** out) {
    KP_REQUIRE_ARG(cfg && out);
    return guarded([&] { *out = dup_string(cfg->config.output_dir); });
}

kp_status kp_config_get_number(const kp_config* cfg, const char* path, double* out) {
    KP_REQUIRE_ARG(cfg && path && out);
    return guarded([&] { *out = parameter_value(cfg->config, path); });
}

kp_status kp_config_set_number(kp_config* cfg, const char* path, double value) {
    KP_REQUIRE_ARG(cfg && path);
    return guarded([&] { cfg->config = apply_parameter(cfg->config, path, value); });
}

void kp_config_free(kp_config* cfg) { delete cfg; }

kp_status kp_simulate(const kp_config* cfg, kp_cycle** out) {
    KP_REQUIRE_ARG(cfg && out);
    *out = nullptr;
    return guarded([&] {
        auto c = std::make_unique<kp_cycle>();
        c->params = cfg->config.to_params();
        c->result = simulate_cycle(c->params);
        *out = c.release();
    });
}

kp_status kp_cycle_summary_get(const kp_cycle* cycle, kp_cycle_summary* out) {
    KP_REQUIRE_ARG(cycle && out);
    const CycleResult& r = cycle->result;
    *out = kp_cycle_summary{r.P_m, r.zeta_m, r.z_mt, r.v_w_mt, r.duration, r.steps};
    return KP_OK;
}

kp_status kp_cycle_phase(const kp_cycle* cycle, kp_phase phase, kp_phase_summary* out) {
    KP_REQUIRE_ARG(cycle && out);
    KP_REQUIRE_ARG(phase >= KP_PHASE_RETRACTION && phase <= KP_PHASE_TRACTION);
    const PhaseResult& p = cycle->result.phases[static_cast<std::size_t>(phase)];
    *out = kp_phase_summary{p.t_start, p.duration, p.energy, p.mean_power, p.steps,
                            p.samples.size()};
    return KP_OK;
}

kp_status kp_cycle_summary_json(const kp_cycle* cycle, char** out) {
    KP_REQUIRE_ARG(cycle && out);
    return guarded([&] { *out = dup_string(cycle_summary_json(cycle->result, cycle->params)); });
}

kp_status kp_cycle_timeseries_csv(const kp_cycle* cycle, char** out) {
    KP_REQUIRE_ARG(cycle && out);
    return guarded([&] { *out = dup_string(timeseries_csv(cycle->result)); });
}

kp_status kp_cycle_telemetry_csv(const kp_cycle* cycle, char** out) {
    KP_REQUIRE_ARG(cycle && out);
    return guarded([&] {
        *out = dup_string(telemetry_csv(export_telemetry(cycle->result, cycle->params)));
    });
}

kp_status kp_cycle_write(const kp_cycle* cycle, const char* dir) {
    KP_REQUIRE_ARG(cycle && dir);
    return guarded([&] {
        ensure_directory(dir);
        write_text_file(join_path(dir, "cycle_summary.json"),
                        cycle_summary_json(cycle->result, cycle->params));
        write_text_file(join_path(dir, "timeseries.csv"), timeseries_csv(cycle->result));
    });
}

void kp_cycle_free(kp_cycle* cycle) { delete cycle; }

kp_status kp_convergence(const kp_config* cfg, const double* dT, size_t n, kp_table** out) {
    KP_REQUIRE_ARG(cfg && dT && n > 0 && out);
    *out = nullptr;
    return guarded([&] {
        const SystemParams p = cfg->config.to_params();
        const auto rows = convergence_study(p, std::vector<double>(dT, dT + n));
        auto t = std::make_unique<kp_table>();
        t->columns = {"dT", "zeta_m", "ratio", "P_m", "steps"};
        for (const auto& r : rows) {
            t->rows.push_back({r.dT, r.zeta_m, r.ratio, r.P_m, static_cast<double>(r.steps)});
        }
        t->csv = convergence_csv(rows);
        const auto& ref = rows.back();
        nlohmann::ordered_json j;
        j["reference_dT"] = ref.dT;
        j["reference_zeta_m"] = ref.zeta_m;
        double worst = 0.0;
        for (const auto& r : rows) worst = std::max(worst, std::abs(r.ratio - 1.0));
        j["max_deviation"] = worst;
        t->summary = j.dump(2) + "\n";
        *out = t.release();
    });
}

kp_status kp_sweep(const kp_config* cfg, const char* spec_json, kp_table** out) {
    KP_REQUIRE_ARG(cfg && spec_json && out);
    *out = nullptr;
    return guarded([&] {
        const SweepResult res = run_sweep(cfg->config, parse_sweep_spec(spec_json));
        auto t = std::make_unique<kp_table>();
        t->sweep = true;
        t->columns = {"value", "P_m", "zeta_m", "duration"};
        const double nan = std::numeric_limits<double>::quiet_NaN();
        for (const auto& r : res.rows) {
            t->rows.push_back(r.ok ? std::vector<double>{r.value, r.P_m, r.zeta_m, r.duration}
                                   : std::vector<double>{r.value, nan, nan, nan});
        }
        t->csv = sweep_csv(res);
        t->summary = sweep_best_json(res);
        *out = t.release();
    });
}

size_t kp_table_rows(const kp_table* table) { return table ? table->rows.size() : 0; }

size_t kp_table_columns(const kp_table* table) { return table ? table->columns.size() : 0; }

const char* kp_table_column_name(const kp_table* table, size_t column) {
    if (!table || column >= table->columns.size()) return nullptr;
    return table->columns[column].c_str();
}

kp_status kp_table_value(const kp_table* table, size_t row, size_t column, double* out) {
    KP_REQUIRE_ARG(table && out);
    KP_REQUIRE_ARG(row < table->rows.size() && column < table->columns.size());
    *out = table->rows[row][column];
    return KP_OK;
}

kp_status kp_table_csv(const kp_table* table, char** out) {
    KP_REQUIRE_ARG(table && out);
    return guarded([&] { *out = dup_string(table->csv.empty() ? table_csv(*table) : table->csv); });
}

kp_status kp_table_summary_json(const kp_table* table, char** out) {
    KP_REQUIRE_ARG(table && out);
    return guarded([&] { *out = dup_string(table->summary); });
}

kp_status kp_table_write(const kp_table* table, const char* dir) {
    KP_REQUIRE_ARG(table && dir);
    return guarded([&] {
        ensure_directory(dir);
        if (table->sweep) {
            write_text_file(join_path(dir, "sweep.csv"), table->csv);
            write_text_file(join_path(dir, "sweep_best.json"), table->summary);
        } else {
            write_text_file(join_path(dir, "convergence.csv"), table->csv);
        }
    });
}

void kp_table_free(kp_table* table) { delete table; }

void kp_estimate_options_default(kp_estimate_options* out) {
    if (!out) return;
    const EstimationOptions d;
    out->crosswind_ratio = d.crosswind_ratio;
    out->in_plane_tol_deg = d.in_plane_tol * 180.0 / std::numbers::pi;
}

namespace {

EstimationOptions to_options(const kp_estimate_options* o) {
    EstimationOptions opt;
    if (o) {
        require(std::isfinite(o->crosswind_ratio) && o->crosswind_ratio >= 0.0,
                ErrorKind::Validation, "estimate: crosswind ratio must be >= 0");
        require(std::isfinite(o->in_plane_tol_deg) && o->in_plane_tol_deg >= 0.0,
                ErrorKind::Validation, "estimate: in-plane tolerance must be >= 0");
        opt.crosswind_ratio = o->crosswind_ratio;
        opt.in_plane_tol = o->in_plane_tol_deg * std::numbers::pi / 180.0;
    }
    return opt;
}

}  // namespace

kp_status kp_estimate_run(const kp_config* cfg, const char* telemetry_csv,
                          const kp_estimate_options* options, kp_estimate** out) {
    KP_REQUIRE_ARG(cfg && telemetry_csv && out);
    *out = nullptr;
    return guarded([&] {
        const SystemParams p = cfg->config.to_params();
        const auto series = parse_telemetry_csv(telemetry_csv);
        *out = new kp_estimate{segment_and_average(series, p, to_options(options))};
    });
}

kp_status kp_estimate_run_file(const kp_config* cfg, const char* path,
                               const kp_estimate_options* options, kp_estimate** out) {
    KP_REQUIRE_ARG(cfg && path && out);
    *out = nullptr;
    std::string text;
    const kp_status st = guarded([&] { text = read_text_file(path); });
    if (st != KP_OK) return st;
    return kp_estimate_run(cfg, text.c_str(), options, out);
}

kp_status kp_estimate_averages(const kp_estimate* est, kp_phase_averages* out) {
    KP_REQUIRE_ARG(est && out);
    const PhaseAverages& a = est->result.averages;
    *out = kp_phase_averages{};
    out->C_R_o = a.C_R_o;
    out->C_R_i = a.C_R_i;
    out->C_R_k_o = a.C_R_k_o;
    out->C_R_k_i = a.C_R_k_i;
    out->has_LD_o = a.LD_k_o.has_value();
    out->has_LD_i = a.LD_k_i.has_value();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out->LD_sys_o = a.LD_sys_o.value_or(nan);
    out->LD_sys_i = a.LD_sys_i.value_or(nan);
    out->LD_k_o = a.LD_k_o.value_or(nan);
    out->LD_k_i = a.LD_k_i.value_or(nan);
    out->cr_valid_o = a.cr_valid_o;
    out->cr_valid_i = a.cr_valid_i;
    out->ld_valid_o = a.ld_valid_o;
    out->ld_valid_i = a.ld_valid_i;
    return KP_OK;
}

kp_status kp_estimate_complete(const kp_estimate* est) {
    KP_REQUIRE_ARG(est);
    const PhaseAverages& a = est->result.averages;
    if (!a.LD_k_o) {
        return set_error(KP_ERR_EMPTY_PHASE,
                         "traction phase has no sample valid for the lift-to-drag estimate");
    }
    if (!a.LD_k_i) {
        return set_error(KP_ERR_EMPTY_PHASE,
                         "retraction phase has no sample valid for the lift-to-drag estimate");
    }
    return KP_OK;
}

kp_status kp_estimate_records_csv(const kp_estimate* est, char** out) {
    KP_REQUIRE_ARG(est && out);
    return guarded([&] { *out = dup_string(estimates_csv(est->result.records)); });
}

kp_status kp_estimate_averages_json(const kp_estimate* est, char** out) {
    KP_REQUIRE_ARG(est && out);
    return guarded([&] { *out = dup_string(phase_averages_json(est->result.averages)); });
}

kp_status kp_estimate_write(const kp_estimate* est, const char* dir) {
    KP_REQUIRE_ARG(est && dir);
    return guarded([&] {
        ensure_directory(dir);
        write_text_file(join_path(dir, "estimates.csv"), estimates_csv(est->result.records));
        write_text_file(join_path(dir, "phase_averages.json"),
                        phase_averages_json(est->result.averages));
    });
}

void kp_estimate_free(kp_estimate* est) { delete est; }

kp_status kp_write_file(const char* path, const char* text) {
    KP_REQUIRE_ARG(path && text);
    return guarded([&] { write_text_file(path, text); });
}

}  // extern "C"
