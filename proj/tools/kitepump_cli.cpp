// Command line front end over the C interface.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kitepump/kitepump.h"

namespace {

int exit_code(kp_status st) {
    switch (kp_status_family(st)) {
    case KP_FAMILY_NONE: return 0;
    case KP_FAMILY_INPUT: return 2;
    case KP_FAMILY_SOLVER: return 3;
    default: return 1;
    }
}

// Reports a failed call and converts it to the process exit code.
struct Failure {
    kp_status status;
};

void check(kp_status st) {
    if (st != KP_OK) throw Failure{st};
}

struct Config {
    kp_config* ptr = nullptr;
    ~Config() { kp_config_free(ptr); }
};

void load(Config& cfg, const std::string& path, bool no_gravity, const std::string& out) {
    check(kp_config_load(path.c_str(), &cfg.ptr));
    if (no_gravity) check(kp_config_set_gravity(cfg.ptr, 0));
    if (!out.empty()) check(kp_config_set_output_dir(cfg.ptr, out.c_str()));
}

std::string output_dir(const Config& cfg) {
    char* s = nullptr;
    check(kp_config_output_dir(cfg.ptr, &s));
    std::string dir = s;
    kp_string_free(s);
    return dir;
}

int run_simulate(const std::string& config, bool no_gravity, const std::string& out,
                 const std::string& telemetry) {
    Config cfg;
    load(cfg, config, no_gravity, out);
    kp_cycle* cycle = nullptr;
    check(kp_simulate(cfg.ptr, &cycle));
    struct Guard {
        kp_cycle* c;
        ~Guard() { kp_cycle_free(c); }
    } guard{cycle};

    const std::string dir = output_dir(cfg);
    check(kp_cycle_write(cycle, dir.c_str()));
    if (!telemetry.empty()) {
        char* csv = nullptr;
        check(kp_cycle_telemetry_csv(cycle, &csv));
        const kp_status st = kp_write_file(telemetry.c_str(), csv);
        kp_string_free(csv);
        check(st);
    }
    kp_cycle_summary s;
    check(kp_cycle_summary_get(cycle, &s));
    std::printf("P_m = %.1f W, cycle time = %.2f s, zeta_m = %.4f, z_mt = %.1f m\n", s.P_m,
                s.duration, s.zeta_m, s.z_mt);
    const char* names[] = {"retraction", "transition", "traction"};
    for (int i = 0; i < 3; ++i) {
        kp_phase_summary p;
        check(kp_cycle_phase(cycle, static_cast<kp_phase>(i), &p));
        std::printf("  %-10s %10.1f W %8.2f s\n", names[i], p.mean_power, p.duration);
    }
    std::printf("wrote %s\n", dir.c_str());
    return 0;
}

int write_table(kp_table* table, const std::string& dir) {
    struct Guard {
        kp_table* t;
        ~Guard() { kp_table_free(t); }
    } guard{table};
    check(kp_table_write(table, dir.c_str()));
    char* csv = nullptr;
    check(kp_table_csv(table, &csv));
    std::fputs(csv, stdout);
    kp_string_free(csv);
    char* summary = nullptr;
    check(kp_table_summary_json(table, &summary));
    std::fputs(summary, stdout);
    kp_string_free(summary);
    return 0;
}

int run_convergence(const std::string& config, bool no_gravity, const std::string& out,
                    const std::vector<double>& dts) {
    Config cfg;
    load(cfg, config, no_gravity, out);
    kp_table* table = nullptr;
    check(kp_convergence(cfg.ptr, dts.data(), dts.size(), &table));
    return write_table(table, output_dir(cfg));
}

int run_sweep(const std::string& config, bool no_gravity, const std::string& out,
              const std::string& spec_path) {
    Config cfg;
    load(cfg, config, no_gravity, out);
    std::FILE* f = std::fopen(spec_path.c_str(), "rb");
    if (!f) {
        std::fprintf(stderr, "error: IoError: cannot open %s\n", spec_path.c_str());
        return 1;
    }
    std::string spec;
    char buf[4096];
    for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, f)) > 0;) spec.append(buf, n);
    std::fclose(f);
    kp_table* table = nullptr;
    check(kp_sweep(cfg.ptr, spec.c_str(), &table));
    return write_table(table, output_dir(cfg));
}

int run_estimate(const std::string& config, const std::string& log, const std::string& out,
                 double crosswind, double tol_deg) {
    Config cfg;
    load(cfg, config, false, out);
    kp_estimate_options opt;
    kp_estimate_options_default(&opt);
    if (crosswind >= 0.0) opt.crosswind_ratio = crosswind;
    if (tol_deg >= 0.0) opt.in_plane_tol_deg = tol_deg;
    kp_estimate* est = nullptr;
    check(kp_estimate_run_file(cfg.ptr, log.c_str(), &opt, &est));
    struct Guard {
        kp_estimate* e;
        ~Guard() { kp_estimate_free(e); }
    } guard{est};
    const std::string dir = output_dir(cfg);
    check(kp_estimate_write(est, dir.c_str()));
    char* json = nullptr;
    check(kp_estimate_averages_json(est, &json));
    std::fputs(json, stdout);
    kp_string_free(json);
    // files are written either way; a missing average is still a failure
    check(kp_estimate_complete(est));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pumping cycle kite power simulator"};
    app.require_subcommand(1);

    std::string config, out, telemetry, spec, log;
    bool no_gravity = false;
    std::vector<double> dts{0.1, 0.05, 0.01, 0.001, 0.0001};
    double crosswind = -1.0, tol_deg = -1.0;

    auto* sim = app.add_subcommand("simulate", "Simulate one pumping cycle");
    sim->add_option("--config", config, "Run configuration (JSON)")->required();
    sim->add_flag("--no-gravity", no_gravity, "Use the massless model");
    sim->add_option("--out", out, "Output directory (overrides the config)");
    sim->add_option("--telemetry", telemetry, "Also export the cycle as telemetry CSV");

    auto* conv = app.add_subcommand("convergence", "Time step convergence study");
    conv->add_option("--config", config, "Run configuration (JSON)")->required();
    conv->add_option("--dt-list", dts, "Time steps, descending; the last is the reference")
        ->delimiter(',');
    conv->add_flag("--no-gravity", no_gravity, "Use the massless model");
    conv->add_option("--out", out, "Output directory (overrides the config)");

    auto* sw = app.add_subcommand("sweep", "Sweep one configuration parameter");
    sw->add_option("--config", config, "Run configuration (JSON)")->required();
    sw->add_option("--spec", spec, "Sweep specification (JSON)")->required();
    sw->add_flag("--no-gravity", no_gravity, "Use the massless model");
    sw->add_option("--out", out, "Output directory (overrides the config)");

    auto* est = app.add_subcommand("estimate", "Estimate aerodynamic coefficients from telemetry");
    est->add_option("--log", log, "Telemetry CSV")->required();
    est->add_option("--config", config, "System configuration (JSON)")->required();
    est->add_option("--out", out, "Output directory (overrides the config)");
    est->add_option("--crosswind-ratio", crosswind, "Minimum v_k/v_w for traction L/D samples (default 1.5)");
    est->add_option("--in-plane-tol", tol_deg, "Retraction course and azimuth tolerance [deg]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*sim) return run_simulate(config, no_gravity, out, telemetry);
        if (*conv) return run_convergence(config, no_gravity, out, dts);
        if (*sw) return run_sweep(config, no_gravity, out, spec);
        if (*est) return run_estimate(config, log, out, crosswind, tol_deg);
    } catch (const Failure& f) {
        std::fprintf(stderr, "error: %s: %s\n", kp_status_name(f.status), kp_last_error());
        return exit_code(f.status);
    }
    return 2;
}
