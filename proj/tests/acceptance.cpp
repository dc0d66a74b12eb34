// Acceptance suite: one PASS/FAIL line per criterion, details indented below.
// Usage: acceptance [path-to-cli] [scratch-dir]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "fixtures.hpp"
#include "kitepump/cycle.hpp"
#include "kitepump/errors.hpp"
#include "kitepump/estimation.hpp"
#include "kitepump/io.hpp"
#include "kitepump/sweep.hpp"
#include "oracles.hpp"

using namespace kitepump;
using oracle::deg;

namespace {

struct Report {
    std::vector<std::string> lines;
    bool ok = true;

    void check(bool pass, const std::string& what) {
        ok = ok && pass;
        lines.push_back(std::string(pass ? "ok   " : "MISS ") + what);
    }
    void note(const std::string& what) { lines.push_back("     " + what); }
};

int failures = 0;

void emit(int id, const char* title, const Report& r) {
    std::printf("[%s] %2d %s\n", r.ok ? "PASS" : "FAIL", id, title);
    for (const auto& l : r.lines) std::printf("       %s\n", l.c_str());
    std::fflush(stdout);
    if (!r.ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// -- 1 ---------------------------------------------------------------------

Report wind_golden() {
    Report r;
    const struct {
        const char* name;
        double z, expect;
    } cases[] = {{"strong_wind", fixtures::strong_traction_altitude, fixtures::strong_wind_at_traction},
                 {"moderate_wind", fixtures::moderate_traction_altitude, fixtures::moderate_wind_at_traction}};
    for (const auto& c : cases) {
        const double v = wind_state_at(c.z, fixtures::params(c.name).env).v_w;
        r.check(std::abs(v - c.expect) <= 0.05,
                std::string(c.name) + fmt(": v_w(%.0f m) = %.3f m/s, expected %.1f +- 0.05", c.z, v, c.expect));
    }
    return r;
}

// -- 2, 3 ------------------------------------------------------------------

void compare_phase(Report& r, const char* label, const PhaseResult& ph, const fixtures::PhaseRef& ref,
                   double power_tol, double time_tol_rel, double time_tol_abs) {
    const double P = ph.mean_power / 1000.0;
    const double dP = P / ref.power_kW - 1.0;
    r.check(std::abs(dP) <= power_tol,
            std::string(label) + fmt(" power %.2f kW vs %.2f (%+.1f%%)", P, ref.power_kW, 100 * dP) +
                fmt(", tol %.0f%%", 100 * power_tol));
    const double dt = ph.duration - ref.time_s;
    const bool t_ok = time_tol_abs > 0.0 ? std::abs(dt) <= time_tol_abs
                                         : std::abs(dt / ref.time_s) <= time_tol_rel;
    r.check(t_ok, std::string(label) + fmt(" time %.1f s vs %.0f (%+.1f s)", ph.duration, ref.time_s, dt) +
                      (time_tol_abs > 0.0 ? fmt(", tol %.0f s", time_tol_abs)
                                          : fmt(", tol %.0f%%", 100 * time_tol_rel)));
}

Report table_reproduction(const char* preset, const fixtures::CycleRef& on, const fixtures::CycleRef& off) {
    Report r;
    for (bool gravity : {true, false}) {
        const fixtures::CycleRef& ref = gravity ? on : off;
        const SystemParams p = fixtures::params(preset, gravity);
        const auto t0 = std::chrono::steady_clock::now();
        CycleResult c;
        try {
            c = simulate_cycle(p);
        } catch (const Error& e) {
            r.check(false, std::string(gravity ? "gravity on: " : "gravity off: ") + std::string(e.name()) + ": " + e.what());
            continue;
        }
        const double elapsed = seconds_since(t0);
        r.note(gravity ? "gravity on" : "gravity off");
        compare_phase(r, "  retraction", c.phases[0], ref.retraction, 0.10, 0.10, 0.0);
        compare_phase(r, "  transition", c.phases[1], ref.transition, 0.40, 0.0, 4.0);
        compare_phase(r, "  traction  ", c.phases[2], ref.traction, 0.10, 0.10, 0.0);
        PhaseResult whole;
        whole.mean_power = c.P_m;
        whole.duration = c.duration;
        compare_phase(r, "  cycle     ", whole, ref.cycle, 0.15, 0.15, 0.0);
        r.check(elapsed < 1.0, fmt("  runtime %.3f s (< 1 s)", elapsed));
    }
    return r;
}

// -- 4 ---------------------------------------------------------------------

Report measured_constants() {
    Report r;
    for (const auto& [name, m] : {std::pair{"strong", fixtures::strong_measured},
                                  std::pair{"moderate", fixtures::moderate_measured}}) {
        r.note(std::string(name) + fmt(" measured: retraction %.2f kW / %.0f s,", m.retraction.power_kW, m.retraction.time_s) +
               fmt(" traction %.2f kW / %.0f s,", m.traction.power_kW, m.traction.time_s) +
               fmt(" cycle %.2f kW / %.0f s", m.cycle.power_kW, m.cycle.time_s));
    }
    r.note("reference only, not compared");
    return r;
}

// -- 5 ---------------------------------------------------------------------

Report convergence() {
    Report r;
    const auto t0 = std::chrono::steady_clock::now();
    for (bool gravity : {true, false}) {
        const SystemParams p = fixtures::params("strong_wind", gravity);
        try {
            const auto rows = convergence_study(p, {0.1, 0.05, 0.01, 0.001, 1e-4});
            double worst = 0.0;
            for (std::size_t i = 0; i + 1 < rows.size(); ++i) worst = std::max(worst, std::abs(rows[i].ratio - 1.0));
            r.check(worst < 0.03, std::string(gravity ? "gravity on" : "gravity off") +
                                      fmt(": max |zeta_m/zeta_ref - 1| = %.4f (zeta_ref %.5f)", worst, rows.back().zeta_m));
        } catch (const Error& e) {
            r.check(false, std::string(e.name()) + ": " + e.what());
        }
    }
    const double elapsed = seconds_since(t0);
    r.check(elapsed < 120.0, fmt("runtime %.1f s (< 120 s)", elapsed));
    return r;
}

// -- 6 ---------------------------------------------------------------------

Report massless_limit() {
    Report r;
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int states = 0, attempts = 0;
    double worst = 0.0;
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-12); };
    while (states < 1000 && attempts < 100000) {
        ++attempts;
        KiteState s{50.0 + 900.0 * u(rng), (5.0 + 85.0 * u(rng)) * deg, (-60.0 + 120.0 * u(rng)) * deg,
                    360.0 * u(rng) * deg, 0.0};
        const double b = std::sin(s.theta) * std::cos(s.phi);
        s.f = -2.0 + (b + 2.0) * u(rng);
        const EffectiveAero aero{0.05 + 1.2 * u(rng), 0.0};
        const EffectiveAero full{aero.C_L, aero.C_L / (1.5 + 8.0 * u(rng))};
        const double S = 3.0 + 30.0 * u(rng);
        const WindState w = wind_state_from(2.0 + 20.0 * u(rng), 0.9 + 0.35 * u(rng));
        EquilibriumResult ml;
        try {
            ml = massless_state(s, full, S, w);
        } catch (const Error&) {
            continue;  // not a valid state
        }
        ++states;
        try {
            const EquilibriumResult gr = solve_kinematic_ratio(s, S, {0.0, 0.0}, full, w);
            for (double d : {rel(gr.kappa, ml.kappa), rel(gr.lambda, ml.lambda), rel(gr.v_a, ml.v_a),
                             rel(gr.v_k, ml.v_k), rel(gr.F_a, ml.F_a), rel(gr.F_t_kite, ml.F_t_kite),
                             rel(gr.F_tg, ml.F_tg), rel(gr.P, ml.P), rel(gr.zeta, ml.zeta)}) {
                worst = std::max(worst, d);
            }
        } catch (const Error& e) {
            worst = INFINITY;
            r.note(std::string("gravity solver failed: ") + e.what());
        }
    }
    r.check(states == 1000, fmt("%.0f valid states drawn", states));
    r.check(worst <= 1e-6, fmt("max relative difference %.3g (tol 1e-6)", worst));
    return r;
}

// -- 7 ---------------------------------------------------------------------

Report argmax() {
    Report r;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> th(40 * deg, 89.5 * deg), ph(-60 * deg, 60 * deg),
        cr(0.3, 1.2), ld(2.0, 8.0);
    const WindState w = wind_state_from(10.0, 1.225);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        KiteState s{300.0, th(rng), ph(rng), 90 * deg, 0.0};
        const double C_L = cr(rng), G = ld(rng);
        const EffectiveAero aero{C_L, C_L / G};
        const double b = std::sin(s.theta) * std::cos(s.phi);
        double best_f = 0.0, best = -INFINITY;
        for (long k = 1; k * 1e-5 < b; ++k) {
            s.f = k * 1e-5;
            double z;
            try {
                z = massless_state(s, aero, 10.0, w).zeta;
            } catch (const Error&) {
                continue;  // no tangential equilibrium close to f = b
            }
            if (z > best) {
                best = z;
                best_f = s.f;
            }
        }
        worst = std::max(worst, std::abs(best_f - b / 3.0));
    }
    r.check(worst <= 2e-5, fmt("max |f_argmax - b/3| = %.3g over 100 states (tol 2e-5)", worst));
    return r;
}

// -- 8 ---------------------------------------------------------------------

Report kinematic_ordering() {
    Report r;
    const double theta = 65 * deg, f = 0.37, S = 16.7, G = 5.0;
    const EffectiveAero aero{1.0, 1.0 / G};
    const WindState w = wind_state_from(7.0, 1.225);
    r.note("beta 25 deg, phi 0, f 0.37, C_L 1, L/D 5, S 16.7 m2, v_w 7 m/s, no tether mass");
    for (double chi : {180.0, 0.0}) {
        std::vector<double> kap;
        for (double m : {10.0, 30.0, 50.0}) {
            auto ld = [&](double k) {
                return oracle::implied_lift_to_drag(k, theta, 0.0, chi * deg, f, aero.resultant(), 7.0, 1.225, S, m, 0.0);
            };
            const oracle::ScanResult scan = oracle::scan_kinematic_ratio(G, 3.0 * G, 150000, ld);
            const std::string tag = fmt("chi %3.0f, m %2.0f: ", chi, m);
            try {
                const double k = solve_kinematic_ratio({200.0, theta, 0.0, chi * deg, f}, S, {m, 0.0}, aero, w).kappa;
                kap.push_back(k);
                const bool side = chi > 90.0 ? k < G : k > G;
                r.check(side, tag + fmt("kappa %.6f", k) + (chi > 90.0 ? ", expected below L/D" : ", expected above L/D"));
                r.check(std::abs(k / scan.kappa - 1.0) <= 1e-4,
                        tag + fmt("grid scan %.6f, rel diff %.2g", scan.kappa, std::abs(k / scan.kappa - 1.0)));
            } catch (const Error& e) {
                r.check(false, tag + std::string(e.name()) + " (" + e.what() + ")" +
                                   fmt("; grid scan best |G - 5| = %.3g at kappa %.4f", scan.residual, scan.kappa));
            }
        }
        if (kap.size() == 3) {
            const bool mono = chi > 90.0 ? (kap[0] > kap[1] && kap[1] > kap[2]) : (kap[0] < kap[1] && kap[1] < kap[2]);
            r.check(mono, fmt("chi %3.0f: strictly monotone in m", chi));
        } else {
            r.check(false, fmt("chi %3.0f: monotonicity needs all three masses", chi));
        }
    }
    return r;
}

// -- 9 ---------------------------------------------------------------------

Report estimation_round_trip() {
    Report r;
    const SystemParams p = fixtures::params("strong_wind");
    const auto log = parse_telemetry_csv(telemetry_csv(export_telemetry(simulate_cycle(p), p)));
    const EstimationResult est = segment_and_average(log, p);
    const PhaseAverages& a = est.averages;
    auto cmp = [&](const char* name, std::optional<double> v, double ref) {
        if (!v) {
            r.check(false, std::string(name) + fmt(": no valid sample, expected %.2f", ref));
            return;
        }
        const double d = *v / ref - 1.0;
        r.check(std::abs(d) <= 0.02, std::string(name) + fmt(" = %.4f vs %.2f (%+.1f%%)", *v, ref, 100 * d));
    };
    cmp("C_R_o ", a.C_R_k_o, 0.71);
    cmp("C_R_i ", a.C_R_k_i, 0.18);
    cmp("LD_k_o", a.LD_k_o, 4.0);
    cmp("LD_k_i", a.LD_k_i, 3.1);
    r.note(fmt("samples valid for L/D: traction %.0f of %.0f, retraction %.0f", a.ld_valid_o, a.samples_o, a.ld_valid_i));
    if (!a.LD_k_o) {
        EstimationOptions loose;
        loose.crosswind_ratio = 0.0;
        const auto v = segment_and_average(log, p, loose).averages.LD_k_o;
        if (v) r.note(fmt("without the crosswind threshold LD_k_o = %.4f (%+.1f%%)", *v, 100 * (*v / 4.0 - 1.0)));
    }
    return r;
}

// -- 10 --------------------------------------------------------------------

std::string file_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

bool same_tree(const std::filesystem::path& a, const std::filesystem::path& b, std::string& why) {
    std::vector<std::string> names;
    for (const auto& e : std::filesystem::recursive_directory_iterator(a)) {
        if (e.is_regular_file()) names.push_back(std::filesystem::relative(e.path(), a).string());
    }
    if (names.empty()) {
        why = "no output files";
        return false;
    }
    for (const auto& n : names) {
        if (!std::filesystem::exists(b / n) || file_bytes(a / n) != file_bytes(b / n)) {
            why = n + " differs";
            return false;
        }
    }
    why = std::to_string(names.size()) + " files identical";
    return true;
}

Report determinism(const std::string& cli, const std::filesystem::path& scratch) {
    Report r;
    // library level
    {
        const SystemParams p = fixtures::params("strong_wind");
        const CycleResult a = simulate_cycle(p), b = simulate_cycle(p);
        r.check(timeseries_csv(a) == timeseries_csv(b) && cycle_summary_json(a, p) == cycle_summary_json(b, p),
                "library: simulate outputs identical");
    }
    if (cli.empty()) {
        r.note("no CLI path given; command-level check skipped");
        return r;
    }
    namespace fs = std::filesystem;
    fs::remove_all(scratch);
    fs::create_directories(scratch);
    const std::string cfg = fixtures::preset_path("strong_wind");
    const fs::path spec = scratch / "spec.json";
    std::ofstream(spec) << R"({"parameter": "operation.F_out", "values": [2000, 3008, 4000]})";
    // both runs of a command use the same paths; the first is moved aside
    const fs::path work = scratch / "work";
    const fs::path telemetry = scratch / "simulate" / "0" / "telemetry.csv";

    struct Command {
        const char* name;
        std::string args;
    };
    const std::vector<Command> commands = {
        {"simulate", "simulate --config " + cfg + " --telemetry " + (work / "telemetry.csv").string()},
        {"simulate-no-gravity", "simulate --no-gravity --config " + cfg},
        {"convergence", "convergence --config " + cfg + " --dt-list 0.1,0.05,0.01"},
        {"sweep", "sweep --config " + cfg + " --spec " + spec.string()},
        {"estimate", "estimate --config " + cfg + " --log " + telemetry.string()},
    };
    for (const auto& c : commands) {
        std::string why;
        int codes[2];
        for (int run = 0; run < 2; ++run) {
            fs::remove_all(work);
            fs::create_directories(work);
            const std::string line = "\"" + cli + "\" " + c.args + " --out " + (work / "files").string() + " > " +
                                     (work / "stdout.txt").string() + " 2> " + (work / "stderr.txt").string();
            const int status = std::system(line.c_str());
            codes[run] = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
            fs::create_directories(scratch / c.name);
            fs::rename(work, scratch / c.name / std::to_string(run));
        }
        const bool same = same_tree(scratch / c.name / "0", scratch / c.name / "1", why);
        r.check(same && codes[0] == codes[1],
                std::string("cli ") + c.name + ": " + why + fmt(", exit status %.0f/%.0f", codes[0], codes[1]));
    }
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    const std::filesystem::path scratch =
        argc > 2 ? std::filesystem::path(argv[2]) : std::filesystem::temp_directory_path() / "kitepump_acceptance";

    auto run = [](int id, const char* title, const std::function<Report()>& body) {
        Report r;
        try {
            r = body();
        } catch (const std::exception& e) {
            r.check(false, std::string("unexpected error: ") + e.what());
        }
        emit(id, title, r);
    };
    run(1, "wind speed at the mean traction altitude", wind_golden);
    run(2, "strong-wind cycle table", [] {
        return table_reproduction("strong_wind", fixtures::strong_gravity, fixtures::strong_massless);
    });
    run(3, "moderate-wind cycle table", [] {
        return table_reproduction("moderate_wind", fixtures::moderate_gravity, fixtures::moderate_massless);
    });
    run(4, "measured columns shipped as reference constants", measured_constants);
    run(5, "time step convergence", convergence);
    run(6, "massless limit of the gravity solver", massless_limit);
    run(7, "power harvesting factor argmax", argmax);
    run(8, "kinematic ratio ordering", kinematic_ordering);
    run(9, "estimation round trip", estimation_round_trip);
    run(10, "determinism", [&] { return determinism(cli, scratch); });

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
