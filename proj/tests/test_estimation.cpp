#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "kitepump/errors.hpp"
#include "kitepump/estimation.hpp"
#include "oracles.hpp"

using namespace kitepump;
using oracle::deg;

namespace {

// Massless system in uniform wind: no weight, no tether drag.
SystemParams bare(double v_w) {
    SystemParams p;
    p.env.v_w_ref = v_w;
    p.env.uniform = true;
    p.kite.S = 10.0;
    p.kite.m = 0.0;
    p.tether.d_t = 0.0;
    p.tether.rho_t = 0.0;
    return p;
}

LogRecord massless_record(double theta, double phi, double chi, double f, double C_R, double G,
                          const SystemParams& p) {
    const double v_w = p.env.v_w_ref, rho = p.env.rho0;
    const auto m = oracle::massless(theta, phi, chi, f, C_R, G, v_w, rho, p.kite.S);
    LogRecord rec;
    rec.r = 400.0;
    rec.theta = theta;
    rec.phi = phi;
    rec.chi = chi;
    rec.F_tg = m.F;
    rec.v_t = f * v_w;
    rec.v_w_ref = v_w;
    rec.v_kite = oracle::kite_velocity(theta, phi, chi, f * v_w, m.lambda * v_w);
    return rec;
}

// Record of a gravity-including equilibrium of the strong-wind system.
LogRecord gravity_record(const SystemParams& p, const AeroSet& set, double r, double theta,
                         double phi, double chi, double F) {
    KiteState s{r, theta, phi, chi, 0.0};
    const TetherProperties tp = tether_properties(r, p.tether, p.kite, set);
    const EffectiveAero aero = effective_aero(set, tp);
    const WindState w = wind_state_at(s.altitude(), p.env);
    s.f = reel_factor_for_force_gravity(F, ForceEnd::Kite, s, p.kite.S, {p.kite.m, tp.m_t}, aero, w);
    const EquilibriumResult eq = solve_kinematic_ratio(s, p.kite.S, {p.kite.m, tp.m_t}, aero, w);
    LogRecord rec;
    rec.r = r;
    rec.theta = theta;
    rec.phi = phi;
    rec.chi = chi;
    rec.F_tg = eq.F_tg;
    rec.v_t = s.f * w.v_w;
    rec.v_w_ref = p.env.v_w_ref;
    rec.v_kite = oracle::kite_velocity(theta, phi, chi, s.f * w.v_w, eq.lambda * w.v_w);
    return rec;
}

}  // namespace

TEST_CASE("hovering at the horizon") {
    const SystemParams p = bare(8.0);
    LogRecord rec;
    rec.r = 300.0;
    rec.theta = 90 * deg;
    rec.v_w_ref = 8.0;
    const Kinematics k = derive_kinematics(rec, p.env);
    CHECK(k.flag == SampleFlag::Ok);
    CHECK(k.v_a == doctest::Approx(8.0));
    CHECK(k.kappa == 0.0);
}

TEST_CASE("reeling at the radial wind speed is flagged") {
    const SystemParams p = bare(8.0);
    LogRecord rec;
    rec.r = 300.0;
    rec.theta = 70 * deg;
    rec.phi = 10 * deg;
    rec.v_w_ref = 8.0;
    rec.v_t = 8.0 * std::sin(rec.theta) * std::cos(rec.phi);
    CHECK(derive_kinematics(rec, p.env).flag == SampleFlag::NoRadialWind);
    CHECK_FALSE(estimate_CR(rec, p).cr_valid);
}

TEST_CASE("below the roughness length is flagged") {
    SystemParams p = bare(8.0);
    p.env.uniform = false;
    LogRecord rec;
    rec.r = 300.0;
    rec.theta = 90 * deg;
    rec.v_w_ref = 8.0;
    CHECK(derive_kinematics(rec, p.env).flag == SampleFlag::BelowRoughness);
}

TEST_CASE("massless round trip") {
    const SystemParams p = bare(9.0);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> th(30 * deg, 80 * deg), ph(-30 * deg, 30 * deg),
        ch(0.0, 2 * oracle::pi), ff(-0.8, 0.3), gg(2.0, 7.0);
    for (int i = 0; i < 200; ++i) {
        const double theta = th(rng), G = gg(rng);
        const LogRecord rec = massless_record(theta, ph(rng), ch(rng), ff(rng), 0.71, G, p);
        if (!std::isfinite(rec.v_kite[0])) continue;  // no equilibrium for this draw
        const Kinematics k = derive_kinematics(rec, p.env);
        REQUIRE(k.flag == SampleFlag::Ok);
        CHECK(k.kappa == doctest::Approx(G).epsilon(1e-6));
        const EstimateRecord e = estimate_LD(rec, Phase::Transition, p);
        CHECK(e.C_R == doctest::Approx(0.71).epsilon(1e-6));
        CHECK(e.C_R_k == doctest::Approx(0.71).epsilon(1e-6));
        CHECK(e.LD_sys == doctest::Approx(e.kappa).epsilon(1e-12));
        CHECK(e.LD_k == doctest::Approx(e.LD_sys).epsilon(1e-12));
    }
}

TEST_CASE("gravity round trip, strong-wind system") {
    const SystemParams p = fixtures::params("strong_wind");
    SUBCASE("traction") {
        const LogRecord rec = gravity_record(p, p.kite.traction, 550.0, 63 * deg, 10.5 * deg, 100.9 * deg, 3008.0);
        const TetherProperties tp = tether_properties(rec.r, p.tether, p.kite, p.kite.traction);
        EstimationOptions o;
        o.crosswind_ratio = 1.0;
        const EstimateRecord e = estimate_LD(rec, Phase::Traction, p, o);
        CHECK(e.valid);
        CHECK_FALSE(estimate_LD(rec, Phase::Traction, p).valid);
        CHECK(e.C_R == doctest::Approx(effective_aero(p.kite.traction, tp).resultant()).epsilon(0.02));
        CHECK(e.C_R_k == doctest::Approx(p.kite.traction.kite_resultant()).epsilon(0.02));
        const Kinematics k = derive_kinematics(rec, p.env);
        const double W = (p.kite.m + 0.5 * tp.m_t) * oracle::g * std::sin(rec.theta) * std::cos(*rec.chi);
        double G = k.kappa;
        for (int i = 0; i < 2; ++i) G = k.kappa - std::sqrt(1.0 + k.kappa * k.kappa) * W * std::sqrt(1.0 + G * G) / e.F_a;
        CHECK(e.LD_sys == doctest::Approx(G).epsilon(1e-12));
    }
    SUBCASE("retraction") {
        const LogRecord rec = gravity_record(p, p.kite.retraction, 550.0, 40 * deg, 0.0, 180 * deg, 749.0);
        const EstimateRecord e = estimate_LD(rec, Phase::Retraction, p);
        CHECK(e.valid);
        CHECK(e.C_R_k == doctest::Approx(p.kite.retraction.kite_resultant()).epsilon(0.02));
        CHECK(e.LD_k == doctest::Approx(3.1).epsilon(0.02));
    }
}

// The tangential balance behind the L/D estimate drops the tilt of the
// aerodynamic force out of the radial direction. At the strong-wind traction
// state v_k is only about 1.1 v_w and the estimate lands near 3.76.
TEST_CASE("traction L/D round trip within 2%" * doctest::should_fail()) {
    const SystemParams p = fixtures::params("strong_wind");
    const LogRecord rec = gravity_record(p, p.kite.traction, 550.0, 63 * deg, 10.5 * deg, 100.9 * deg, 3008.0);
    EstimationOptions o;
    o.crosswind_ratio = 1.0;
    const EstimateRecord e = estimate_LD(rec, Phase::Traction, p, o);
    CHECK(e.LD_k == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("regime tests") {
    const SystemParams p = bare(9.0);
    const LogRecord slow = massless_record(80 * deg, 0.0, 90 * deg, 0.2, 0.71, 1.0, p);
    REQUIRE(std::isfinite(slow.v_kite[0]));
    CHECK(estimate_LD(slow, Phase::Traction, p).flag == SampleFlag::Regime);
    const LogRecord off_plane = massless_record(60 * deg, 20 * deg, 180 * deg, -0.5, 0.2, 3.0, p);
    CHECK(estimate_LD(off_plane, Phase::Retraction, p).flag == SampleFlag::Regime);
    const LogRecord in_plane = massless_record(60 * deg, 2 * deg, 178 * deg, -0.5, 0.2, 3.0, p);
    CHECK(estimate_LD(in_plane, Phase::Retraction, p).valid);
}

TEST_CASE("segmentation") {
    const SystemParams p = fixtures::params("strong_wind");
    const CycleResult c = simulate_cycle(p);
    std::vector<LogRecord> log = export_telemetry(c, p);
    for (std::size_t i = 1; i < log.size(); ++i) CHECK(log[i].t > log[i - 1].t);

    SUBCASE("labels win") {
        const auto ph = segment_phases(log);
        for (std::size_t i = 0; i < log.size(); ++i) CHECK(ph[i] == *log[i].phase);
    }
    SUBCASE("reeling speed heuristic") {
        log.back().phase.reset();
        const auto ph = segment_phases(log);
        int agree = 0;
        for (std::size_t i = 0; i + 1 < log.size(); ++i) agree += ph[i] == *log[i].phase;
        CHECK(agree > 0.9 * static_cast<double>(log.size()));
        CHECK(ph.front() == Phase::Retraction);
        CHECK(ph.back() == Phase::Traction);
    }
    SUBCASE("course angles from positions") {
        std::vector<LogRecord> bare_log = log;
        for (auto& r : bare_log) r.chi.reset();
        const auto filled = with_course_angles(bare_log);
        // traction holds position, so its course comes from the velocity
        for (std::size_t i = 1; i + 1 < log.size(); ++i) {
            if (log[i - 1].phase == Phase::Traction && log[i].phase == Phase::Traction &&
                log[i + 1].phase == Phase::Traction) {
                CHECK(*filled[i].chi == doctest::Approx(*log[i].chi).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("phase averages of a simulated cycle") {
    const SystemParams p = fixtures::params("strong_wind");
    const auto log = export_telemetry(simulate_cycle(p), p);
    const EstimationResult r = segment_and_average(log, p);
    CHECK(r.records.size() == log.size());
    CHECK(r.averages.C_R_k_o == doctest::Approx(0.71).epsilon(0.02));
    CHECK(r.averages.C_R_k_i == doctest::Approx(0.18).epsilon(0.02));
    const double ratio = r.averages.C_R_k_o / r.averages.C_R_k_i;
    CHECK(ratio > 3.0);
    CHECK(ratio < 4.0);
    REQUIRE(r.averages.LD_k_i.has_value());
    CHECK(*r.averages.LD_k_i == doctest::Approx(3.1).epsilon(0.02));
}

TEST_CASE("degenerate series") {
    const SystemParams p = fixtures::params("strong_wind");
    LogRecord rec;
    rec.t = 0.0;
    rec.r = 400.0;
    rec.theta = 60 * deg;
    rec.F_tg = 800.0;
    rec.v_w_ref = 9.9;
    try {
        segment_and_average({rec}, p);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyPhase);
    }
    CHECK_THROWS_AS(segment_and_average({}, p), Error);
    LogRecord later = rec;
    try {
        segment_and_average({rec, later}, p);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Validation);
    }
}
