#include "kitepump/cycle.hpp"

#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <string>

#include "kitepump/errors.hpp"

namespace kitepump {

namespace {

constexpr double pi = std::numbers::pi;

bool is_no_equilibrium(const Error& e) {
    switch (e.kind()) {
    case ErrorKind::NoQuasiSteadySolution:
    case ErrorKind::NoSolution:
    case ErrorKind::NoTension:
    case ErrorKind::SagTooLarge:
        return true;
    default:
        return false;
    }
}

WindState wind_for(const SystemParams& p, const KiteState& s) {
    return wind_state_at(s.r * std::cos(s.theta), p.env);
}

struct Model {
    const SystemParams& p;

    EffectiveAero aero(const KiteState& s, const AeroSet& set) const {
        return effective_aero(set, tether_properties(s.r, p.tether, p.kite, set));
    }

    MassModel masses(const KiteState& s, const AeroSet& set) const {
        return MassModel{p.kite.m, tether_properties(s.r, p.tether, p.kite, set).m_t};
    }

    EquilibriumResult equilibrium(const KiteState& s, const AeroSet& set,
                                  const WindState& w) const {
        if (p.op.gravity) {
            return solve_kinematic_ratio(s, p.kite.S, masses(s, set), aero(s, set), w);
        }
        return massless_state(s, aero(s, set), p.kite.S, w);
    }

    double reel_factor(double F, const KiteState& s, const AeroSet& set,
                       const WindState& w) const {
        if (p.op.gravity) {
            return reel_factor_for_force_gravity(F, p.op.force_end, s, p.kite.S, masses(s, set),
                                                 aero(s, set), w);
        }
        return reel_factor_for_force_massless(F, s, aero(s, set), p.kite.S, w);
    }

    // solves f for the set-point and returns the resulting equilibrium
    EquilibriumResult hold_force(double F, KiteState& s, const AeroSet& set,
                                 const WindState& w) const {
        s.f = reel_factor(F, s, set, w);
        return equilibrium(s, set, w);
    }
};

Sample make_sample(double t, Phase phase, const KiteState& s, const EquilibriumResult& eq) {
    Sample out;
    out.t = t;
    out.phase = phase;
    out.r = s.r;
    out.theta = s.theta;
    out.phi = s.phi;
    out.chi = s.chi;
    out.f = s.f;
    out.v_w = eq.v_w;
    out.v_t = s.f * eq.v_w;
    out.v_k = eq.v_k;
    out.v_a = eq.v_a;
    out.lambda = eq.lambda;
    out.kappa = eq.kappa;
    out.F_t_kite = eq.F_t_kite;
    out.F_tg = eq.F_tg;
    out.P = eq.P;

    const double st = std::sin(s.theta), ct = std::cos(s.theta);
    const double sp = std::sin(s.phi), cp = std::cos(s.phi);
    const double v_r = s.f * eq.v_w;
    const double v_th = eq.lambda * eq.v_w * std::cos(s.chi);
    const double v_ph = eq.lambda * eq.v_w * std::sin(s.chi);
    out.v_kite = {v_r * st * cp + v_th * ct * cp - v_ph * sp,
                  v_r * st * sp + v_th * ct * sp + v_ph * cp,
                  v_r * ct - v_th * st};
    return out;
}

struct PhaseSpec {
    Phase phase;
    // sets s.f (and any other controlled variable) and returns the equilibrium
    std::function<EquilibriumResult(KiteState&)> control;
    // progress variable, target value and direction (+1 increasing)
    std::function<double(const KiteState&)> measure;
    std::function<void(KiteState&, double)> snap;
    double target;
    int direction;
    bool move_angles;
};

KiteState advance(const KiteState& s, const EquilibriumResult& eq, double h, bool move_angles) {
    KiteState n = s;
    n.r = s.r + s.f * eq.v_w * h;
    if (move_angles) {
        // explicit Euler in spherical components; phi stays put for the
        // in-plane phases (chi = 0 or 180 deg)
        n.theta = s.theta + eq.lambda * eq.v_w * std::cos(s.chi) * h / s.r;
    }
    return n;
}

bool reached(const PhaseSpec& spec, double x) {
    return spec.direction * (x - spec.target) >= 0.0;
}

PhaseResult integrate(const PhaseSpec& spec, KiteState s, const SystemParams& p, double t0) {
    PhaseResult res;
    res.phase = spec.phase;
    res.t_start = t0;
    if (reached(spec, spec.measure(s))) {
        return res;
    }
    const double dt = integration_step(p);
    const long stall_limit = static_cast<long>(std::ceil(10.0 / p.op.dT));
    const long step_cap = std::max(100000L, static_cast<long>(std::ceil(1000.0 / p.op.dT)));

    EquilibriumResult eq = spec.control(s);
    double t = t0;
    res.samples.push_back(make_sample(t, spec.phase, s, eq));
    long stall = 0;
    for (;;) {
        const double x = spec.measure(s);
        KiteState n = advance(s, eq, dt, spec.move_angles);
        double h = dt;
        const double xn = spec.measure(n);
        const bool done = reached(spec, xn);
        if (done) {
            h = dt * (spec.target - x) / (xn - x);
            n = advance(s, eq, h, spec.move_angles);
            spec.snap(n, spec.target);
        }
        stall = spec.direction * (xn - x) > 0.0 ? 0 : stall + 1;
        if (stall >= stall_limit) {
            fail(ErrorKind::NonTermination, std::string(phase_name(spec.phase)) +
                                                " phase makes no progress towards its end");
        }
        if (++res.steps > step_cap) {
            fail(ErrorKind::NonTermination, std::string(phase_name(spec.phase)) +
                                                " phase exceeded the step budget");
        }
        t += h;
        const double P_prev = eq.P;
        eq = spec.control(n);
        res.energy += 0.5 * (P_prev + eq.P) * h;
        res.samples.push_back(make_sample(t, spec.phase, n, eq));
        s = n;
        if (done) break;
    }
    res.duration = t - t0;
    res.mean_power = res.duration > 0.0 ? res.energy / res.duration : 0.0;
    return res;
}

double elevation_of(const KiteState& s) { return pi / 2.0 - s.theta; }

}  // namespace

void OperationSettings::validate() const {
    require(std::isfinite(r_min) && r_min > 0.0, ErrorKind::Validation,
            "operation: r_min must be > 0");
    require(std::isfinite(r_max) && r_max > r_min, ErrorKind::Validation,
            "operation: r_max must exceed r_min");
    require(std::isfinite(dT) && dT > 0.0 && dT <= 1.0, ErrorKind::Validation,
            "operation: dT must lie in (0, 1]");
    require(std::isfinite(F_in) && F_in > 0.0, ErrorKind::Validation,
            "operation: F_in must be > 0");
    require(std::isfinite(F_out) && F_out > F_in, ErrorKind::Validation,
            "operation: F_out must exceed F_in");
    require(std::isfinite(beta_o) && beta_o > 0.0 && beta_o < pi / 2.0, ErrorKind::Validation,
            "operation: beta_o must lie in (0, 90) deg");
    require(std::isfinite(phi_o) && std::abs(phi_o) < pi / 2.0, ErrorKind::Validation,
            "operation: phi_o must lie in (-90, 90) deg");
    require(std::isfinite(chi_o), ErrorKind::Validation, "operation: chi_o must be finite");
}

void SystemParams::validate() const {
    env.validate();
    kite.validate();
    tether.validate();
    op.validate();
    require(env.v_w_ref > 0.0, ErrorKind::Validation,
            "environment: v_w_ref must be > 0 to simulate a cycle");
}

std::string_view phase_name(Phase phase) noexcept {
    switch (phase) {
    case Phase::Retraction: return "retraction";
    case Phase::Transition: return "transition";
    case Phase::Traction: return "traction";
    }
    return "unknown";
}

double Sample::beta() const { return pi / 2.0 - theta; }

double integration_step(const SystemParams& p) {
    return (p.op.r_max - p.op.r_min) / p.env.v_w_ref * p.op.dT;
}

KiteState cycle_anchor(const SystemParams& p) {
    KiteState s;
    s.r = p.op.r_max;
    s.theta = pi / 2.0 - p.op.beta_o;
    s.phi = 0.0;
    s.chi = pi;
    return s;
}

PhaseResult simulate_retraction(const KiteState& start, const SystemParams& p, double t_start) {
    p.validate();
    const Model model{p};
    PhaseSpec spec{
        Phase::Retraction,
        [&](KiteState& s) {
            s.phi = 0.0;
            s.chi = pi;
            return model.hold_force(p.op.F_in, s, p.kite.retraction, wind_for(p, s));
        },
        [](const KiteState& s) { return s.r; },
        [](KiteState& s, double r) { s.r = r; },
        p.op.r_min,
        -1,
        true,
    };
    KiteState s = start;
    s.phi = 0.0;
    s.chi = pi;
    return integrate(spec, s, p, t_start);
}

PhaseResult simulate_transition(const KiteState& start, const SystemParams& p, double t_start) {
    p.validate();
    const Model model{p};
    const AeroSet& set = p.kite.traction;
    PhaseSpec spec{
        Phase::Transition,
        [&](KiteState& s) {
            s.phi = 0.0;
            s.chi = 0.0;
            s.f = 0.0;
            const WindState w = wind_for(p, s);
            double F0 = -std::numeric_limits<double>::infinity();
            EquilibriumResult eq0;
            try {
                eq0 = model.equilibrium(s, set, w);
                F0 = tension_at(eq0, p.op.force_end);
            } catch (const Error& e) {
                if (!is_no_equilibrium(e)) throw;
            }
            if (F0 > p.op.F_out) return model.hold_force(p.op.F_out, s, set, w);
            if (F0 < p.op.F_in) return model.hold_force(p.op.F_in, s, set, w);
            return eq0;
        },
        elevation_of,
        [](KiteState& s, double beta) { s.theta = pi / 2.0 - beta; },
        p.op.beta_o,
        -1,
        true,
    };
    KiteState s = start;
    s.phi = 0.0;
    s.chi = 0.0;
    return integrate(spec, s, p, t_start);
}

PhaseResult simulate_traction(const KiteState& start, const SystemParams& p, double t_start) {
    p.validate();
    const Model model{p};
    PhaseSpec spec{
        Phase::Traction,
        [&](KiteState& s) {
            return model.hold_force(p.op.F_out, s, p.kite.traction, wind_for(p, s));
        },
        [](const KiteState& s) { return s.r; },
        [](KiteState& s, double r) { s.r = r; },
        p.op.r_max,
        +1,
        false,
    };
    KiteState s = start;
    s.theta = pi / 2.0 - p.op.beta_o;
    s.phi = p.op.phi_o;
    s.chi = p.op.chi_o;
    return integrate(spec, s, p, t_start);
}

CycleResult simulate_cycle(const SystemParams& p) {
    p.validate();
    CycleResult out;
    KiteState s = cycle_anchor(p);
    double t = 0.0;

    auto end_state = [](const PhaseResult& ph, KiteState fallback) {
        if (ph.samples.empty()) return fallback;
        const Sample& last = ph.samples.back();
        fallback.r = last.r;
        fallback.theta = last.theta;
        fallback.phi = last.phi;
        fallback.chi = last.chi;
        fallback.f = last.f;
        return fallback;
    };

    out.phases[0] = simulate_retraction(s, p, t);
    s = end_state(out.phases[0], s);
    t += out.phases[0].duration;
    out.phases[1] = simulate_transition(s, p, t);
    s = end_state(out.phases[1], s);
    t += out.phases[1].duration;
    out.phases[2] = simulate_traction(s, p, t);

    double energy = 0.0;
    for (const auto& ph : out.phases) {
        energy += ph.energy;
        out.duration += ph.duration;
        out.steps += ph.steps;
    }
    out.P_m = energy / out.duration;
    out.z_mt = 0.5 * std::sin(p.op.beta_o) * (p.op.r_min + p.op.r_max);
    const WindState w = wind_state_at(out.z_mt, p.env);
    out.v_w_mt = w.v_w;
    out.zeta_m = out.P_m / (w.P_w * p.kite.S);
    return out;
}

namespace {

SystemParams uniform_copy(const SystemParams& p) {
    SystemParams u = p;
    u.env.uniform = true;
    return u;
}

}  // namespace

double anchor_retraction_reel_factor(const SystemParams& params) {
    params.validate();
    SystemParams p = uniform_copy(params);
    // both gravity modes share the massless reference so they are comparable
    p.op.gravity = false;
    const Model model{p};
    KiteState s = cycle_anchor(p);
    return model.reel_factor(p.op.F_in, s, p.kite.retraction, wind_for(p, s));
}

double steady_retraction_elevation_from(const SystemParams& params, double beta_start, double f,
                                        const SteadyElevationOptions& opt) {
    params.validate();
    const SystemParams p = uniform_copy(params);
    const Model model{p};
    const double dt = integration_step(p);
    KiteState s = cycle_anchor(p);
    s.theta = pi / 2.0 - beta_start;
    s.f = f;
    int quiet = 0;
    for (long step = 0; step < opt.max_steps; ++step) {
        double dtheta = 0.0;
        if (!opt.force_zero_lambda) {
            const EquilibriumResult eq = model.equilibrium(s, p.kite.retraction, wind_for(p, s));
            dtheta = eq.lambda * eq.v_w * std::cos(s.chi) * dt / s.r;
        }
        s.theta += dtheta;
        quiet = std::abs(dtheta) < opt.tol ? quiet + 1 : 0;
        if (quiet >= opt.consecutive) {
            return elevation_of(s);
        }
    }
    fail(ErrorKind::NonConvergence, "retraction elevation did not settle within " +
                                        std::to_string(opt.max_steps) + " steps");
}

double steady_retraction_elevation(const SystemParams& params, const SteadyElevationOptions& opt) {
    return steady_retraction_elevation_from(params, params.op.beta_o,
                                            anchor_retraction_reel_factor(params), opt);
}

std::vector<ConvergenceRow> convergence_study(const SystemParams& params,
                                              const std::vector<double>& dT_list) {
    require(!dT_list.empty(), ErrorKind::Validation, "convergence: time step list is empty");
    for (std::size_t i = 1; i < dT_list.size(); ++i) {
        require(dT_list[i] <= dT_list[i - 1], ErrorKind::Validation,
                "convergence: time steps must be sorted in descending order");
    }
    std::vector<std::future<CycleResult>> runs;
    runs.reserve(dT_list.size());
    for (double dT : dT_list) {
        SystemParams p = params;
        p.op.dT = dT;
        p.validate();
        runs.push_back(std::async(std::launch::async, [p] { return simulate_cycle(p); }));
    }
    std::vector<ConvergenceRow> rows;
    rows.reserve(runs.size());
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const CycleResult c = runs[i].get();
        rows.push_back(ConvergenceRow{dT_list[i], c.zeta_m, c.P_m, c.steps, 0.0});
    }
    const double ref = rows.back().zeta_m;
    for (auto& row : rows) row.ratio = row.zeta_m / ref;
    return rows;
}

}  // namespace kitepump
