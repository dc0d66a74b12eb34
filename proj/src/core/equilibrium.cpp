#include "kitepump/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "kitepump/errors.hpp"

namespace kitepump {

namespace {

constexpr double pi = std::numbers::pi;

struct Geometry {
    double a;
    double b;
};

Geometry geometry(const KiteState& s) {
    const double st = std::sin(s.theta), ct = std::cos(s.theta);
    const double sp = std::sin(s.phi), cp = std::cos(s.phi);
    const double sc = std::sin(s.chi), cc = std::cos(s.chi);
    return Geometry{ct * cp * cc - sp * sc, st * cp};
}

void check_state(const KiteState& s) {
    require(std::isfinite(s.r) && s.r > 0.0, ErrorKind::Domain, "kite state: r must be > 0");
    require(std::isfinite(s.theta) && std::isfinite(s.phi) && std::isfinite(s.chi) &&
                std::isfinite(s.f),
            ErrorKind::Domain, "kite state: non-finite angle or reeling factor");
}

void check_aero(const EffectiveAero& aero, double area) {
    require(aero.C_L > 0.0 && aero.C_D > 0.0, ErrorKind::Domain,
            "aerodynamics: C_L and C_D must be > 0");
    require(area > 0.0, ErrorKind::Domain, "wing area must be > 0");
}

void fill_power(EquilibriumResult& res, const KiteState& s, const WindState& wind, double area) {
    res.P = res.F_tg * s.f * wind.v_w;
    res.zeta = wind.P_w > 0.0 ? res.P / (wind.P_w * area) : 0.0;
    res.v_k = wind.v_w * std::hypot(s.f, res.lambda);
}

}  // namespace

double AeroSet::kite_resultant() const { return std::hypot(C_L, kite_drag()); }

AeroSet AeroSet::from_resultant(double C_R, double LD_k) {
    require(C_R > 0.0 && LD_k > 0.0, ErrorKind::Validation,
            "aero set: C_R and LD_k must be > 0");
    return AeroSet{C_R * LD_k / std::sqrt(1.0 + LD_k * LD_k), LD_k};
}

void AeroSet::validate(const char* label) const {
    require(std::isfinite(C_L) && C_L > 0.0, ErrorKind::Validation,
            std::string(label) + ": C_L must be > 0");
    require(std::isfinite(LD_k) && LD_k > 0.0, ErrorKind::Validation,
            std::string(label) + ": LD_k must be > 0");
}

void TetherParams::validate() const {
    require(std::isfinite(d_t) && d_t > 0.0, ErrorKind::Validation, "tether: d_t must be > 0");
    require(std::isfinite(rho_t) && rho_t > 0.0, ErrorKind::Validation,
            "tether: rho_t must be > 0");
    require(std::isfinite(C_D_c) && C_D_c > 0.0, ErrorKind::Validation,
            "tether: C_D_c must be > 0");
}

void KiteParams::validate() const {
    require(std::isfinite(S) && S > 0.0, ErrorKind::Validation, "kite: S must be > 0");
    require(std::isfinite(m) && m >= 0.0, ErrorKind::Validation, "kite: m must be >= 0");
    traction.validate("kite.traction");
    retraction.validate("kite.retraction");
}

double KiteState::altitude() const { return r * std::cos(theta); }

double EffectiveAero::resultant() const { return std::hypot(C_L, C_D); }

TetherProperties tether_properties(double r, const TetherParams& tether, const KiteParams& kite,
                                   const AeroSet& aero) {
    require(r >= 0.0, ErrorKind::Domain, "tether length must be >= 0");
    TetherProperties p;
    p.m_t = tether.rho_t * pi * tether.d_t * tether.d_t / 4.0 * r;
    p.C_D_tether = 0.25 * tether.d_t * r / kite.S * tether.C_D_c;
    p.C_D_total = aero.kite_drag() + p.C_D_tether;
    return p;
}

EquilibriumResult massless_state(const KiteState& s, const EffectiveAero& aero, double area,
                                 const WindState& wind) {
    check_state(s);
    check_aero(aero, area);
    const auto [a, b] = geometry(s);
    if (!(s.f < b)) {
        fail(ErrorKind::NoTension, "reeling factor " + std::to_string(s.f) +
                                       " is not below sin(theta)cos(phi) = " +
                                       std::to_string(b));
    }
    const double G = aero.lift_to_drag();
    const double bf = b - s.f;
    const double disc = a * a + b * b - 1.0 + G * G * bf * bf;
    if (disc < 0.0) {
        fail(ErrorKind::NoSolution, "tangential velocity factor has no real solution");
    }
    EquilibriumResult res;
    res.kappa = G;
    res.lambda = a + std::sqrt(disc);
    res.v_w = wind.v_w;
    res.v_a = wind.v_w * bf * std::sqrt(1.0 + G * G);
    res.F_a = wind.q * area * aero.resultant() * (1.0 + G * G) * bf * bf;
    res.F_a_r = res.F_a;
    res.F_a_theta = 0.0;
    res.F_t_kite = res.F_a;
    res.F_tg = res.F_a;
    res.gamma = 0.0;
    res.converged = true;
    res.iterations = 0;
    fill_power(res, s, wind, area);
    return res;
}

double reel_factor_for_force_massless(double F_target, const KiteState& s,
                                      const EffectiveAero& aero, double area,
                                      const WindState& wind) {
    require(F_target > 0.0, ErrorKind::Domain, "force set-point must be > 0");
    check_aero(aero, area);
    const double G = aero.lift_to_drag();
    const double scale = wind.q * area * aero.resultant() * (1.0 + G * G);
    require(scale > 0.0, ErrorKind::Domain, "dynamic pressure must be > 0 for force control");
    const double b = std::sin(s.theta) * std::cos(s.phi);
    return b - std::sqrt(F_target / scale);
}

GroundForce ground_tether_force(double F_t_kite, double theta, double m_t) {
    require(m_t >= 0.0, ErrorKind::Domain, "tether mass must be >= 0");
    const double W = m_t * standard_gravity;
    const double F_tau = 0.5 * std::sin(theta) * W;
    if (!(F_t_kite > std::abs(F_tau)) && m_t > 0.0) {
        fail(ErrorKind::SagTooLarge, "half tether weight exceeds the kite-end tension");
    }
    GroundForce g;
    const double radial = std::sqrt(std::max(F_t_kite * F_t_kite - F_tau * F_tau, 0.0)) -
                          std::cos(theta) * W;
    g.F_tg = std::hypot(radial, F_tau);
    g.gamma = F_t_kite > 0.0 ? W / F_t_kite : 0.0;
    return g;
}

EquilibriumResult solve_kinematic_ratio(const KiteState& s, double area, const MassModel& masses,
                                        const EffectiveAero& aero, const WindState& wind,
                                        const KappaOptions& opt) {
    check_state(s);
    check_aero(aero, area);
    require(masses.m >= 0.0 && masses.m_t >= 0.0, ErrorKind::Domain, "masses must be >= 0");
    const auto [a, b] = geometry(s);
    if (!(s.f < b)) {
        fail(ErrorKind::NoTension, "reeling factor " + std::to_string(s.f) +
                                       " is not below sin(theta)cos(phi) = " +
                                       std::to_string(b));
    }
    const double st = std::sin(s.theta), ct = std::cos(s.theta);
    const double cp = std::cos(s.phi), cc = std::cos(s.chi);
    const double g = standard_gravity;
    const double G_star = aero.lift_to_drag();
    const double C_R = aero.resultant();
    const double bf = b - s.f;
    const double F_theta = -(0.5 * masses.m_t + masses.m) * g * st;
    const double kappa_max = opt.kappa_max_factor * G_star;

    auto no_solution = [](const std::string& why) {
        fail(ErrorKind::NoQuasiSteadySolution, why);
    };

    double kappa = G_star;
    EquilibriumResult res;
    for (int it = 1; it <= opt.max_iter; ++it) {
        const double disc = a * a + b * b - 1.0 + kappa * kappa * bf * bf;
        if (disc < 0.0) no_solution("tangential velocity factor has no real solution");
        const double lambda = a + std::sqrt(disc);
        const double F_a = wind.q * area * C_R * (1.0 + kappa * kappa) * bf * bf;
        if (!(F_a > std::abs(F_theta)) && F_theta != 0.0) {
            no_solution("aerodynamic force cannot balance the tangential weight");
        }
        const double F_r = std::sqrt(F_a * F_a - F_theta * F_theta);
        // nondimensional apparent wind (v_w = 1)
        const double va_r = bf;
        const double va_theta = ct * cp - lambda * cc;
        const double va = bf * std::sqrt(1.0 + kappa * kappa);
        const double dot = F_r * va_r + F_theta * va_theta;
        if (!(dot > 0.0)) no_solution("aerodynamic force has no drag component");
        const double ratio = F_a * va / dot;
        const double G_i = std::sqrt(std::max(ratio * ratio - 1.0, 0.0));

        if (std::abs(G_i - G_star) <= opt.tol * G_star) {
            res.kappa = kappa;
            res.lambda = lambda;
            res.v_w = wind.v_w;
            res.v_a = wind.v_w * va;
            res.F_a = F_a;
            res.F_a_r = F_r;
            res.F_a_theta = F_theta;
            res.converged = true;
            res.iterations = it;
            break;
        }
        if (!(G_i > 0.0)) no_solution("lift-to-drag estimate collapsed to zero");
        kappa *= std::sqrt(G_star / G_i);
        if (!(kappa > opt.kappa_min && kappa <= kappa_max)) {
            no_solution("kinematic ratio left the admissible range");
        }
    }
    if (!res.converged) {
        no_solution("kinematic ratio iteration did not converge in " +
                    std::to_string(opt.max_iter) + " iterations");
    }

    const double W_t = masses.m_t * g;
    const double F_tau = 0.5 * st * W_t;
    const double radial_kite = res.F_a_r - masses.m * g * ct;
    if (!(radial_kite > 0.0)) no_solution("tether would go slack under the kite weight");
    res.F_t_kite = std::hypot(radial_kite, F_tau);
    const GroundForce ground = ground_tether_force(res.F_t_kite, s.theta, masses.m_t);
    res.F_tg = ground.F_tg;
    res.gamma = ground.gamma;
    fill_power(res, s, wind, area);
    return res;
}

double reel_factor_for_force_gravity(double F_target, ForceEnd end, const KiteState& state,
                                     double area, const MassModel& masses,
                                     const EffectiveAero& aero, const WindState& wind,
                                     const ReelSolveOptions& opt) {
    require(F_target > 0.0, ErrorKind::Domain, "force set-point must be > 0");
    const double b = std::sin(state.theta) * std::cos(state.phi);
    double lo = opt.f_lo;
    double hi = b - opt.eps;
    require(lo < hi, ErrorKind::Unreachable, "reeling factor bracket is empty");

    // residual > 0 means tension above target; nullopt means no equilibrium,
    // which only happens on the low-force side of the bracket
    auto residual = [&](double f) -> std::optional<double> {
        KiteState s = state;
        s.f = f;
        try {
            return tension_at(solve_kinematic_ratio(s, area, masses, aero, wind, opt.kappa), end) -
                   F_target;
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::NoQuasiSteadySolution || e.kind() == ErrorKind::SagTooLarge) {
                return std::nullopt;
            }
            throw;
        }
    };

    const auto r_lo = residual(lo);
    if (!r_lo || *r_lo < 0.0) {
        fail(ErrorKind::Unreachable, "force set-point " + std::to_string(F_target) +
                                         " N exceeds the tension at the lower reeling bound");
    }
    if (*r_lo == 0.0) return lo;
    auto r_hi = residual(hi);
    if (r_hi && *r_hi > 0.0) {
        fail(ErrorKind::Unreachable, "force set-point " + std::to_string(F_target) +
                                         " N is below the tension at the upper reeling bound");
    }
    if (r_hi && *r_hi == 0.0) return hi;

    double f_lo = lo, f_hi = hi;
    double v_lo = *r_lo;
    std::optional<double> v_hi = r_hi;
    int side = 0;
    double best_f = f_lo, best_r = v_lo;
    const double abs_tol = opt.rel_tol * F_target;
    for (int it = 0; it < opt.max_iter; ++it) {
        double f;
        if (v_hi) {
            f = f_hi - *v_hi * (f_hi - f_lo) / (*v_hi - v_lo);
            const double w = f_hi - f_lo;
            if (!(f > f_lo + 1e-3 * w && f < f_hi - 1e-3 * w)) f = 0.5 * (f_lo + f_hi);
        } else {
            f = 0.5 * (f_lo + f_hi);
        }
        const auto v = residual(f);
        if (v && std::abs(*v) < std::abs(best_r)) {
            best_f = f;
            best_r = *v;
        }
        if (v && std::abs(*v) <= abs_tol) return f;
        if (v && *v > 0.0) {
            f_lo = f;
            v_lo = *v;
            if (side == 1 && v_hi) *v_hi *= 0.5;
            side = 1;
        } else {
            f_hi = f;
            v_hi = v;
            if (side == -1) v_lo *= 0.5;
            side = -1;
        }
        if (f_hi - f_lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(f))) {
            break;
        }
    }
    if (std::abs(best_r) <= 1e-6 * F_target) return best_f;
    fail(ErrorKind::Unreachable, "no reeling factor reproduces the force set-point " +
                                     std::to_string(F_target) + " N");
}

}  // namespace kitepump
