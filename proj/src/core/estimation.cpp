#include "kitepump/estimation.hpp"

#include <cmath>
#include <numbers>

#include "kitepump/errors.hpp"

namespace kitepump {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double g = standard_gravity;

using Vec3 = std::array<double, 3>;

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

struct Basis {
    Vec3 e_r, e_theta, e_phi;
};

Basis basis(double theta, double phi) {
    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(phi), cp = std::cos(phi);
    return Basis{{st * cp, st * sp, ct}, {ct * cp, ct * sp, -st}, {-sp, cp, 0.0}};
}

Vec3 position(const LogRecord& rec) {
    const Basis b = basis(rec.theta, rec.phi);
    return {rec.r * b.e_r[0], rec.r * b.e_r[1], rec.r * b.e_r[2]};
}

double tether_mass(double r, const TetherParams& t) {
    return t.rho_t * pi * t.d_t * t.d_t / 4.0 * r;
}

double wrap_angle(double a) {
    a = std::fmod(a + pi, 2.0 * pi);
    if (a < 0.0) a += 2.0 * pi;
    return a - pi;
}

std::optional<double> chi_from_vector(const Vec3& d, double theta, double phi, double scale) {
    const Basis b = basis(theta, phi);
    const double x = dot(d, b.e_theta), y = dot(d, b.e_phi);
    if (std::hypot(x, y) <= 1e-12 * std::max(scale, 1.0)) return std::nullopt;
    return std::atan2(y, x);
}

}  // namespace

std::string_view flag_name(SampleFlag flag) noexcept {
    switch (flag) {
    case SampleFlag::Ok: return "ok";
    case SampleFlag::BelowRoughness: return "below_roughness";
    case SampleFlag::NoRadialWind: return "no_radial_wind";
    case SampleFlag::KinematicRadicand: return "kinematic_radicand";
    case SampleFlag::ForceRadicand: return "force_radicand";
    case SampleFlag::NoForce: return "no_force";
    case SampleFlag::Regime: return "regime";
    case SampleFlag::TetherDrag: return "tether_drag";
    }
    return "unknown";
}

Kinematics derive_kinematics(const LogRecord& rec, const Environment& env) {
    Kinematics k;
    Environment e = env;
    e.v_w_ref = rec.v_w_ref;
    const double z = rec.r * std::cos(rec.theta);
    if (!e.uniform && z < e.z0) {
        k.flag = SampleFlag::BelowRoughness;
        return k;
    }
    const WindState w = wind_state_at(z, e);
    k.v_w = w.v_w;
    k.rho = w.rho;
    if (!(w.v_w > 0.0)) {
        k.flag = SampleFlag::NoRadialWind;
        return k;
    }
    k.f = rec.v_t / w.v_w;
    k.v_a_vec = {w.v_w - rec.v_kite[0], -rec.v_kite[1], -rec.v_kite[2]};
    k.v_a = norm(k.v_a_vec);
    const double bf = std::sin(rec.theta) * std::cos(rec.phi) - k.f;
    if (!(bf > 0.0)) {
        k.flag = SampleFlag::NoRadialWind;
        return k;
    }
    const double ratio = k.v_a / (w.v_w * bf);
    const double rad = ratio * ratio - 1.0;
    // noiseless samples can land a few ulps below zero
    if (rad < -1e-9) {
        k.flag = SampleFlag::KinematicRadicand;
        return k;
    }
    k.kappa = std::sqrt(std::max(rad, 0.0));
    return k;
}

namespace {

EstimateRecord estimate_force(const LogRecord& rec, const SystemParams& params, Kinematics& k) {
    EstimateRecord out;
    out.t = rec.t;
    out.chi = rec.chi.value_or(0.0);
    k = derive_kinematics(rec, params.env);
    out.f = k.f;
    out.v_w = k.v_w;
    out.v_a = k.v_a;
    out.v_k = norm(rec.v_kite);
    out.kappa = k.kappa;
    if (k.flag != SampleFlag::Ok) {
        out.flag = k.flag;
        return out;
    }
    const double m = params.kite.m;
    const double m_t = tether_mass(rec.r, params.tether);
    const double st = std::sin(rec.theta), ct = std::cos(rec.theta);
    const double F_tau_t = 0.5 * st * m_t * g;
    const double rad = rec.F_tg * rec.F_tg - F_tau_t * F_tau_t;
    if (rad < 0.0) {
        out.flag = SampleFlag::ForceRadicand;
        return out;
    }
    const double F_ar = std::sqrt(rad) + ct * (m_t + m) * g;
    const double F_atheta = -(0.5 * m_t + m) * g * st;
    out.F_a = std::hypot(F_ar, F_atheta);
    if (!(out.F_a > 0.0) || !(k.v_a > 0.0)) {
        out.flag = SampleFlag::NoForce;
        return out;
    }
    const double q_a = 0.5 * k.rho * k.v_a * k.v_a;
    out.C_R = out.F_a / (q_a * params.kite.S);

    // wing-only force: remove the lumped tether drag along the apparent wind
    const Basis b = basis(rec.theta, rec.phi);
    const double D_t = q_a * 0.25 * params.tether.d_t * rec.r * params.tether.C_D_c;
    const double ua_r = dot(k.v_a_vec, b.e_r) / k.v_a;
    const double ua_theta = dot(k.v_a_vec, b.e_theta) / k.v_a;
    const double ua_phi = dot(k.v_a_vec, b.e_phi) / k.v_a;
    const double Fk = std::sqrt(std::pow(F_ar - D_t * ua_r, 2) +
                                std::pow(F_atheta - D_t * ua_theta, 2) +
                                std::pow(D_t * ua_phi, 2));
    out.C_R_k = Fk / (q_a * params.kite.S);
    out.cr_valid = true;
    return out;
}

}  // namespace

EstimateRecord estimate_CR(const LogRecord& rec, const SystemParams& params) {
    Kinematics k;
    return estimate_force(rec, params, k);
}

EstimateRecord estimate_LD(const LogRecord& rec, Phase phase, const SystemParams& params,
                           const EstimationOptions& opt) {
    Kinematics k;
    EstimateRecord out = estimate_force(rec, params, k);
    out.phase = phase;
    if (!out.cr_valid) return out;

    const double chi = rec.chi.value_or(0.0);
    const bool crosswind = out.v_k >= opt.crosswind_ratio * out.v_w;
    const bool in_plane = std::abs(wrap_angle(chi - pi)) <= opt.in_plane_tol &&
                          std::abs(rec.phi) <= opt.in_plane_tol;
    bool regime = false;
    switch (phase) {
    case Phase::Traction: regime = crosswind; break;
    case Phase::Retraction: regime = in_plane; break;
    case Phase::Transition: regime = crosswind || in_plane; break;
    }

    const double m = params.kite.m;
    const double m_t = tether_mass(rec.r, params.tether);
    const double kappa = out.kappa;
    const double c = std::sqrt(1.0 + kappa * kappa) * g * (0.5 * m_t + m) *
                     std::sin(rec.theta) * std::cos(chi) / out.F_a;
    double G = kappa;
    for (int i = 0; i < opt.ld_updates; ++i) {
        G = kappa - c * std::sqrt(1.0 + G * G);
    }
    out.LD_sys = G;

    const double D = out.F_a / std::sqrt(1.0 + G * G);
    const double D_t = 0.125 * k.rho * params.tether.d_t * rec.r * params.tether.C_D_c *
                       out.v_a * out.v_a;
    if (!(D > D_t) || !(G > 0.0)) {
        out.flag = SampleFlag::TetherDrag;
        return out;
    }
    out.LD_k = G * D / (D - D_t);
    if (!regime) {
        out.flag = SampleFlag::Regime;
        return out;
    }
    out.valid = true;
    return out;
}

std::vector<Phase> segment_phases(const std::vector<LogRecord>& series,
                                  const EstimationOptions& opt) {
    std::vector<Phase> out(series.size(), Phase::Transition);
    bool labelled = !series.empty();
    for (const auto& rec : series) labelled = labelled && rec.phase.has_value();
    if (labelled) {
        for (std::size_t i = 0; i < series.size(); ++i) out[i] = *series[i].phase;
        return out;
    }
    auto classify = [&](double v_t) {
        if (v_t < -opt.v_t_threshold) return -1;
        if (v_t > opt.v_t_threshold) return 1;
        return 0;
    };
    std::size_t i = 0;
    while (i < series.size()) {
        const int c = classify(series[i].v_t);
        std::size_t j = i;
        while (j + 1 < series.size() && classify(series[j + 1].v_t) == c) ++j;
        if (c != 0 && series[j].t - series[i].t >= opt.sustain) {
            for (std::size_t k = i; k <= j; ++k) {
                out[k] = c < 0 ? Phase::Retraction : Phase::Traction;
            }
        }
        i = j + 1;
    }
    return out;
}

std::vector<LogRecord> with_course_angles(std::vector<LogRecord> series) {
    const std::size_t n = series.size();
    std::vector<Vec3> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[i] = position(series[i]);
    for (std::size_t i = 0; i < n; ++i) {
        LogRecord& rec = series[i];
        if (rec.chi) continue;
        std::optional<double> chi;
        if (n > 1) {
            const std::size_t lo = i == 0 ? 0 : i - 1;
            const std::size_t hi = i + 1 < n ? i + 1 : n - 1;
            const Vec3 d{pos[hi][0] - pos[lo][0], pos[hi][1] - pos[lo][1],
                         pos[hi][2] - pos[lo][2]};
            chi = chi_from_vector(d, rec.theta, rec.phi, rec.r);
        }
        if (!chi) chi = chi_from_vector(rec.v_kite, rec.theta, rec.phi, norm(rec.v_kite));
        rec.chi = chi.value_or(0.0);
    }
    return series;
}

EstimationResult segment_and_average(const std::vector<LogRecord>& input,
                                     const SystemParams& params, const EstimationOptions& opt) {
    require(!input.empty(), ErrorKind::EmptyPhase, "telemetry series is empty");
    for (std::size_t i = 1; i < input.size(); ++i) {
        require(input[i].t > input[i - 1].t, ErrorKind::Validation,
                "telemetry time must be strictly increasing");
    }
    const std::vector<LogRecord> series = with_course_angles(input);
    const std::vector<Phase> phases = segment_phases(series, opt);

    EstimationResult res;
    res.records.reserve(series.size());
    double cr[2] = {0, 0}, crk[2] = {0, 0}, lds[2] = {0, 0}, ldk[2] = {0, 0};
    PhaseAverages& avg = res.averages;
    for (std::size_t i = 0; i < series.size(); ++i) {
        EstimateRecord e = estimate_LD(series[i], phases[i], params, opt);
        res.records.push_back(e);
        if (e.phase == Phase::Transition) {
            ++avg.samples_transition;
            continue;
        }
        const int k = e.phase == Phase::Traction ? 0 : 1;
        ++(k == 0 ? avg.samples_o : avg.samples_i);
        if (e.cr_valid) {
            ++(k == 0 ? avg.cr_valid_o : avg.cr_valid_i);
            cr[k] += e.C_R;
            crk[k] += e.C_R_k;
        }
        if (e.valid) {
            ++(k == 0 ? avg.ld_valid_o : avg.ld_valid_i);
            lds[k] += e.LD_sys;
            ldk[k] += e.LD_k;
        }
    }
    if (avg.cr_valid_o == 0) fail(ErrorKind::EmptyPhase, "traction phase has no valid samples");
    if (avg.cr_valid_i == 0) fail(ErrorKind::EmptyPhase, "retraction phase has no valid samples");
    avg.C_R_o = cr[0] / avg.cr_valid_o;
    avg.C_R_k_o = crk[0] / avg.cr_valid_o;
    avg.C_R_i = cr[1] / avg.cr_valid_i;
    avg.C_R_k_i = crk[1] / avg.cr_valid_i;
    if (avg.ld_valid_o > 0) {
        avg.LD_sys_o = lds[0] / avg.ld_valid_o;
        avg.LD_k_o = ldk[0] / avg.ld_valid_o;
    }
    if (avg.ld_valid_i > 0) {
        avg.LD_sys_i = lds[1] / avg.ld_valid_i;
        avg.LD_k_i = ldk[1] / avg.ld_valid_i;
    }
    return res;
}

std::vector<LogRecord> export_telemetry(const CycleResult& cycle, const SystemParams& params) {
    std::vector<LogRecord> out;
    for (const auto& ph : cycle.phases) {
        for (const auto& s : ph.samples) {
            if (!out.empty() && !(s.t > out.back().t)) continue;
            LogRecord rec;
            rec.t = s.t;
            rec.F_tg = s.F_tg;
            rec.r = s.r;
            rec.theta = s.theta;
            rec.phi = s.phi;
            rec.chi = s.chi;
            rec.v_kite = s.v_kite;
            rec.v_t = s.v_t;
            rec.v_w_ref = params.env.v_w_ref;
            rec.phase = s.phase;
            out.push_back(rec);
        }
    }
    return out;
}

}  // namespace kitepump
