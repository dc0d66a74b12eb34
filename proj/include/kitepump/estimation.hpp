// Aerodynamic coefficient estimation from ground-station telemetry.
#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "kitepump/cycle.hpp"

namespace kitepump {

/// One telemetry sample. Positions are spherical wind-frame coordinates;
/// the kite velocity is Cartesian in the same frame (x downwind, z up).
struct LogRecord {
    double t = 0.0;
    double F_tg = 0.0;
    double r = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    std::optional<double> chi;
    std::array<double, 3> v_kite{};
    double v_t = 0.0;
    double v_w_ref = 0.0;
    std::optional<Phase> phase;
};

enum class SampleFlag {
    Ok,
    BelowRoughness,  ///< kite altitude below z0
    NoRadialWind,    ///< sin(theta)cos(phi) - f <= 0
    KinematicRadicand,
    ForceRadicand,   ///< ground force below the tangential tether weight
    NoForce,
    Regime,          ///< outside the validity regime of the L/D estimate
    TetherDrag,      ///< drag not larger than the tether drag
};

std::string_view flag_name(SampleFlag flag) noexcept;

struct Kinematics {
    double f = 0.0;
    double v_w = 0.0;
    double rho = 0.0;
    double v_a = 0.0;
    double kappa = 0.0;
    std::array<double, 3> v_a_vec{}; ///< Cartesian apparent wind
    SampleFlag flag = SampleFlag::Ok;
};

/// Reeling factor, apparent wind and kinematic ratio of one sample. The wind
/// at the kite is extrapolated from the record's v_w_ref with the profile of
/// `env`. Invalid samples are flagged, not thrown.
Kinematics derive_kinematics(const LogRecord& rec, const Environment& env);

struct EstimationOptions {
    double crosswind_ratio = 1.5;     ///< minimum v_k / v_w for traction L/D samples
    double in_plane_tol = 0.0872664626; ///< 5 deg on |chi - 180| and |phi| for retraction
    int ld_updates = 2;
    double v_t_threshold = 0.1;       ///< segmentation reeling speed threshold [m/s]
    double sustain = 2.0;             ///< segmentation minimum run duration [s]
};

struct EstimateRecord {
    double t = 0.0;
    Phase phase = Phase::Transition;
    double chi = 0.0;
    double f = 0.0;
    double v_w = 0.0;
    double v_a = 0.0;
    double v_k = 0.0;
    double kappa = 0.0;
    double F_a = 0.0;
    double C_R = 0.0;    ///< includes the lumped tether drag
    double C_R_k = 0.0;  ///< wing only
    double LD_sys = 0.0;
    double LD_k = 0.0;
    bool cr_valid = false;
    bool valid = false; ///< C_R and L/D both usable
    SampleFlag flag = SampleFlag::Ok;
};

/// Resultant coefficient part of the estimate (fills C_R, C_R_k, F_a).
EstimateRecord estimate_CR(const LogRecord& rec, const SystemParams& params);

/// Full estimate including the iterated lift-to-drag ratio. `phase` selects
/// the validity regime test.
EstimateRecord estimate_LD(const LogRecord& rec, Phase phase, const SystemParams& params,
                           const EstimationOptions& options = {});

/// Phase labels from the log, or from the reeling speed when any is missing.
std::vector<Phase> segment_phases(const std::vector<LogRecord>& series,
                                  const EstimationOptions& options = {});

/// Fills missing course angles from finite differences of the positions.
std::vector<LogRecord> with_course_angles(std::vector<LogRecord> series);

struct PhaseAverages {
    double C_R_o = 0.0, C_R_i = 0.0;
    double C_R_k_o = 0.0, C_R_k_i = 0.0;
    std::optional<double> LD_sys_o, LD_sys_i;
    std::optional<double> LD_k_o, LD_k_i;
    int samples_o = 0, samples_i = 0, samples_transition = 0;
    int cr_valid_o = 0, cr_valid_i = 0;
    int ld_valid_o = 0, ld_valid_i = 0;
};

struct EstimationResult {
    std::vector<EstimateRecord> records;
    PhaseAverages averages;
};

/// Segments, estimates every sample and averages per phase. Throws
/// EmptyPhase when retraction or traction has no usable C_R sample.
EstimationResult segment_and_average(const std::vector<LogRecord>& series,
                                     const SystemParams& params,
                                     const EstimationOptions& options = {});

/// Noiseless telemetry of a simulated cycle; duplicate phase-boundary
/// instants are dropped so time is strictly increasing.
std::vector<LogRecord> export_telemetry(const CycleResult& cycle, const SystemParams& params);

}  // namespace kitepump
