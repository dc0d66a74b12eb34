// Pumping cycle simulation: retraction, transition and traction phases.
#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "kitepump/atmosphere.hpp"
#include "kitepump/equilibrium.hpp"

namespace kitepump {

struct OperationSettings {
    double beta_o = 0.0; ///< traction elevation [rad]
    double phi_o = 0.0;  ///< traction azimuth [rad]
    double chi_o = 0.0;  ///< traction course angle [rad]
    double r_min = 0.0;  ///< [m]
    double r_max = 0.0;  ///< [m]
    double F_out = 0.0;  ///< traction force set-point [N]
    double F_in = 0.0;   ///< retraction force set-point [N]
    double dT = 0.01;    ///< nondimensional time step
    bool gravity = true;
    ForceEnd force_end = ForceEnd::Kite;

    void validate() const;
};

struct SystemParams {
    Environment env;
    KiteParams kite;
    TetherParams tether;
    OperationSettings op;

    void validate() const;
};

enum class Phase { Retraction, Transition, Traction };

std::string_view phase_name(Phase phase) noexcept;

/// One recorded instant. Velocities are in the ground-fixed wind frame
/// (x downwind, z up).
struct Sample {
    double t = 0.0;
    Phase phase = Phase::Retraction;
    double r = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    double chi = 0.0;
    double f = 0.0;
    double v_w = 0.0;
    double v_t = 0.0;
    double v_k = 0.0;
    double v_a = 0.0;
    double lambda = 0.0;
    double kappa = 0.0;
    double F_t_kite = 0.0;
    double F_tg = 0.0;
    double P = 0.0;
    std::array<double, 3> v_kite{};

    double beta() const;
};

struct PhaseResult {
    Phase phase = Phase::Retraction;
    double t_start = 0.0;
    double duration = 0.0;
    double energy = 0.0;     ///< trapezoidal integral of P [J]
    double mean_power = 0.0; ///< [W]
    int steps = 0;
    std::vector<Sample> samples; ///< step start states plus the end state
};

struct CycleResult {
    std::array<PhaseResult, 3> phases;
    double P_m = 0.0;
    double zeta_m = 0.0;
    double z_mt = 0.0;
    double v_w_mt = 0.0;
    double duration = 0.0;
    int steps = 0;
};

/// Start state of the retraction phase: (r_max, beta_o) in the phi = 0 plane.
KiteState cycle_anchor(const SystemParams& params);

PhaseResult simulate_retraction(const KiteState& start, const SystemParams& params,
                                double t_start = 0.0);
PhaseResult simulate_transition(const KiteState& start, const SystemParams& params,
                                double t_start = 0.0);
PhaseResult simulate_traction(const KiteState& start, const SystemParams& params,
                              double t_start = 0.0);

CycleResult simulate_cycle(const SystemParams& params);

/// Characteristic time step t* * dT with t* = (r_max - r_min) / v_w_ref.
double integration_step(const SystemParams& params);

struct SteadyElevationOptions {
    bool force_zero_lambda = false;
    double tol = 1e-7;     ///< per-step elevation change [rad]
    int consecutive = 100;
    long max_steps = 1000000;
};

/// Elevation approached by a retraction flown with the reeling factor held at
/// its value at the anchor, the tether length frozen at r_max, in uniform wind.
double steady_retraction_elevation(const SystemParams& params,
                                   const SteadyElevationOptions& options = {});

/// Same as above but starting from an explicit elevation and reeling factor.
double steady_retraction_elevation_from(const SystemParams& params, double beta_start, double f,
                                        const SteadyElevationOptions& options = {});

/// Reeling factor that holds F_in at the anchor state with retraction
/// aerodynamics in uniform wind, evaluated with the massless model.
double anchor_retraction_reel_factor(const SystemParams& params);

struct ConvergenceRow {
    double dT = 0.0;
    double zeta_m = 0.0;
    double P_m = 0.0;
    int steps = 0;
    double ratio = 0.0; ///< zeta_m / zeta_m of the last (reference) entry
};

/// Runs the cycle for each time step (sorted descending, last = reference).
/// Runs execute concurrently; rows keep input order.
std::vector<ConvergenceRow> convergence_study(const SystemParams& params,
                                              const std::vector<double>& dT_list);

}  // namespace kitepump
