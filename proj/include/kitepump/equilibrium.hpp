// Quasi-steady force and velocity equilibria of a tethered kite.
//
// Angles follow the spherical wind-frame convention: theta is the polar angle
// from the zenith, phi the azimuth from the downwind axis, chi the course
// angle in the tangential plane (0 = towards increasing theta, i.e. downward).
// Within the phi = 0 plane theta is treated as a signed in-plane angle, so a
// kite that overflies the ground station simply continues to theta <= 0.
#pragma once

#include <numbers>

#include "kitepump/atmosphere.hpp"

namespace kitepump {

inline constexpr double standard_gravity = 9.81; // [m/s^2]

/// Aerodynamic coefficients of the wing for one cycle phase.
struct AeroSet {
    double C_L = 0.0;  ///< lift coefficient
    double LD_k = 0.0; ///< lift-to-drag ratio of the wing alone

    double kite_drag() const { return C_L / LD_k; }
    double kite_resultant() const;

    /// Wing set from a resultant coefficient and wing lift-to-drag ratio.
    static AeroSet from_resultant(double C_R, double LD_k);

    void validate(const char* label) const;
};

struct TetherParams {
    double d_t = 0.004;  ///< diameter [m]
    double rho_t = 724.0; ///< material density [kg/m^3]
    double C_D_c = 1.1;  ///< cylinder cross-flow drag coefficient

    void validate() const;
};

struct KiteParams {
    double S = 0.0; ///< projected wing area [m^2]
    double m = 0.0; ///< airborne mass including control unit [kg]
    AeroSet traction;
    AeroSet retraction;

    void validate() const;
};

struct KiteState {
    double r = 0.0;     ///< tether length [m]
    double theta = 0.0; ///< polar angle [rad]
    double phi = 0.0;   ///< azimuth [rad]
    double chi = 0.0;   ///< course angle [rad]
    double f = 0.0;     ///< reeling factor v_t / v_w

    double elevation() const { return std::numbers::pi / 2.0 - theta; }
    double altitude() const;
};

/// Lift and total drag coefficient of the airborne system (wing plus the
/// lumped quarter of the tether drag area).
struct EffectiveAero {
    double C_L = 0.0;
    double C_D = 0.0;

    double lift_to_drag() const { return C_L / C_D; }
    double resultant() const;
};

struct TetherProperties {
    double m_t = 0.0;        ///< deployed tether mass [kg]
    double C_D_tether = 0.0; ///< lumped tether drag coefficient
    double C_D_total = 0.0;  ///< wing plus lumped tether drag coefficient
};

TetherProperties tether_properties(double r, const TetherParams& tether, const KiteParams& kite,
                                   const AeroSet& aero);

inline EffectiveAero effective_aero(const AeroSet& aero, const TetherProperties& props) {
    return EffectiveAero{aero.C_L, props.C_D_total};
}

struct EquilibriumResult {
    double kappa = 0.0;     ///< kinematic ratio v_a,tau / v_a,r
    double lambda = 0.0;    ///< tangential velocity factor
    double v_w = 0.0;       ///< wind speed at the kite [m/s]
    double v_a = 0.0;       ///< apparent wind speed [m/s]
    double v_k = 0.0;       ///< kite speed [m/s]
    double F_a = 0.0;       ///< resultant aerodynamic force [N]
    double F_a_r = 0.0;     ///< radial component [N]
    double F_a_theta = 0.0; ///< polar component [N]
    double F_t_kite = 0.0;  ///< tether tension at the kite [N]
    double F_tg = 0.0;      ///< tether tension at the ground station [N]
    double gamma = 0.0;     ///< tether weight over kite-end tension
    double zeta = 0.0;      ///< instantaneous power harvesting factor
    double P = 0.0;         ///< mechanical power at the ground [W]
    bool converged = false;
    int iterations = 0;
};

/// Closed-form equilibrium of a massless kite and tether.
/// Throws NoTension when f >= sin(theta)cos(phi), NoSolution when the
/// tangential velocity factor has no real root.
EquilibriumResult massless_state(const KiteState& state, const EffectiveAero& aero, double area,
                                 const WindState& wind);

/// Reeling factor that makes the massless tension equal F_target.
double reel_factor_for_force_massless(double F_target, const KiteState& state,
                                      const EffectiveAero& aero, double area,
                                      const WindState& wind);

struct GroundForce {
    double F_tg = 0.0;
    double gamma = 0.0;
};

/// Tension at the ground end of a sagging tether of mass m_t.
/// Throws SagTooLarge when the half tether weight exceeds the kite-end tension.
GroundForce ground_tether_force(double F_t_kite, double theta, double m_t);

struct MassModel {
    double m = 0.0;   ///< kite and control unit [kg]
    double m_t = 0.0; ///< deployed tether [kg]
};

struct KappaOptions {
    double tol = 1e-6;           ///< relative tolerance on the lift-to-drag match
    int max_iter = 100;
    double kappa_max_factor = 50.0; ///< upper clamp as a multiple of L/D
    double kappa_min = 1e-9;
};

/// Gravity-including equilibrium via fixed-point iteration on the kinematic
/// ratio. Throws NoQuasiSteadySolution when no physical state is found.
EquilibriumResult solve_kinematic_ratio(const KiteState& state, double area,
                                        const MassModel& masses, const EffectiveAero& aero,
                                        const WindState& wind, const KappaOptions& options = {});

enum class ForceEnd { Kite, Ground };

struct ReelSolveOptions {
    double f_lo = -3.0;
    double eps = 1e-6;
    double rel_tol = 1e-11;
    int max_iter = 200;
    KappaOptions kappa;
};

/// Reeling factor at which the gravity-including tension at the chosen tether
/// end equals F_target. Bracketed regula falsi with bisection fallback; states
/// without a quasi-steady solution count as tension deficit.
double reel_factor_for_force_gravity(double F_target, ForceEnd end, const KiteState& state,
                                     double area, const MassModel& masses,
                                     const EffectiveAero& aero, const WindState& wind,
                                     const ReelSolveOptions& options = {});

inline double tension_at(const EquilibriumResult& eq, ForceEnd end) {
    return end == ForceEnd::Kite ? eq.F_t_kite : eq.F_tg;
}

}  // namespace kitepump
