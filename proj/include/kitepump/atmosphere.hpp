// Altitude profiles of wind speed and air density.
#pragma once

namespace kitepump {

/// Wind and density profile parameters.
///
/// Wind follows the logarithmic law anchored at (z_ref, v_w_ref) with
/// roughness length z0; density decays exponentially with scale height H_rho.
/// `uniform` replaces both profiles by their reference values, which is what
/// the steady-elevation diagnostic needs.
struct Environment {
    double v_w_ref = 0.0;  ///< reference wind speed [m/s]
    double z_ref = 6.0;    ///< reference altitude [m]
    double z0 = 0.07;      ///< roughness length [m]
    double rho0 = 1.225;   ///< sea-level density [kg/m^3]
    double H_rho = 8550.0; ///< density scale height [m]
    bool uniform = false;

    /// Throws Error{Validation} naming the first violated invariant.
    void validate() const;
};

struct WindState {
    double v_w = 0.0; ///< wind speed [m/s]
    double rho = 0.0; ///< air density [kg/m^3]
    double q = 0.0;   ///< dynamic pressure [Pa]
    double P_w = 0.0; ///< wind power density [W/m^2]
};

/// Wind state at altitude z. Throws Error{Domain} for z < z0 in profile mode.
WindState wind_state_at(double z, const Environment& env);

/// Builds a WindState from speed and density directly (fixed-wind studies).
WindState wind_state_from(double v_w, double rho);

}  // namespace kitepump
