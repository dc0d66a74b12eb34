// Run configuration: strict JSON schema, validation and serialization.
#pragma once

#include <string>

#include "kitepump/cycle.hpp"

namespace kitepump {

/// Aerodynamic set as written in a config file: either the lift coefficient
/// or the resultant coefficient, plus the wing lift-to-drag ratio.
struct AeroSpec {
    double coefficient = 0.0;
    bool resultant = false; ///< coefficient is C_R instead of C_L
    double LD_k = 0.0;

    AeroSet resolve() const;
    bool operator==(const AeroSpec&) const = default;
};

/// File-level configuration. Angles stay in degrees exactly as written so a
/// save/load round trip is the identity.
struct RunConfig {
    double v_w_ref = 0.0;
    double z_ref = 6.0;
    double z0 = 0.07;
    double rho0 = 1.225;
    double H_rho = 8550.0;
    bool uniform_wind = false;

    double S = 0.0;
    double m = 0.0;
    AeroSpec traction;
    AeroSpec retraction;

    double d_t = 0.0;
    double rho_t = 0.0;
    double C_D_c = 1.1;

    double beta_o_deg = 0.0;
    double phi_o_deg = 0.0;
    double chi_o_deg = 0.0;
    double r_min = 0.0;
    double r_max = 0.0;
    double F_out = 0.0;
    double F_in = 0.0;
    double dT = 0.01;

    bool gravity = true;
    ForceEnd force_end = ForceEnd::Kite;
    std::string output_dir = "out";

    bool operator==(const RunConfig&) const = default;

    /// Throws Error{Validation} naming the first violated invariant.
    SystemParams to_params() const;
};

/// Parses and validates. Syntax errors report the line, schema errors the
/// key path (e.g. /operation/foo).
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

std::string serialize_config(const RunConfig& config);
void save_config(const RunConfig& config, const std::string& path);

}  // namespace kitepump
