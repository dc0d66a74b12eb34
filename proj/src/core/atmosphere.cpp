#include "kitepump/atmosphere.hpp"

#include <cmath>
#include <string>

#include "kitepump/errors.hpp"

namespace kitepump {

void Environment::validate() const {
    require(std::isfinite(v_w_ref) && v_w_ref >= 0.0, ErrorKind::Validation,
            "environment: v_w_ref must be >= 0");
    require(z0 > 0.0, ErrorKind::Validation, "environment: z0 must be > 0");
    require(z_ref > z0, ErrorKind::Validation, "environment: z_ref must exceed z0");
    require(rho0 > 0.0, ErrorKind::Validation, "environment: rho0 must be > 0");
    require(H_rho > 0.0, ErrorKind::Validation, "environment: H_rho must be > 0");
}

WindState wind_state_from(double v_w, double rho) {
    return WindState{v_w, rho, 0.5 * rho * v_w * v_w, 0.5 * rho * v_w * v_w * v_w};
}

WindState wind_state_at(double z, const Environment& env) {
    env.validate();
    if (env.uniform) {
        return wind_state_from(env.v_w_ref, env.rho0);
    }
    if (!(z >= env.z0)) {
        fail(ErrorKind::Domain, "altitude " + std::to_string(z) +
                                    " m is below the roughness length " +
                                    std::to_string(env.z0) + " m");
    }
    const double v_w = env.v_w_ref * std::log(z / env.z0) / std::log(env.z_ref / env.z0);
    const double rho = env.rho0 * std::exp(-z / env.H_rho);
    return wind_state_from(v_w, rho);
}

}  // namespace kitepump
