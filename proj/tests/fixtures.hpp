// Shared test fixtures: preset loading and published reference values.
#pragma once

#include <string>

#include "kitepump/config.hpp"

#ifndef KP_PRESET_DIR
#error "KP_PRESET_DIR must point at the presets directory"
#endif

namespace fixtures {

inline std::string preset_path(const std::string& name) {
    return std::string(KP_PRESET_DIR) + "/" + name + ".json";
}

inline kitepump::RunConfig preset(const std::string& name, bool gravity = true) {
    kitepump::RunConfig c = kitepump::load_config(preset_path(name));
    c.gravity = gravity;
    return c;
}

inline kitepump::SystemParams params(const std::string& name, bool gravity = true) {
    return preset(name, gravity).to_params();
}

struct PhaseRef {
    double power_kW;
    double time_s;
};

struct CycleRef {
    PhaseRef retraction, transition, traction, cycle;
};

// Simulated columns of the published cycle tables.
inline constexpr CycleRef strong_gravity{{-4.03, 60}, {23.67, 7}, {22.57, 38}, {7.59, 106}};
inline constexpr CycleRef strong_massless{{-2.46, 103}, {17.90, 8}, {24.72, 36}, {5.37, 148}};
inline constexpr CycleRef moderate_gravity{{-2.73, 40}, {8.11, 10}, {7.67, 49}, {3.55, 101}};
inline constexpr CycleRef moderate_massless{{-1.73, 66}, {5.08, 14}, {9.20, 42}, {2.84, 123}};

// Field measurements from the same tables. Physical data; nothing is compared
// against these.
inline constexpr CycleRef strong_measured{{-3.64, 67}, {8.50, 9}, {19.12, 52}, {6.48, 128}};
inline constexpr CycleRef moderate_measured{{-2.60, 43}, {3.44, 12}, {6.23, 66}, {2.79, 122}};

// Wind speed at the mean traction altitude, m/s.
inline constexpr double strong_wind_at_traction = 18.2;
inline constexpr double moderate_wind_at_traction = 10.1;
inline constexpr double strong_traction_altitude = 252.0;
inline constexpr double moderate_traction_altitude = 139.0;

}  // namespace fixtures
