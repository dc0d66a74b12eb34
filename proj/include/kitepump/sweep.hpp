// Parameter sweeps over a run configuration.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kitepump/config.hpp"
#include "kitepump/errors.hpp"

namespace kitepump {

enum class Objective { P_m, zeta_m };

struct SweepSpec {
    std::string parameter; ///< dotted config path, e.g. operation.F_out
    std::vector<double> values;
    Objective objective = Objective::P_m;
};

/// {"parameter": ..., "values": [...] | "range": {"start","stop","num"},
///  "objective": "P_m" | "zeta_m"}
SweepSpec parse_sweep_spec(const std::string& text);

/// Current numeric value at a dotted path. Throws Validation if the path does
/// not resolve to a number.
double parameter_value(const RunConfig& config, const std::string& path);

/// Copy of `base` with the numeric value at `path` replaced; the result is
/// re-validated.
RunConfig apply_parameter(const RunConfig& base, const std::string& path, double value);

struct SweepRow {
    double value = 0.0;
    bool ok = false;
    double P_m = 0.0;
    double zeta_m = 0.0;
    double duration = 0.0;
    std::optional<ErrorKind> error;
    std::string message;
};

struct SweepResult {
    std::string parameter;
    Objective objective = Objective::P_m;
    std::vector<SweepRow> rows; ///< input order
    std::optional<std::size_t> best;
};

/// Runs every value concurrently. Failed runs are kept as rows with their
/// error; if every run fails the first error is rethrown.
SweepResult run_sweep(const RunConfig& base, const SweepSpec& spec);

std::string sweep_csv(const SweepResult& result);
std::string sweep_best_json(const SweepResult& result);

}  // namespace kitepump
