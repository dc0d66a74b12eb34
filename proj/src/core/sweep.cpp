#include "kitepump/sweep.hpp"

#include <cmath>
#include <future>
#include <sstream>

#include <json.hpp>

#include "kitepump/io.hpp"

namespace kitepump {

namespace {

using json = nlohmann::ordered_json;

std::string objective_name(Objective o) { return o == Objective::P_m ? "P_m" : "zeta_m"; }

std::vector<std::string> path_parts(const std::string& path) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(path);
    while (std::getline(in, part, '.')) {
        require(!part.empty(), ErrorKind::Validation, "sweep: malformed parameter path " + path);
        parts.push_back(part);
    }
    require(!parts.empty(), ErrorKind::Validation, "sweep: empty parameter path");
    return parts;
}

json* resolve(json& root, const std::string& path) {
    json* node = &root;
    for (const auto& part : path_parts(path)) {
        require(node->is_object() && node->contains(part), ErrorKind::Validation,
                "parameter path " + path + " does not resolve");
        node = &(*node)[part];
    }
    require(node->is_number(), ErrorKind::Validation, "parameter " + path + " is not numeric");
    return node;
}

}  // namespace

SweepSpec parse_sweep_spec(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::Parse, std::string("sweep spec: ") + e.what());
    }
    require(j.is_object(), ErrorKind::Parse, "sweep spec must be a JSON object");
    for (const auto& item : j.items()) {
        const std::string& k = item.key();
        require(k == "parameter" || k == "values" || k == "range" || k == "objective",
                ErrorKind::Parse, "sweep spec: unknown key /" + k);
    }
    SweepSpec spec;
    require(j.contains("parameter") && j["parameter"].is_string(), ErrorKind::Parse,
            "sweep spec: /parameter must be a string");
    spec.parameter = j["parameter"].get<std::string>();

    const std::string objective = j.value("objective", std::string("P_m"));
    if (objective == "P_m") {
        spec.objective = Objective::P_m;
    } else if (objective == "zeta_m") {
        spec.objective = Objective::zeta_m;
    } else {
        fail(ErrorKind::Parse, "sweep spec: /objective must be \"P_m\" or \"zeta_m\"");
    }

    const bool has_values = j.contains("values"), has_range = j.contains("range");
    require(has_values != has_range, ErrorKind::Parse,
            "sweep spec needs exactly one of /values or /range");
    if (has_values) {
        require(j["values"].is_array(), ErrorKind::Parse, "sweep spec: /values must be an array");
        for (const auto& v : j["values"]) {
            require(v.is_number(), ErrorKind::Parse, "sweep spec: /values must hold numbers");
            spec.values.push_back(v.get<double>());
        }
    } else {
        const json& r = j["range"];
        require(r.is_object() && r.contains("start") && r.contains("stop") && r.contains("num") &&
                    r.size() == 3 && r["start"].is_number() && r["stop"].is_number() &&
                    r["num"].is_number_integer(),
                ErrorKind::Parse, "sweep spec: /range needs numeric start, stop and integer num");
        const double a = r["start"].get<double>(), b = r["stop"].get<double>();
        const long n = r["num"].get<long>();
        require(n >= 1, ErrorKind::Validation, "sweep spec: /range/num must be >= 1");
        for (long i = 0; i < n; ++i) {
            spec.values.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) /
                                                       static_cast<double>(n - 1));
        }
    }
    require(!spec.values.empty(), ErrorKind::Validation, "sweep spec: no values to sweep");
    return spec;
}

double parameter_value(const RunConfig& config, const std::string& path) {
    json j = json::parse(serialize_config(config));
    return resolve(j, path)->get<double>();
}

RunConfig apply_parameter(const RunConfig& base, const std::string& path, double value) {
    json j = json::parse(serialize_config(base));
    *resolve(j, path) = value;
    return parse_config(j.dump());
}

SweepResult run_sweep(const RunConfig& base, const SweepSpec& spec) {
    // a typo in the path fails before any run starts
    parameter_value(base, spec.parameter);

    SweepResult res;
    res.parameter = spec.parameter;
    res.objective = spec.objective;
    std::vector<std::future<SweepRow>> jobs;
    jobs.reserve(spec.values.size());
    for (double v : spec.values) {
        jobs.push_back(std::async(std::launch::async, [&base, &spec, v] {
            SweepRow row;
            row.value = v;
            try {
                const SystemParams p = apply_parameter(base, spec.parameter, v).to_params();
                const CycleResult c = simulate_cycle(p);
                row.ok = true;
                row.P_m = c.P_m;
                row.zeta_m = c.zeta_m;
                row.duration = c.duration;
            } catch (const Error& e) {
                row.error = e.kind();
                row.message = e.what();
            }
            return row;
        }));
    }
    for (auto& job : jobs) res.rows.push_back(job.get());

    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const SweepRow& r = res.rows[i];
        if (!r.ok) continue;
        const double obj = spec.objective == Objective::P_m ? r.P_m : r.zeta_m;
        if (!res.best) {
            res.best = i;
            continue;
        }
        const SweepRow& b = res.rows[*res.best];
        if (obj > (spec.objective == Objective::P_m ? b.P_m : b.zeta_m)) res.best = i;
    }
    if (!res.best) {
        const SweepRow& first = res.rows.front();
        fail(*first.error, "every sweep run failed; first: " + first.message);
    }
    return res;
}

std::string sweep_csv(const SweepResult& res) {
    std::string out = "value,P_m,zeta_m,duration,status\n";
    for (const auto& r : res.rows) {
        out += format_double(r.value) + ",";
        if (r.ok) {
            out += format_double(r.P_m) + "," + format_double(r.zeta_m) + "," +
                   format_double(r.duration) + ",ok\n";
        } else {
            out += ",,," + std::string(error_name(*r.error)) + "\n";
        }
    }
    return out;
}

std::string sweep_best_json(const SweepResult& res) {
    const SweepRow& b = res.rows.at(*res.best);
    json j;
    j["parameter"] = res.parameter;
    j["objective"] = objective_name(res.objective);
    j["index"] = *res.best;
    j["value"] = b.value;
    j["P_m"] = b.P_m;
    j["zeta_m"] = b.zeta_m;
    j["duration"] = b.duration;
    return j.dump(2) + "\n";
}

}  // namespace kitepump
