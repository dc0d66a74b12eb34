#include "kitepump/config.hpp"

#include <algorithm>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kitepump/errors.hpp"

namespace kitepump {

namespace {

using json = nlohmann::ordered_json;

constexpr double deg = std::numbers::pi / 180.0;

class Section {
public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) {
            fail(ErrorKind::Parse, "expected an object at " + display());
        }
    }

    bool has(const std::string& key) const { return node_.contains(key); }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
        const json* v = find(key, fallback.has_value());
        if (!v) return *fallback;
        if (!v->is_number()) fail(ErrorKind::Parse, "expected a number at " + child(key));
        return v->get<double>();
    }

    bool boolean(const std::string& key, bool fallback) {
        const json* v = find(key, true);
        if (!v) return fallback;
        if (!v->is_boolean()) fail(ErrorKind::Parse, "expected true or false at " + child(key));
        return v->get<bool>();
    }

    std::string string(const std::string& key, const std::string& fallback) {
        const json* v = find(key, true);
        if (!v) return fallback;
        if (!v->is_string()) fail(ErrorKind::Parse, "expected a string at " + child(key));
        return v->get<std::string>();
    }

    Section object(const std::string& key) {
        const json* v = find(key, false);
        return Section(*v, child(key));
    }

    std::optional<Section> optional_object(const std::string& key) {
        const json* v = find(key, true);
        if (!v) return std::nullopt;
        return Section(*v, child(key));
    }

    void finish() const {
        for (const auto& item : node_.items()) {
            if (!seen_.count(item.key())) {
                fail(ErrorKind::Parse, "unknown key " + child(item.key()));
            }
        }
    }

private:
    const json* find(const std::string& key, bool optional) {
        seen_.insert(key);
        auto it = node_.find(key);
        if (it == node_.end()) {
            if (optional) return nullptr;
            fail(ErrorKind::Parse, "missing key " + child(key));
        }
        return &*it;
    }

    std::string display() const { return path_.empty() ? "/" : path_; }
    std::string child(const std::string& key) const { return path_ + "/" + key; }

    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

AeroSpec read_aero(Section s, const std::string& path) {
    AeroSpec a;
    const bool has_cl = s.has("C_L"), has_cr = s.has("C_R");
    if (has_cl == has_cr) {
        fail(ErrorKind::Parse, path + " needs exactly one of C_L or C_R");
    }
    a.resultant = has_cr;
    a.coefficient = s.number(has_cr ? "C_R" : "C_L");
    a.LD_k = s.number("LD_k");
    s.finish();
    return a;
}

json write_aero(const AeroSpec& a) {
    json j;
    j[a.resultant ? "C_R" : "C_L"] = a.coefficient;
    j["LD_k"] = a.LD_k;
    return j;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

}  // namespace

AeroSet AeroSpec::resolve() const {
    if (resultant) return AeroSet::from_resultant(coefficient, LD_k);
    return AeroSet{coefficient, LD_k};
}

SystemParams RunConfig::to_params() const {
    SystemParams p;
    p.env = Environment{v_w_ref, z_ref, z0, rho0, H_rho, uniform_wind};
    require(traction.coefficient > 0.0 && traction.LD_k > 0.0, ErrorKind::Validation,
            "kite.traction: coefficient and LD_k must be > 0");
    require(retraction.coefficient > 0.0 && retraction.LD_k > 0.0, ErrorKind::Validation,
            "kite.retraction: coefficient and LD_k must be > 0");
    p.kite = KiteParams{S, m, traction.resolve(), retraction.resolve()};
    p.tether = TetherParams{d_t, rho_t, C_D_c};
    p.op.beta_o = beta_o_deg * deg;
    p.op.phi_o = phi_o_deg * deg;
    p.op.chi_o = chi_o_deg * deg;
    p.op.r_min = r_min;
    p.op.r_max = r_max;
    p.op.F_out = F_out;
    p.op.F_in = F_in;
    p.op.dT = dT;
    p.op.gravity = gravity;
    p.op.force_end = force_end;
    p.validate();
    return p;
}

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::Parse, "line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
    }
    RunConfig c;
    Section top(root, "");

    Section env = top.object("environment");
    c.v_w_ref = env.number("v_w_ref");
    c.z_ref = env.number("z_ref");
    c.z0 = env.number("z0");
    c.rho0 = env.number("rho0", 1.225);
    c.H_rho = env.number("H_rho", 8550.0);
    c.uniform_wind = env.boolean("uniform", false);
    env.finish();

    Section kite = top.object("kite");
    c.S = kite.number("S");
    c.m = kite.number("m");
    c.traction = read_aero(kite.object("traction"), "/kite/traction");
    c.retraction = read_aero(kite.object("retraction"), "/kite/retraction");
    kite.finish();

    Section tether = top.object("tether");
    c.d_t = tether.number("d_t");
    c.rho_t = tether.number("rho_t");
    c.C_D_c = tether.number("C_D_c", 1.1);
    tether.finish();

    Section op = top.object("operation");
    c.beta_o_deg = op.number("beta_o_deg");
    c.phi_o_deg = op.number("phi_o_deg");
    c.chi_o_deg = op.number("chi_o_deg");
    c.r_min = op.number("r_min");
    c.r_max = op.number("r_max");
    c.F_out = op.number("F_out");
    c.F_in = op.number("F_in");
    c.dT = op.number("dT", 0.01);
    op.finish();

    if (auto mode = top.optional_object("mode")) {
        c.gravity = mode->boolean("gravity", true);
        const std::string end = mode->string("force_end", "kite");
        if (end == "kite") {
            c.force_end = ForceEnd::Kite;
        } else if (end == "ground") {
            c.force_end = ForceEnd::Ground;
        } else {
            fail(ErrorKind::Parse, "/mode/force_end must be \"kite\" or \"ground\"");
        }
        mode->finish();
    }
    if (auto out = top.optional_object("output")) {
        c.output_dir = out->string("dir", "out");
        out->finish();
    }
    top.finish();

    c.to_params();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
    json j;
    j["environment"] = {{"v_w_ref", c.v_w_ref}, {"z_ref", c.z_ref}, {"z0", c.z0},
                        {"rho0", c.rho0},       {"H_rho", c.H_rho}, {"uniform", c.uniform_wind}};
    j["kite"] = {{"S", c.S},
                 {"m", c.m},
                 {"traction", write_aero(c.traction)},
                 {"retraction", write_aero(c.retraction)}};
    j["tether"] = {{"d_t", c.d_t}, {"rho_t", c.rho_t}, {"C_D_c", c.C_D_c}};
    j["operation"] = {{"beta_o_deg", c.beta_o_deg}, {"phi_o_deg", c.phi_o_deg},
                      {"chi_o_deg", c.chi_o_deg},   {"r_min", c.r_min},
                      {"r_max", c.r_max},           {"F_out", c.F_out},
                      {"F_in", c.F_in},             {"dT", c.dT}};
    j["mode"] = {{"gravity", c.gravity},
                 {"force_end", c.force_end == ForceEnd::Kite ? "kite" : "ground"}};
    j["output"] = {{"dir", c.output_dir}};
    return j.dump(2) + "\n";
}

void save_config(const RunConfig& config, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write config file " + path);
    out << serialize_config(config);
    if (!out) fail(ErrorKind::Io, "failed writing config file " + path);
}

}  // namespace kitepump
