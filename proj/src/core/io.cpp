#include "kitepump/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "kitepump/errors.hpp"

namespace kitepump {

namespace {

using json = nlohmann::ordered_json;

constexpr double rad2deg = 180.0 / std::numbers::pi;
constexpr double deg2rad = std::numbers::pi / 180.0;

// CSV row builder
class Row {
public:
    Row& operator<<(double v) { return add(format_double(v)); }
    Row& operator<<(const std::string& s) { return add(s); }
    Row& operator<<(std::string_view s) { return add(std::string(s)); }
    Row& operator<<(int v) { return add(std::to_string(v)); }
    Row& operator<<(bool v) { return add(v ? "1" : "0"); }
    std::string str() const { return line_ + "\n"; }

private:
    Row& add(const std::string& cell) {
        if (!first_) line_ += ',';
        line_ += cell;
        first_ = false;
        return *this;
    }
    std::string line_;
    bool first_ = true;
};

json optional_number(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& cell, std::size_t line, const std::string& column) {
    const std::string s = trim(cell);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        fail(ErrorKind::Parse, "line " + std::to_string(line) + ": column " + column +
                                   " is not a number: '" + s + "'");
    }
    return v;
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write " + path);
    out << content;
    out.close();
    if (!out) fail(ErrorKind::Io, "failed writing " + path);
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) fail(ErrorKind::Io, "cannot create directory " + path + ": " + ec.message());
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

Phase parse_phase(const std::string& name) {
    if (name == "retraction") return Phase::Retraction;
    if (name == "transition") return Phase::Transition;
    if (name == "traction") return Phase::Traction;
    fail(ErrorKind::Parse, "unknown phase label '" + name + "'");
}

std::string timeseries_csv(const CycleResult& cycle) {
    std::string out = "t,phase,r,theta_deg,beta_deg,phi_deg,chi_deg,f,v_t,v_k,v_a,F_t_kite,F_tg,P\n";
    for (const auto& ph : cycle.phases) {
        for (const auto& s : ph.samples) {
            Row row;
            row << s.t << phase_name(s.phase) << s.r << s.theta * rad2deg << s.beta() * rad2deg
                << s.phi * rad2deg << s.chi * rad2deg << s.f << s.v_t << s.v_k << s.v_a
                << s.F_t_kite << s.F_tg << s.P;
            out += row.str();
        }
    }
    return out;
}

std::string cycle_summary_json(const CycleResult& cycle, const SystemParams& params) {
    json j;
    j["P_m"] = cycle.P_m;
    j["zeta_m"] = cycle.zeta_m;
    j["z_mt"] = cycle.z_mt;
    j["v_w_mt"] = cycle.v_w_mt;
    j["duration"] = cycle.duration;
    j["steps"] = cycle.steps;
    j["gravity"] = params.op.gravity;
    j["force_end"] = params.op.force_end == ForceEnd::Kite ? "kite" : "ground";
    j["dT"] = params.op.dT;
    j["dt"] = integration_step(params);
    json phases = json::array();
    for (const auto& ph : cycle.phases) {
        phases.push_back({{"phase", phase_name(ph.phase)},
                          {"t_start", ph.t_start},
                          {"duration", ph.duration},
                          {"energy", ph.energy},
                          {"mean_power", ph.mean_power},
                          {"steps", ph.steps}});
    }
    j["phases"] = phases;
    return j.dump(2) + "\n";
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
    std::string out = "dT,zeta_m,ratio,P_m,steps\n";
    for (const auto& r : rows) {
        Row row;
        row << r.dT << r.zeta_m << r.ratio << r.P_m << r.steps;
        out += row.str();
    }
    return out;
}

std::string telemetry_csv(const std::vector<LogRecord>& series) {
    std::string out = "t,F_tg,r,theta_deg,phi_deg,chi_deg,vk_x,vk_y,vk_z,v_t,v_w_ref,phase\n";
    for (const auto& rec : series) {
        Row row;
        row << rec.t << rec.F_tg << rec.r << rec.theta * rad2deg << rec.phi * rad2deg
            << (rec.chi ? format_double(*rec.chi * rad2deg) : std::string())
            << rec.v_kite[0] << rec.v_kite[1] << rec.v_kite[2] << rec.v_t << rec.v_w_ref
            << (rec.phase ? std::string(phase_name(*rec.phase)) : std::string());
        out += row.str();
    }
    return out;
}

std::vector<LogRecord> parse_telemetry_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::map<std::string, std::size_t> col;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) break;
    }
    if (trim(line).empty()) fail(ErrorKind::Parse, "telemetry file has no header");
    {
        const auto head = split(line);
        for (std::size_t i = 0; i < head.size(); ++i) col[trim(head[i])] = i;
    }
    const char* required[] = {"t", "F_tg", "r", "theta_deg", "phi_deg", "vk_x",
                              "vk_y", "vk_z", "v_t", "v_w_ref"};
    for (const char* name : required) {
        if (!col.count(name)) {
            fail(ErrorKind::Parse, std::string("telemetry header lacks column ") + name);
        }
    }
    const bool has_chi = col.count("chi_deg") > 0;
    const bool has_phase = col.count("phase") > 0;

    std::vector<LogRecord> series;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        if (cells.size() != col.size()) {
            fail(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected " +
                                       std::to_string(col.size()) + " cells, found " +
                                       std::to_string(cells.size()));
        }
        auto num = [&](const char* name) { return parse_number(cells[col[name]], line_no, name); };
        LogRecord rec;
        rec.t = num("t");
        rec.F_tg = num("F_tg");
        rec.r = num("r");
        rec.theta = num("theta_deg") * deg2rad;
        rec.phi = num("phi_deg") * deg2rad;
        if (has_chi && !trim(cells[col["chi_deg"]]).empty()) rec.chi = num("chi_deg") * deg2rad;
        rec.v_kite = {num("vk_x"), num("vk_y"), num("vk_z")};
        rec.v_t = num("v_t");
        rec.v_w_ref = num("v_w_ref");
        if (has_phase) {
            const std::string label = trim(cells[col["phase"]]);
            if (!label.empty()) rec.phase = parse_phase(label);
        }
        if (!(rec.r > 0.0)) {
            fail(ErrorKind::Validation, "line " + std::to_string(line_no) + ": r must be > 0");
        }
        if (!(rec.F_tg >= 0.0)) {
            fail(ErrorKind::Validation, "line " + std::to_string(line_no) + ": F_tg must be >= 0");
        }
        if (!series.empty() && !(rec.t > series.back().t)) {
            fail(ErrorKind::Validation,
                 "line " + std::to_string(line_no) + ": time must be strictly increasing");
        }
        series.push_back(rec);
    }
    return series;
}

std::string estimates_csv(const std::vector<EstimateRecord>& records) {
    std::string out =
        "t,phase,chi_deg,f,v_w,v_a,v_k,kappa,F_a,C_R,C_R_k,LD_sys,LD_k,cr_valid,valid,flag\n";
    for (const auto& e : records) {
        Row row;
        row << e.t << phase_name(e.phase) << e.chi * rad2deg << e.f << e.v_w << e.v_a << e.v_k
            << e.kappa << e.F_a << e.C_R << e.C_R_k << e.LD_sys << e.LD_k << e.cr_valid
            << e.valid << flag_name(e.flag);
        out += row.str();
    }
    return out;
}

std::string phase_averages_json(const PhaseAverages& a) {
    json j;
    j["C_R_o"] = a.C_R_o;
    j["C_R_i"] = a.C_R_i;
    j["C_R_k_o"] = a.C_R_k_o;
    j["C_R_k_i"] = a.C_R_k_i;
    j["LD_sys_o"] = optional_number(a.LD_sys_o);
    j["LD_sys_i"] = optional_number(a.LD_sys_i);
    j["LD_k_o"] = optional_number(a.LD_k_o);
    j["LD_k_i"] = optional_number(a.LD_k_i);
    j["samples"] = {{"traction", a.samples_o},
                    {"retraction", a.samples_i},
                    {"transition", a.samples_transition}};
    j["cr_valid"] = {{"traction", a.cr_valid_o}, {"retraction", a.cr_valid_i}};
    j["ld_valid"] = {{"traction", a.ld_valid_o}, {"retraction", a.ld_valid_i}};
    return j.dump(2) + "\n";
}

}  // namespace kitepump
