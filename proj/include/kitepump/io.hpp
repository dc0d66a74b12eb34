// File formats: CSV series and JSON summaries.
#pragma once

#include <string>
#include <vector>

#include "kitepump/cycle.hpp"
#include "kitepump/estimation.hpp"

namespace kitepump {

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
void ensure_directory(const std::string& path);
std::string join_path(const std::string& dir, const std::string& name);

/// t,phase,r,theta_deg,beta_deg,phi_deg,chi_deg,f,v_t,v_k,v_a,F_t_kite,F_tg,P
std::string timeseries_csv(const CycleResult& cycle);
std::string cycle_summary_json(const CycleResult& cycle, const SystemParams& params);

std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

/// t,F_tg,r,theta_deg,phi_deg,chi_deg,vk_x,vk_y,vk_z,v_t,v_w_ref,phase
std::string telemetry_csv(const std::vector<LogRecord>& series);
/// Columns are matched by header name; chi_deg and phase may be absent or
/// left empty per row.
std::vector<LogRecord> parse_telemetry_csv(const std::string& text);

std::string estimates_csv(const std::vector<EstimateRecord>& records);
std::string phase_averages_json(const PhaseAverages& averages);

Phase parse_phase(const std::string& name);

}  // namespace kitepump
