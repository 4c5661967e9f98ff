#pragma once

#include <string>

#include "tamed/analysis.hpp"
#include "tamed/harness.hpp"
#include "tamed/scheme.hpp"

#include <json.hpp>

namespace tamed {

/// Shortest round-trip decimal representation, so rerun outputs are
/// byte-stable.
std::string format_double(double v);

/// Writes `content` to `path`, throwing IoError on failure.
void write_text_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

/// Columns: time, x1..xd, tamed.
std::string trajectory_csv(const TrajectoryRecord& record);

/// Columns: n, error, stderr, taming_freq.
std::string convergence_csv(const ConvergenceReport& report);

nlohmann::json convergence_summary_json(const ConvergenceReport& report);

nlohmann::json assumption_report_json(const AssumptionReport& report);

/// Columns: t, abs_moment, abs_moment_se, v_moment, v_moment_se, taming_prob.
std::string moment_trace_csv(const MomentTrace& trace);

}  // namespace tamed
