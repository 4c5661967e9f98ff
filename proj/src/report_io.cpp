#include "tamed/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tamed/errors.hpp"

namespace tamed {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string trajectory_csv(const TrajectoryRecord& record) {
    std::string out = "time";
    for (int i = 1; i <= record.dimension; ++i) out += ",x" + std::to_string(i);
    out += ",tamed\n";
    for (long k = 0; k <= record.steps(); ++k) {
        out += format_double(record.times[k]);
        const ConstSpan x = record.state(k);
        for (double v : x) {
            out += ',';
            out += format_double(v);
        }
        out += record.tamed_flags[k] ? ",1\n" : ",0\n";
    }
    return out;
}

std::string convergence_csv(const ConvergenceReport& report) {
    std::string out = "n,error,stderr,taming_freq\n";
    for (const auto& level : report.levels) {
        out += std::to_string(level.step_count);
        out += ',';
        out += format_double(level.error);
        out += ',';
        out += format_double(level.std_error);
        out += ',';
        out += format_double(level.taming_frequency);
        out += '\n';
    }
    return out;
}

namespace {

nlohmann::json json_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

}  // namespace

nlohmann::json convergence_summary_json(const ConvergenceReport& report) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& l : report.levels) {
        levels.push_back({{"n", l.step_count},
                          {"error", l.error},
                          {"stderr", l.std_error},
                          {"taming_freq", l.taming_frequency},
                          {"taming_stderr", l.taming_std_error},
                          {"argmax_time_index", l.argmax_time_index}});
    }
    return {{"fitted_rate", json_or_null(report.fitted_rate)},
            {"intercept", json_or_null(report.intercept)},
            {"rate_ci", {json_or_null(report.rate_ci_low), json_or_null(report.rate_ci_high)}},
            {"dropped_rate_points", report.dropped_rate_points},
            {"levels", levels},
            {"paths_total", report.paths_total},
            {"paths_quarantined", report.paths_quarantined},
            {"reference_taming_freq", report.reference_taming_frequency},
            {"error_mode", error_mode_name(report.error_mode)},
            {"error_exponent", report.error_exponent},
            {"base_seed", report.base_seed},
            {"fine_step_count", report.fine_step_count},
            {"wall_seconds", report.wall_seconds}};
}

nlohmann::json assumption_report_json(const AssumptionReport& report) {
    nlohmann::json worst = nlohmann::json::array();
    for (const auto& v : report.worst_sample) worst.push_back(v);
    nlohmann::json j{{"condition", condition_name(report.condition)},
                     {"samples_tested", report.samples_tested},
                     {"worst_ratio", json_or_null(report.worst_ratio)},
                     {"worst_sample", worst},
                     {"tolerance", report.tolerance},
                     {"rhs_constant", report.rhs_constant},
                     {"passed", report.passed},
                     {"seed", report.seed}};
    if (std::isfinite(report.estimated_constant))
        j["estimated_constant"] = report.estimated_constant;
    if (std::isfinite(report.fd_cross_error)) j["fd_cross_error"] = report.fd_cross_error;
    return j;
}

std::string moment_trace_csv(const MomentTrace& trace) {
    std::string out = "t,abs_moment,abs_moment_se,v_moment,v_moment_se,taming_prob\n";
    for (std::size_t k = 0; k < trace.times.size(); ++k) {
        out += format_double(trace.times[k]);
        out += ',';
        out += format_double(trace.abs_moment[k]);
        out += ',';
        out += format_double(trace.abs_moment_se[k]);
        out += ',';
        out += format_double(trace.v_moment[k]);
        out += ',';
        out += format_double(trace.v_moment_se[k]);
        out += ',';
        out += format_double(trace.taming_probability[k]);
        out += '\n';
    }
    return out;
}

}  // namespace tamed
