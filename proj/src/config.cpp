#include "tamed/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "tamed/errors.hpp"
#include "tamed/particles.hpp"
#include "tamed/problems.hpp"
#include "tamed/report_io.hpp"

namespace tamed {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            parts.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return parts;
}

double parse_double(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    double out = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw UsageError("config: invalid number for key '" + key + "': '" + v + "'");
    return out;
}

long parse_long(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    long out = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw UsageError("config: invalid integer for key '" + key + "': '" + v + "'");
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    std::uint64_t out = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw UsageError("config: invalid unsigned integer for key '" + key + "': '" + v + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    if (t == "true" || t == "1") return true;
    if (t == "false" || t == "0") return false;
    throw UsageError("config: invalid boolean for key '" + key + "': '" + v + "'");
}

std::vector<long> parse_long_list(const std::string& key, const std::string& v) {
    std::vector<long> out;
    for (const auto& part : split(v, ',')) {
        if (part.empty()) throw UsageError("config: empty list entry for key '" + key + "'");
        out.push_back(parse_long(key, part));
    }
    return out;
}

Vec parse_double_list(const std::string& key, const std::string& v) {
    Vec out;
    for (const auto& part : split(v, ',')) {
        if (part.empty()) throw UsageError("config: empty list entry for key '" + key + "'");
        out.push_back(parse_double(key, part));
    }
    return out;
}

std::string join_longs(const std::vector<long>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

std::string join_doubles(const Vec& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v[i]);
    }
    return out;
}

std::string join_strings(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += v[i];
    }
    return out;
}

}  // namespace

std::string problem_kind_name(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::linear: return "linear";
        case ProblemKind::polynomial: return "polynomial";
        case ProblemKind::particles: return "particles";
    }
    return "unknown";
}

ProblemKind problem_kind_from_name(const std::string& name) {
    if (name == "linear") return ProblemKind::linear;
    if (name == "polynomial") return ProblemKind::polynomial;
    if (name == "particles") return ProblemKind::particles;
    throw UsageError("config: unknown problem kind '" + name + "'");
}

namespace {

void assign(RunConfig& c, const std::string& section, const std::string& key,
            const std::string& value) {
    const std::string full = section + "." + key;
    if (section == "problem") {
        if (key == "kind") c.problem.kind = problem_kind_from_name(trim(value));
        else if (key == "x0") c.problem.x0 = parse_double(full, value);
        else if (key == "beta") c.problem.beta = parse_double(full, value);
        else if (key == "lyapunov_scale") c.problem.lyapunov_scale = parse_double(full, value);
        else if (key == "particle_count") c.problem.particle_count = static_cast<int>(parse_long(full, value));
        else if (key == "alpha") c.problem.alpha = parse_double(full, value);
        else if (key == "sigma") c.problem.sigma = parse_double(full, value);
        else if (key == "confinement") c.problem.confinement = trim(value);
        else if (key == "initial") c.problem.initial = trim(value);
        else if (key == "initial_spacing") c.problem.initial_spacing = parse_double(full, value);
        else if (key == "initial_positions") c.problem.initial_positions = parse_double_list(full, value);
        else if (key == "lyapunov_constant") c.problem.lyapunov_constant = parse_double(full, value);
        else throw UsageError("config: unknown key '" + full + "'");
    } else if (section == "plan") {
        if (key == "horizon") c.horizon = parse_double(full, value);
        else if (key == "coarse_step_counts") c.plan.coarse_step_counts = parse_long_list(full, value);
        else if (key == "fine_step_count") c.plan.fine_step_count = parse_long(full, value);
        else if (key == "path_count") c.plan.path_count = parse_long(full, value);
        else if (key == "error_exponent") c.plan.error_exponent = parse_double(full, value);
        else if (key == "error_mode") c.plan.error_mode = error_mode_from_name(trim(value));
        else if (key == "base_seed") c.plan.base_seed = parse_u64(full, value);
        else throw UsageError("config: unknown key '" + full + "'");
    } else if (section == "simulate") {
        if (key == "step_count") c.simulate.step_count = parse_long(full, value);
        else if (key == "samples") c.simulate.samples = parse_long(full, value);
        else throw UsageError("config: unknown key '" + full + "'");
    } else if (section == "check") {
        if (key == "conditions") {
            c.check.conditions.clear();
            for (auto& s : split(value, ',')) {
                if (!s.empty()) c.check.conditions.push_back(s);
            }
        } else if (key == "samples") c.check.samples = parse_long(full, value);
        else if (key == "seed") c.check.seed = parse_u64(full, value);
        else if (key == "p") c.check.p = parse_double(full, value);
        else if (key == "min_gap_floor") c.check.min_gap_floor = parse_double(full, value);
        else if (key == "generator_convention") c.check.generator_convention = trim(value);
        else if (key == "generator_a_p") c.check.generator_a_p = parse_double(full, value);
        else if (key == "generator_q") c.check.generator_q = parse_double(full, value);
        else if (key == "lipschitz_constant") c.check.lipschitz_constant = parse_double(full, value);
        else if (key == "higher_order_constant") c.check.higher_order_constant = parse_double(full, value);
        else throw UsageError("config: unknown key '" + full + "'");
    } else if (section == "output") {
        if (key == "dir") c.output.dir = trim(value);
        else if (key == "emit_paths") c.output.emit_paths = parse_bool(full, value);
        else throw UsageError("config: unknown key '" + full + "'");
    } else {
        throw UsageError("config: unknown section '" + section + "'");
    }
}

}  // namespace

RunConfig RunConfig::parse_text(const std::string& text) {
    RunConfig c;
    std::string section;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = trim(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw UsageError("config: malformed section header at line " + std::to_string(line_no));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config: expected 'key = value' at line " + std::to_string(line_no));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw UsageError("config: key '" + key + "' appears before any [section]");
        assign(c, section, key, value);
    }
    return c;
}

RunConfig RunConfig::parse_file(const std::string& path) {
    return parse_text(read_text_file(path));
}

void RunConfig::apply_override(const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw UsageError("--set expects section.key=value, got '" + assignment + "'");
    const std::string key_path = trim(assignment.substr(0, eq));
    const std::string value = assignment.substr(eq + 1);
    const std::size_t dot = key_path.find('.');
    if (dot == std::string::npos)
        throw UsageError("--set expects section.key=value, got '" + assignment + "'");
    assign(*this, key_path.substr(0, dot), key_path.substr(dot + 1), value);
}

std::string RunConfig::serialize() const {
    std::string out;
    out += "[problem]\n";
    out += "kind = " + problem_kind_name(problem.kind) + "\n";
    out += "x0 = " + format_double(problem.x0) + "\n";
    out += "beta = " + format_double(problem.beta) + "\n";
    out += "lyapunov_scale = " + format_double(problem.lyapunov_scale) + "\n";
    out += "particle_count = " + std::to_string(problem.particle_count) + "\n";
    out += "alpha = " + format_double(problem.alpha) + "\n";
    out += "sigma = " + format_double(problem.sigma) + "\n";
    out += "confinement = " + problem.confinement + "\n";
    out += "initial = " + problem.initial + "\n";
    out += "initial_spacing = " + format_double(problem.initial_spacing) + "\n";
    out += "initial_positions = " + join_doubles(problem.initial_positions) + "\n";
    out += "lyapunov_constant = " + format_double(problem.lyapunov_constant) + "\n";
    out += "\n[plan]\n";
    out += "horizon = " + format_double(horizon) + "\n";
    out += "coarse_step_counts = " + join_longs(plan.coarse_step_counts) + "\n";
    out += "fine_step_count = " + std::to_string(plan.fine_step_count) + "\n";
    out += "path_count = " + std::to_string(plan.path_count) + "\n";
    out += "error_exponent = " + format_double(plan.error_exponent) + "\n";
    out += "error_mode = " + error_mode_name(plan.error_mode) + "\n";
    out += "base_seed = " + std::to_string(plan.base_seed) + "\n";
    out += "\n[simulate]\n";
    out += "step_count = " + std::to_string(simulate.step_count) + "\n";
    out += "samples = " + std::to_string(simulate.samples) + "\n";
    out += "\n[check]\n";
    out += "conditions = " + join_strings(check.conditions) + "\n";
    out += "samples = " + std::to_string(check.samples) + "\n";
    out += "seed = " + std::to_string(check.seed) + "\n";
    out += "p = " + format_double(check.p) + "\n";
    out += "min_gap_floor = " + format_double(check.min_gap_floor) + "\n";
    out += "generator_convention = " + check.generator_convention + "\n";
    out += "generator_a_p = " + format_double(check.generator_a_p) + "\n";
    out += "generator_q = " + format_double(check.generator_q) + "\n";
    out += "lipschitz_constant = " + format_double(check.lipschitz_constant) + "\n";
    out += "higher_order_constant = " + format_double(check.higher_order_constant) + "\n";
    out += "\n[output]\n";
    out += "dir = " + output.dir + "\n";
    out += "emit_paths = " + std::string(output.emit_paths ? "true" : "false") + "\n";
    return out;
}

particles::ParticleSystemSpec particle_spec_from(const RunConfig& config) {
    if (config.problem.kind != ProblemKind::particles)
        throw UsageError("config: not a particle-system problem");
    const auto& p = config.problem;
    Vec x0;
    if (p.initial == "equispaced") {
        x0 = particles::equispaced_positions(p.particle_count, p.initial_spacing);
    } else if (p.initial == "explicit") {
        x0 = p.initial_positions;
    } else {
        throw UsageError("config: problem.initial must be 'equispaced' or 'explicit'");
    }
    if (p.confinement == "quadratic") {
        return particles::ParticleSystemSpec::quadratic_confinement(
            p.particle_count, p.alpha, p.sigma, std::move(x0), p.lyapunov_constant);
    }
    if (p.confinement == "none") {
        return particles::ParticleSystemSpec::no_confinement(
            p.particle_count, p.alpha, p.sigma, std::move(x0), p.lyapunov_constant);
    }
    throw UsageError("config: problem.confinement must be 'quadratic' or 'none'");
}

SdeProblem RunConfig::instantiate_problem() const {
    switch (problem.kind) {
        case ProblemKind::linear:
            return linear_problem(problem.x0, problem.beta, horizon);
        case ProblemKind::polynomial:
            return polynomial_problem(problem.x0, problem.beta, horizon, problem.lyapunov_scale);
        case ProblemKind::particles:
            return particles::build_problem(particle_spec_from(*this), horizon);
    }
    throw UsageError("config: invalid problem kind");
}

}  // namespace tamed
