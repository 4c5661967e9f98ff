#include "tamed/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "tamed/analysis.hpp"
#include "tamed/calibration.hpp"
#include "tamed/errors.hpp"
#include "tamed/particles.hpp"
#include "tamed/report_io.hpp"
#include "tamed/scheme.hpp"

namespace tamed {
namespace cli {

namespace {

constexpr const char* kVersion = "0.1.0";

void ensure_output_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

void write_manifest(const RunConfig& config, const std::string& output_dir,
                    const std::string& command) {
    nlohmann::json manifest{{"command", command},
                            {"version", kVersion},
                            {"seed", config.plan.base_seed},
                            {"config", config.serialize()}};
    write_text_file(output_dir + "/manifest.json", manifest.dump(2) + "\n");
}

void warn_theorem_preconditions(const SdeProblem& problem, long smallest_n) {
    const double v0 = problem.lyapunov_V(problem.initial_state);
    const double n = static_cast<double>(smallest_n);
    if (n < v0 * v0)
        std::cerr << "warning: theorem precondition violated (n = " << smallest_n
                  << " < V(x0)^2 = " << v0 * v0 << ")\n";
    else if (n < v0 * v0 * v0)
        std::cerr << "warning: theorem precondition violated for the rate-1 bound (n = "
                  << smallest_n << " < V(x0)^3 = " << v0 * v0 * v0 << ")\n";
}

std::string padded_index(long i) {
    std::string s = std::to_string(i);
    while (s.size() < 3) s.insert(s.begin(), '0');
    return s;
}

}  // namespace

int verbosity_from_env() {
    const char* v = std::getenv("TAMEDSDE_VERBOSE");
    if (v == nullptr) return 0;
    return std::atoi(v);
}

int cmd_simulate(const RunConfig& config, const std::string& output_dir, int verbosity) {
    const SdeProblem problem = config.instantiate_problem();
    ensure_output_dir(output_dir);
    write_manifest(config, output_dir, "simulate");

    const long n = config.simulate.step_count;
    const TamingPolicy policy = TamingPolicy::for_step_count(n);
    warn_theorem_preconditions(problem, n);
    const long m = std::lround(static_cast<double>(n) * problem.horizon);
    if (m <= 0) throw UsageError("simulate: horizon too short for the grid");
    if (config.simulate.samples <= 0) throw UsageError("simulate: samples must be positive");

    for (long k = 0; k < config.simulate.samples; ++k) {
        const NoisePath noise = NoisePath::generate(config.plan.base_seed,
                                                    static_cast<std::uint64_t>(k), n, m,
                                                    problem.dimension);
        const TrajectoryRecord record = simulate_path(problem, policy, noise);
        const std::string file = output_dir + "/trajectory_" + padded_index(k) + ".csv";
        write_text_file(file, trajectory_csv(record));
        if (verbosity >= 1) {
            std::cerr << "simulate: wrote " << file;
            if (record.first_taming_time)
                std::cerr << " (first taming at t = " << *record.first_taming_time << ")";
            std::cerr << "\n";
        }
    }
    return kExitOk;
}

int cmd_converge(const RunConfig& config, const std::string& output_dir, int workers,
                 int verbosity) {
    const SdeProblem problem = config.instantiate_problem();
    ensure_output_dir(output_dir);
    write_manifest(config, output_dir, "converge");

    long smallest = config.plan.fine_step_count;
    for (long n : config.plan.coarse_step_counts) smallest = std::min(smallest, n);
    warn_theorem_preconditions(problem, smallest);

    const ConvergenceReport report = run_coupled_experiment(problem, config.plan, workers);
    write_text_file(output_dir + "/rates.csv", convergence_csv(report));

    nlohmann::json summary = convergence_summary_json(report);
    summary["problem"] = nlohmann::json::parse(R"({})");
    summary["problem"]["kind"] = problem_kind_name(config.problem.kind);
    summary["problem"]["label"] = problem.label;
    if (config.problem.kind == ProblemKind::particles) {
        summary["problem"]["particle_count"] = config.problem.particle_count;
        summary["problem"]["alpha"] = config.problem.alpha;
        summary["problem"]["sigma"] = config.problem.sigma;
    } else {
        summary["problem"]["x0"] = config.problem.x0;
        summary["problem"]["beta"] = config.problem.beta;
    }
    summary["problem"]["horizon"] = config.horizon;
    summary["plan_echo"] = config.serialize();
    write_text_file(output_dir + "/summary.json", summary.dump(2) + "\n");

    if (verbosity >= 1) {
        std::cerr << "converge: fitted rate " << report.fitted_rate << " ["
                  << report.rate_ci_low << ", " << report.rate_ci_high << "], "
                  << report.paths_quarantined << " paths quarantined\n";
    }
    if (report.dropped_rate_points > 0)
        std::cerr << "notice: " << report.dropped_rate_points
                  << " zero-error levels dropped from the rate fit\n";
    return kExitOk;
}

int cmd_check(const RunConfig& config, const std::string& output_dir, int verbosity) {
    if (config.check.conditions.empty())
        throw UsageError("check: no conditions selected (set check.conditions)");
    const SdeProblem problem = config.instantiate_problem();
    ensure_output_dir(output_dir);
    write_manifest(config, output_dir, "check");

    const bool is_particles = config.problem.kind == ProblemKind::particles;
    PointSampler points;
    PairSampler pairs;
    std::function<double(ConstSpan)> fd_scale;
    double mu = 0.0;
    double s_exponent = 0.0;
    if (is_particles) {
        const auto spec = particle_spec_from(config);
        points = particles::config_sampler(spec, config.check.min_gap_floor);
        fd_scale = [](ConstSpan x) { return particles::min_gap(x).min_gap; };
        pairs = mixed_pairs(points, 0.25,
                            [](ConstSpan x) { return 1e-4 * particles::min_gap(x).min_gap; });
        mu = spec.confinement_lipschitz;
        s_exponent = particles::lyapunov_exponent(spec.alpha);
    } else {
        points = box_sampler(problem.dimension, 3.0);
        pairs = mixed_pairs(points, 0.25, [](ConstSpan) { return 1e-4; });
        mu = config.problem.kind == ProblemKind::polynomial ? 1.0 : 0.0;
    }

    CheckOptions options;
    options.count = config.check.samples;
    options.seed = config.check.seed;
    options.fd_scale = fd_scale;

    bool all_passed = true;
    nlohmann::json reports = nlohmann::json::array();
    for (const auto& name : config.check.conditions) {
        const Condition condition = condition_from_name(name);
        AssumptionReport report;
        switch (condition) {
            case Condition::LyapunovLipschitz: {
                CheckOptions o = options;
                o.tolerance = 1e-9;
                o.rhs_constant = config.check.lipschitz_constant > 0.0
                                     ? config.check.lipschitz_constant
                                     : (is_particles ? calibration::particle_lipschitz_constant(
                                                           config.problem.alpha)
                                                     : 1.0);
                report = check_lyapunov_lipschitz(problem, pairs, o);
                break;
            }
            case Condition::HigherOrder: {
                CheckOptions o = options;
                o.tolerance = 1e-9;
                o.rhs_constant = config.check.higher_order_constant > 0.0
                                     ? config.check.higher_order_constant
                                     : (is_particles ? calibration::particle_higher_order_constant(
                                                           config.problem.alpha)
                                                     : 1.0);
                report = check_higher_order(problem, problem.drift_jacobian, pairs, o);
                break;
            }
            case Condition::Monotonicity: {
                CheckOptions o = options;
                o.tolerance = 1e-9;
                report = check_monotonicity(problem, mu, pairs, o);
                break;
            }
            case Condition::Generator: {
                GeneratorParams params;
                params.p = config.check.p;
                params.q_p = config.check.generator_q > 0.0
                                 ? config.check.generator_q
                                 : (is_particles ? generator_q_exponent(
                                                       params.p, s_exponent, config.problem.alpha)
                                                 : 1.5);
                params.convention = config.check.generator_convention == "half_intensity"
                                        ? DiffusionConvention::HalfIntensity
                                        : DiffusionConvention::Ito;
                bool estimate = false;
                if (config.check.generator_a_p > 0.0) {
                    params.a_p = config.check.generator_a_p;
                } else if (is_particles &&
                           calibration::has_particle_generator_a(config.problem.particle_count,
                                                                 config.problem.alpha, params.p)) {
                    params.a_p = calibration::particle_generator_a(
                        config.problem.particle_count, config.problem.alpha, params.p);
                } else {
                    estimate = true;
                }
                params.b_p = 0.0;
                CheckOptions o = options;
                o.tolerance = 1e-9;
                report = check_generator(problem, params, points, o, estimate);
                break;
            }
            case Condition::GradientPowerBound:
                throw UsageError(
                    "check: gradient_power_bound needs explicit constants; not exposed here");
        }
        all_passed = all_passed && report.passed;
        reports.push_back(assumption_report_json(report));
        if (verbosity >= 1)
            std::cerr << "check: " << name << (report.passed ? " passed" : " FAILED")
                      << " (worst ratio " << report.worst_ratio << ")\n";
    }
    nlohmann::json out{{"all_passed", all_passed}, {"reports", reports}};
    write_text_file(output_dir + "/checks.json", out.dump(2) + "\n");
    return all_passed ? kExitOk : kExitCheckFailed;
}

}  // namespace cli
}  // namespace tamed
