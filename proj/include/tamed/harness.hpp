#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tamed/problem.hpp"

namespace tamed {

enum class ErrorMode { terminal, grid_sup };
std::string error_mode_name(ErrorMode mode);
ErrorMode error_mode_from_name(const std::string& name);

/// Coupled strong-error experiment: one fine driving path per Monte Carlo
/// path, block-summed to every coarse grid, so scheme comparisons isolate
/// discretization error from noise variance.
struct ExperimentPlan {
    std::vector<long> coarse_step_counts;  // powers of two, each divides fine_step_count
    long fine_step_count = 0;              // power of two, >= 16 x largest coarse
    long path_count = 0;                   // M
    double error_exponent = 2.0;           // p >= 2
    ErrorMode error_mode = ErrorMode::grid_sup;
    std::uint64_t base_seed = 0;

    void validate() const;
};

struct LevelResult {
    long step_count = 0;
    /// (max_k mean_j |X^n - X^ref|^p(t_k))^{1/p} in grid_sup mode; the
    /// terminal-time value otherwise.
    double error = 0.0;
    double std_error = 0.0;        // delta-method MC standard error of `error`
    double taming_frequency = 0.0; // fraction of paths with a taming event by T
    double taming_std_error = 0.0;
    long argmax_time_index = 0;
};

struct ConvergenceReport {
    std::vector<LevelResult> levels;
    double fitted_rate = 0.0;  // slope of log error vs log(1/n); NaN when < 3 usable levels
    double intercept = 0.0;
    double rate_ci_low = 0.0;  // bootstrap 95% interval (over path blocks)
    double rate_ci_high = 0.0;
    int dropped_rate_points = 0;  // levels excluded from the fit (zero error)
    long paths_total = 0;
    long paths_quarantined = 0;
    double reference_taming_frequency = 0.0;
    ErrorMode error_mode = ErrorMode::grid_sup;
    double error_exponent = 2.0;
    std::uint64_t base_seed = 0;
    long fine_step_count = 0;
    double wall_seconds = 0.0;
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    int dropped_points = 0;
};

/// Ordinary least squares of log(error) on log(1/n). Zero errors are dropped
/// with a count; fewer than 3 surviving points is a UsageError.
RateFit fit_rate(std::span<const long> step_counts, std::span<const double> errors);

/// Runs the coupled experiment. Per-path failures (non-finite states or
/// accumulations) are quarantined; more than 1% quarantined paths raises
/// ExperimentError. workers = 0 uses the hardware concurrency. Results are
/// bit-identical for a fixed plan regardless of the worker count (fixed
/// block structure and pairwise reduction order).
ConvergenceReport run_coupled_experiment(const SdeProblem& problem, const ExperimentPlan& plan,
                                         int workers = 0);

/// Monte Carlo traces of E|X^n_t|^p, the stopped Lyapunov moment, and the
/// taming probability on the grid of step count n. The stopped V-moment
/// freezes V at the last untamed grid state once a taming event occurs.
struct MomentTrace {
    long step_count = 0;
    double error_exponent = 2.0;
    std::vector<double> times;
    std::vector<double> abs_moment;
    std::vector<double> abs_moment_se;
    std::vector<double> v_moment;
    std::vector<double> v_moment_se;
    std::vector<double> taming_probability;  // non-decreasing in t
    std::vector<double> taming_probability_se;
};

MomentTrace moment_trace(const SdeProblem& problem, long step_count, long path_count,
                         double error_exponent, std::uint64_t seed);

}  // namespace tamed
