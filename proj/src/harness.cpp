#include "tamed/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "tamed/errors.hpp"
#include "tamed/rng.hpp"
#include "tamed/scheme.hpp"

namespace tamed {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

double pth_power_of_distance(ConstSpan a, ConstSpan b, double p) {
    const double d2 = squared_distance(a, b);
    if (p == 2.0) return d2;
    return std::pow(d2, 0.5 * p);
}

/// Pairwise (tree) sum over blocks, in fixed index order.
long double pairwise_sum(const long double* v, std::size_t count, std::size_t stride) {
    if (count == 1) return v[0];
    const std::size_t half = count / 2;
    return pairwise_sum(v, half, stride) + pairwise_sum(v + half * stride, count - half, stride);
}

struct LevelLayout {
    long step_count;   // n
    long factor;       // fine / n
    long steps;        // m = round(n T)
    std::size_t offset;  // into the staged per-path vector
};

}  // namespace

std::string error_mode_name(ErrorMode mode) {
    return mode == ErrorMode::terminal ? "terminal" : "grid_sup";
}

ErrorMode error_mode_from_name(const std::string& name) {
    if (name == "terminal") return ErrorMode::terminal;
    if (name == "grid_sup") return ErrorMode::grid_sup;
    throw UsageError("unknown error mode: " + name);
}

void ExperimentPlan::validate() const {
    if (coarse_step_counts.empty()) throw UsageError("plan: coarse_step_counts must not be empty");
    if (!is_power_of_two(fine_step_count))
        throw UsageError("plan: fine_step_count must be a positive power of two");
    long largest = 0;
    for (long n : coarse_step_counts) {
        if (!is_power_of_two(n)) throw UsageError("plan: coarse step counts must be powers of two");
        if (fine_step_count % n != 0)
            throw UsageError("plan: every coarse step count must divide fine_step_count");
        largest = std::max(largest, n);
    }
    if (fine_step_count / largest < 16)
        throw UsageError("plan: fine_step_count must be at least 16x the largest coarse count");
    if (path_count <= 0) throw UsageError("plan: path_count must be positive");
    if (!(error_exponent >= 2.0)) throw UsageError("plan: error_exponent must be at least 2");
}

RateFit fit_rate(std::span<const long> step_counts, std::span<const double> errors) {
    if (step_counts.size() != errors.size()) throw UsageError("fit_rate: length mismatch");
    std::vector<double> xs, ys;
    int dropped = 0;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!(errors[i] > 0.0)) {
            ++dropped;
            continue;
        }
        xs.push_back(std::log(1.0 / static_cast<double>(step_counts[i])));
        ys.push_back(std::log(errors[i]));
    }
    if (xs.size() < 3) throw UsageError("fit_rate: fewer than 3 usable points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.dropped_points = dropped;
    return fit;
}

ConvergenceReport run_coupled_experiment(const SdeProblem& problem, const ExperimentPlan& plan,
                                         int workers) {
    const auto t_start = std::chrono::steady_clock::now();
    plan.validate();
    problem.validate();

    const long m_fine = std::lround(static_cast<double>(plan.fine_step_count) * problem.horizon);
    if (m_fine <= 0) throw UsageError("experiment: horizon too short for the fine grid");

    std::vector<LevelLayout> levels;
    std::size_t staged_size = 0;
    for (long n : plan.coarse_step_counts) {
        LevelLayout l;
        l.step_count = n;
        l.factor = plan.fine_step_count / n;
        if (m_fine % l.factor != 0)
            throw UsageError("experiment: horizon does not align the coarse and fine grids");
        l.steps = m_fine / l.factor;
        l.offset = staged_size;
        staged_size += static_cast<std::size_t>(l.steps) + 1;
        levels.push_back(l);
    }
    const std::size_t n_levels = levels.size();
    const long M = plan.path_count;
    const double p = plan.error_exponent;

    // Fixed block structure: summation order is independent of the worker count.
    const long block_size = (M + 49) / 50;
    const long n_blocks = (M + block_size - 1) / block_size;

    std::vector<long double> block_sum(static_cast<std::size_t>(n_blocks) * staged_size, 0.0L);
    std::vector<long double> block_sum2(static_cast<std::size_t>(n_blocks) * staged_size, 0.0L);
    std::vector<long> block_kept(n_blocks, 0);
    std::vector<long> block_tamed(static_cast<std::size_t>(n_blocks) * n_levels, 0);
    std::vector<long> block_ref_tamed(n_blocks, 0);
    std::vector<long> block_quarantined(n_blocks, 0);

    const TamingPolicy fine_policy = TamingPolicy::for_step_count(plan.fine_step_count);
    std::vector<TamingPolicy> coarse_policies;
    for (const auto& l : levels) coarse_policies.push_back(TamingPolicy::for_step_count(l.step_count));

    std::atomic<long> next_block{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker_fn = [&]() {
        NoisePath fine_noise, coarse_noise;
        TrajectoryRecord ref, coarse;
        std::vector<double> staged(staged_size);
        std::vector<char> tamed_at(n_levels, 0);
        try {
            for (;;) {
                const long b = next_block.fetch_add(1);
                if (b >= n_blocks) break;
                const long j_begin = b * block_size;
                const long j_end = std::min(M, j_begin + block_size);
                for (long j = j_begin; j < j_end; ++j) {
                    bool ok = true;
                    bool ref_tamed = false;
                    try {
                        NoisePath::generate_into(plan.base_seed, static_cast<std::uint64_t>(j),
                                                 plan.fine_step_count, m_fine, problem.dimension,
                                                 fine_noise);
                        simulate_path_into(problem, fine_policy, fine_noise, ref);
                        ref_tamed = ref.first_taming_time.has_value();
                        for (std::size_t li = 0; li < n_levels; ++li) {
                            const auto& l = levels[li];
                            coarsen_noise_into(fine_noise, l.factor, coarse_noise);
                            simulate_path_into(problem, coarse_policies[li], coarse_noise, coarse);
                            tamed_at[li] = coarse.first_taming_time.has_value() ? 1 : 0;
                            for (long k = 0; k <= l.steps; ++k) {
                                const double v = pth_power_of_distance(
                                    coarse.state(k), ref.state(k * l.factor), p);
                                if (!std::isfinite(v)) {
                                    ok = false;
                                    break;
                                }
                                staged[l.offset + static_cast<std::size_t>(k)] = v;
                            }
                            if (!ok) break;
                        }
                    } catch (const NonFiniteStateError&) {
                        ok = false;
                    } catch (const ComputationalDomainError&) {
                        ok = false;
                    }
                    if (!ok) {
                        ++block_quarantined[b];
                        continue;
                    }
                    long double* sum = block_sum.data() + static_cast<std::size_t>(b) * staged_size;
                    long double* sum2 = block_sum2.data() + static_cast<std::size_t>(b) * staged_size;
                    for (std::size_t k = 0; k < staged_size; ++k) {
                        const long double v = staged[k];
                        sum[k] += v;
                        sum2[k] += v * v;
                    }
                    for (std::size_t li = 0; li < n_levels; ++li)
                        block_tamed[static_cast<std::size_t>(b) * n_levels + li] += tamed_at[li];
                    block_ref_tamed[b] += ref_tamed ? 1 : 0;
                    ++block_kept[b];
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };

    int n_workers = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
    n_workers = std::max(1, std::min<int>(n_workers, static_cast<int>(n_blocks)));
    if (n_workers == 1) {
        worker_fn();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker_fn);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    ConvergenceReport report;
    report.paths_total = M;
    report.error_mode = plan.error_mode;
    report.error_exponent = p;
    report.base_seed = plan.base_seed;
    report.fine_step_count = plan.fine_step_count;

    long kept_total = 0, quarantined = 0, ref_tamed_total = 0;
    for (long b = 0; b < n_blocks; ++b) {
        kept_total += block_kept[b];
        quarantined += block_quarantined[b];
        ref_tamed_total += block_ref_tamed[b];
    }
    report.paths_quarantined = quarantined;
    if (quarantined * 100 > M || kept_total == 0)
        throw ExperimentError("experiment: " + std::to_string(quarantined) + " of " +
                              std::to_string(M) + " paths quarantined (limit 1%)");
    report.reference_taming_frequency =
        static_cast<double>(ref_tamed_total) / static_cast<double>(kept_total);

    // Deterministic reduction over blocks, then per-level statistics.
    std::vector<double> mean(staged_size), mean_sq(staged_size);
    for (std::size_t k = 0; k < staged_size; ++k) {
        mean[k] = static_cast<double>(
            pairwise_sum(block_sum.data() + k, static_cast<std::size_t>(n_blocks), staged_size) /
            static_cast<long double>(kept_total));
        mean_sq[k] = static_cast<double>(
            pairwise_sum(block_sum2.data() + k, static_cast<std::size_t>(n_blocks), staged_size) /
            static_cast<long double>(kept_total));
    }

    const double inv_p = 1.0 / p;
    for (std::size_t li = 0; li < n_levels; ++li) {
        const auto& l = levels[li];
        long k_star = l.steps;
        if (plan.error_mode == ErrorMode::grid_sup) {
            k_star = 0;
            for (long k = 1; k <= l.steps; ++k) {
                if (mean[l.offset + static_cast<std::size_t>(k)] >
                    mean[l.offset + static_cast<std::size_t>(k_star)])
                    k_star = k;
            }
        }
        const double m_star = mean[l.offset + static_cast<std::size_t>(k_star)];
        const double msq_star = mean_sq[l.offset + static_cast<std::size_t>(k_star)];
        LevelResult res;
        res.step_count = l.step_count;
        res.argmax_time_index = k_star;
        res.error = m_star > 0.0 ? std::pow(m_star, inv_p) : 0.0;
        double se_mean = 0.0;
        if (kept_total > 1) {
            const double var = std::max(0.0, (msq_star - m_star * m_star) *
                                                 static_cast<double>(kept_total) /
                                                 static_cast<double>(kept_total - 1));
            se_mean = std::sqrt(var / static_cast<double>(kept_total));
        }
        res.std_error =
            m_star > 0.0 ? se_mean * inv_p * std::pow(m_star, inv_p - 1.0) : 0.0;
        long tamed = 0;
        for (long b = 0; b < n_blocks; ++b)
            tamed += block_tamed[static_cast<std::size_t>(b) * n_levels + li];
        res.taming_frequency = static_cast<double>(tamed) / static_cast<double>(kept_total);
        res.taming_std_error = std::sqrt(
            std::max(0.0, res.taming_frequency * (1.0 - res.taming_frequency) /
                              static_cast<double>(kept_total)));
        report.levels.push_back(res);
    }

    // Point fit.
    {
        std::vector<long> ns;
        std::vector<double> errs;
        for (const auto& l : report.levels) {
            ns.push_back(l.step_count);
            errs.push_back(l.error);
        }
        try {
            const RateFit fit = fit_rate(ns, errs);
            report.fitted_rate = fit.slope;
            report.intercept = fit.intercept;
            report.dropped_rate_points = fit.dropped_points;
        } catch (const UsageError&) {
            report.fitted_rate = kNaN;
            report.intercept = kNaN;
            report.dropped_rate_points = static_cast<int>(report.levels.size());
        }
    }

    // Bootstrap the rate over path blocks (resampled with replacement), with
    // the grid-sup argmax recomputed per replicate.
    report.rate_ci_low = kNaN;
    report.rate_ci_high = kNaN;
    if (n_blocks >= 10 && std::isfinite(report.fitted_rate)) {
        constexpr int kReplicates = 200;
        CounterRng rng(plan.base_seed, 0x0B007u);
        std::vector<double> slopes;
        std::vector<long double> resum(staged_size);
        std::vector<long> picks(n_blocks);
        for (int r = 0; r < kReplicates; ++r) {
            long kept_r = 0;
            for (long b = 0; b < n_blocks; ++b) {
                picks[b] = static_cast<long>(rng.below(static_cast<std::uint64_t>(n_blocks)));
                kept_r += block_kept[picks[b]];
            }
            if (kept_r == 0) continue;
            std::fill(resum.begin(), resum.end(), 0.0L);
            for (long b = 0; b < n_blocks; ++b) {
                const long double* src =
                    block_sum.data() + static_cast<std::size_t>(picks[b]) * staged_size;
                for (std::size_t k = 0; k < staged_size; ++k) resum[k] += src[k];
            }
            std::vector<long> ns;
            std::vector<double> errs;
            for (const auto& l : levels) {
                long k_star = l.steps;
                if (plan.error_mode == ErrorMode::grid_sup) {
                    k_star = 0;
                    for (long k = 1; k <= l.steps; ++k) {
                        if (resum[l.offset + static_cast<std::size_t>(k)] >
                            resum[l.offset + static_cast<std::size_t>(k_star)])
                            k_star = k;
                    }
                }
                const double m_star = static_cast<double>(
                    resum[l.offset + static_cast<std::size_t>(k_star)] /
                    static_cast<long double>(kept_r));
                ns.push_back(l.step_count);
                errs.push_back(m_star > 0.0 ? std::pow(m_star, inv_p) : 0.0);
            }
            try {
                slopes.push_back(fit_rate(ns, errs).slope);
            } catch (const UsageError&) {
            }
        }
        if (slopes.size() >= 50) {
            std::sort(slopes.begin(), slopes.end());
            const auto quantile = [&](double q) {
                const std::size_t idx = static_cast<std::size_t>(
                    std::ceil(q * static_cast<double>(slopes.size()))) - 1;
                return slopes[std::min(idx, slopes.size() - 1)];
            };
            report.rate_ci_low = quantile(0.025);
            report.rate_ci_high = quantile(0.975);
        }
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

MomentTrace moment_trace(const SdeProblem& problem, long step_count, long path_count,
                         double error_exponent, std::uint64_t seed) {
    problem.validate();
    if (path_count <= 0) throw UsageError("moment_trace: path_count must be positive");
    if (!(error_exponent > 0.0)) throw UsageError("moment_trace: error_exponent must be positive");
    const TamingPolicy policy = TamingPolicy::for_step_count(step_count);
    const long m = std::lround(static_cast<double>(step_count) * problem.horizon);
    if (m <= 0) throw UsageError("moment_trace: horizon too short for the grid");

    MomentTrace trace;
    trace.step_count = step_count;
    trace.error_exponent = error_exponent;
    trace.times.resize(m + 1);

    std::vector<long double> abs_sum(m + 1, 0.0L), abs_sum2(m + 1, 0.0L);
    std::vector<long double> v_sum(m + 1, 0.0L), v_sum2(m + 1, 0.0L);
    std::vector<long> tamed_count(m + 1, 0);

    NoisePath noise;
    TrajectoryRecord rec;
    const double p = error_exponent;
    for (long j = 0; j < path_count; ++j) {
        NoisePath::generate_into(seed, static_cast<std::uint64_t>(j), step_count, m,
                                 problem.dimension, noise);
        simulate_path_into(problem, policy, noise, rec);
        double frozen_v = problem.lyapunov_V(problem.initial_state);
        bool tamed_seen = false;
        for (long k = 0; k <= m; ++k) {
            const double a = std::pow(squared_norm(rec.state(k)), 0.5 * p);
            abs_sum[k] += a;
            abs_sum2[k] += static_cast<long double>(a) * a;
            if (!tamed_seen && rec.tamed_flags[k]) tamed_seen = true;
            if (!tamed_seen) frozen_v = problem.lyapunov_V(rec.state(k));
            const double v = pow_general(frozen_v, p);
            v_sum[k] += v;
            v_sum2[k] += static_cast<long double>(v) * v;
            if (tamed_seen) ++tamed_count[k];
        }
    }

    const double inv_m = 1.0 / static_cast<double>(path_count);
    trace.abs_moment.resize(m + 1);
    trace.abs_moment_se.resize(m + 1);
    trace.v_moment.resize(m + 1);
    trace.v_moment_se.resize(m + 1);
    trace.taming_probability.resize(m + 1);
    trace.taming_probability_se.resize(m + 1);
    for (long k = 0; k <= m; ++k) {
        trace.times[k] = static_cast<double>(k) * policy.dt();
        const double am = static_cast<double>(abs_sum[k]) * inv_m;
        const double am2 = static_cast<double>(abs_sum2[k]) * inv_m;
        trace.abs_moment[k] = am;
        trace.abs_moment_se[k] = std::sqrt(std::max(0.0, (am2 - am * am) * inv_m));
        const double vm = static_cast<double>(v_sum[k]) * inv_m;
        const double vm2 = static_cast<double>(v_sum2[k]) * inv_m;
        trace.v_moment[k] = vm;
        trace.v_moment_se[k] = std::sqrt(std::max(0.0, (vm2 - vm * vm) * inv_m));
        const double f = static_cast<double>(tamed_count[k]) * inv_m;
        trace.taming_probability[k] = f;
        trace.taming_probability_se[k] = std::sqrt(std::max(0.0, f * (1.0 - f) * inv_m));
    }
    return trace;
}

}  // namespace tamed
