#include "tamed/scheme.hpp"

#include <algorithm>
#include <cmath>

#include "tamed/errors.hpp"
#include "tamed/rng.hpp"

namespace tamed {

void SdeProblem::validate() const {
    if (dimension <= 0) throw UsageError("SdeProblem: dimension must be positive");
    if (!drift || !in_domain || !lyapunov_V)
        throw UsageError("SdeProblem: drift, in_domain and lyapunov_V are required");
    if (static_cast<int>(initial_state.size()) != dimension)
        throw UsageError("SdeProblem: initial state has wrong dimension");
    if (!(noise_intensity > 0.0)) throw UsageError("SdeProblem: noise intensity must be positive");
    if (!(horizon > 0.0)) throw UsageError("SdeProblem: horizon must be positive");
    if (!in_domain(initial_state)) throw UsageError("SdeProblem: initial state is outside the domain");
    const double v0 = lyapunov_V(initial_state);
    if (!(v0 >= 0.0)) throw UsageError("SdeProblem: lyapunov_V(x0) must be nonnegative");
}

void TamingPolicy::validate() const {
    if (step_count <= 0) throw UsageError("TamingPolicy: step count must be positive");
    if (threshold != std::sqrt(static_cast<double>(step_count)))
        throw UsageError("TamingPolicy: threshold must equal sqrt(step_count)");
}

void NoisePath::generate_into(std::uint64_t seed, std::uint64_t path_index, long step_count,
                              long total_steps, int dimension, NoisePath& out) {
    if (step_count <= 0 || total_steps < 0 || dimension <= 0)
        throw UsageError("NoisePath: invalid shape");
    out.step_count = step_count;
    out.dimension = dimension;
    out.seed = seed;
    out.path_index = path_index;
    out.increments.resize(static_cast<std::size_t>(total_steps) * dimension);
    const double scale = std::sqrt(1.0 / static_cast<double>(step_count));
    const auto key = philox::key_from_seed(seed);
    double* dst = out.increments.data();
    for (long step = 0; step < total_steps; ++step) {
        for (int pair = 0; 2 * pair < dimension; ++pair) {
            const std::array<std::uint32_t, 4> ctr = {
                static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32),
                static_cast<std::uint32_t>(pair), static_cast<std::uint32_t>(path_index)};
            const auto z = philox::gaussian_pair(ctr, key);
            dst[2 * pair] = scale * z[0];
            if (2 * pair + 1 < dimension) dst[2 * pair + 1] = scale * z[1];
        }
        dst += dimension;
    }
}

NoisePath NoisePath::generate(std::uint64_t seed, std::uint64_t path_index, long step_count,
                              long total_steps, int dimension) {
    NoisePath out;
    generate_into(seed, path_index, step_count, total_steps, dimension, out);
    return out;
}

void coarsen_noise_into(const NoisePath& fine, long factor, NoisePath& out) {
    if (factor <= 0) throw UsageError("coarsen_noise: factor must be positive");
    const long m = fine.total_steps();
    if (fine.step_count % factor != 0 || m % factor != 0)
        throw UsageError("coarsen_noise: factor must divide the step count and the step total");
    const int d = fine.dimension;
    out.step_count = fine.step_count / factor;
    out.dimension = d;
    out.seed = fine.seed;
    out.path_index = fine.path_index;
    out.increments.assign(static_cast<std::size_t>(m / factor) * d, 0.0);
    const double* src = fine.increments.data();
    double* dst = out.increments.data();
    for (long k = 0; k < m; ++k) {
        double* block = dst + static_cast<std::size_t>(k / factor) * d;
        for (int i = 0; i < d; ++i) block[i] += src[i];
        src += d;
    }
}

NoisePath coarsen_noise(const NoisePath& fine, long factor) {
    NoisePath out;
    coarsen_noise_into(fine, factor, out);
    return out;
}

bool tamed_drift(const SdeProblem& problem, const TamingPolicy& policy, ConstSpan x,
                 MutSpan out) {
    if (static_cast<int>(x.size()) != problem.dimension ||
        static_cast<int>(out.size()) != problem.dimension)
        throw UsageError("tamed_drift: dimension mismatch");
    const auto tame = [&out] {
        std::fill(out.begin(), out.end(), 0.0);
        return true;
    };
    if (!problem.in_domain(x)) return tame();

    double v;
    if (problem.drift_and_lyapunov) {
        v = problem.drift_and_lyapunov(x, out);
        if (!std::isfinite(v))
            throw ComputationalDomainError(problem.label + ": non-finite Lyapunov value inside the domain");
        if (v > policy.threshold) return tame();
    } else {
        v = problem.lyapunov_V(x);
        if (!std::isfinite(v))
            throw ComputationalDomainError(problem.label + ": non-finite Lyapunov value inside the domain");
        if (v > policy.threshold) return tame();
        problem.drift(x, out);
    }
    if (!all_finite(out))
        throw ComputationalDomainError(problem.label + ": non-finite drift inside the domain");
    if (euclidean_norm(out) > policy.threshold) return tame();
    return false;
}

void euler_step(ConstSpan x, ConstSpan drift_value, double dt, ConstSpan noise_increment,
                double beta, MutSpan out) {
    const std::size_t d = x.size();
    if (drift_value.size() != d || noise_increment.size() != d || out.size() != d)
        throw UsageError("euler_step: dimension mismatch");
    for (std::size_t i = 0; i < d; ++i)
        out[i] = x[i] + dt * drift_value[i] + beta * noise_increment[i];
}

void simulate_path_into(const SdeProblem& problem, const TamingPolicy& policy,
                        const NoisePath& noise, TrajectoryRecord& out) {
    if (noise.step_count != policy.step_count)
        throw UsageError("simulate_path: noise grid does not match the policy step count");
    if (noise.dimension != problem.dimension)
        throw UsageError("simulate_path: noise dimension does not match the problem");
    const long n = policy.step_count;
    const long m = std::lround(static_cast<double>(n) * problem.horizon);
    if (noise.total_steps() < m)
        throw UsageError("simulate_path: noise path does not cover the horizon");

    const int d = problem.dimension;
    const double dt = policy.dt();
    const double beta = problem.noise_intensity;

    out.step_count = n;
    out.dimension = d;
    out.seed = noise.seed;
    out.times.resize(m + 1);
    out.states.resize(static_cast<std::size_t>(m + 1) * d);
    out.tamed_flags.assign(m + 1, 0);
    out.first_taming_time.reset();

    std::copy(problem.initial_state.begin(), problem.initial_state.end(), out.states.begin());
    Vec drift_buf(d);

    for (long k = 0; k <= m; ++k) {
        out.times[k] = static_cast<double>(k) * dt;
        MutSpan x(out.states.data() + static_cast<std::size_t>(k) * d, d);
        const bool tamed = tamed_drift(problem, policy, x, drift_buf);
        out.tamed_flags[k] = tamed ? 1 : 0;
        if (tamed && !out.first_taming_time) out.first_taming_time = out.times[k];
        if (k == m) break;
        MutSpan next(out.states.data() + static_cast<std::size_t>(k + 1) * d, d);
        euler_step(x, drift_buf, dt, noise.increment(k), beta, next);
        if (!all_finite(next))
            throw NonFiniteStateError(problem.label + ": state became non-finite at step " +
                                      std::to_string(k + 1));
    }
}

TrajectoryRecord simulate_path(const SdeProblem& problem, const TamingPolicy& policy,
                               const NoisePath& noise) {
    TrajectoryRecord out;
    simulate_path_into(problem, policy, noise, out);
    return out;
}

}  // namespace tamed
