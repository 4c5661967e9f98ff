#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tamed/problem.hpp"
#include "tamed/vec.hpp"

namespace tamed {

/// Brownian increments on the grid {0, 1/n, 2/n, ...}: total_steps vectors of
/// dimension d, each component sqrt(1/n) * N(0,1), addressed by
/// (seed, path_index, step, component).
struct NoisePath {
    long step_count = 0;  // n: grid density per unit time
    int dimension = 0;
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;
    std::vector<double> increments;  // total_steps x dimension, row-major

    long total_steps() const {
        return static_cast<long>(increments.size()) / (dimension > 0 ? dimension : 1);
    }
    ConstSpan increment(long k) const {
        return ConstSpan(increments.data() + static_cast<std::size_t>(k) * dimension,
                         static_cast<std::size_t>(dimension));
    }

    static NoisePath generate(std::uint64_t seed, std::uint64_t path_index, long step_count,
                              long total_steps, int dimension);
    static void generate_into(std::uint64_t seed, std::uint64_t path_index, long step_count,
                              long total_steps, int dimension, NoisePath& out);
};

/// Sums blocks of `factor` fine increments into exact Brownian increments of
/// the coarser grid (variance telescopes). `factor` must divide both the grid
/// density and the stored step total.
NoisePath coarsen_noise(const NoisePath& fine, long factor);
void coarsen_noise_into(const NoisePath& fine, long factor, NoisePath& out);

/// One simulated trajectory on the grid k/n, k = 0..m.
struct TrajectoryRecord {
    long step_count = 0;
    int dimension = 0;
    std::uint64_t seed = 0;
    std::vector<double> times;         // m+1
    std::vector<double> states;        // (m+1) x dimension, row-major
    std::vector<std::uint8_t> tamed_flags;  // m+1: taming indicator zeroed the drift here
    std::optional<double> first_taming_time;

    long steps() const { return static_cast<long>(times.size()) - 1; }
    ConstSpan state(long k) const {
        return ConstSpan(states.data() + static_cast<std::size_t>(k) * dimension,
                         static_cast<std::size_t>(dimension));
    }
};

/// Evaluates the tamed coefficient b_n at x: writes b(x) into `out` and
/// returns false when x is in the domain with V(x) <= sqrt(n) and
/// |b(x)| <= sqrt(n); otherwise writes the zero vector and returns true.
/// Evaluation order: domain test, then V, then |b|, short-circuiting, so
/// V and b are never evaluated outside D.
///
/// Throws ComputationalDomainError when V or b is non-finite inside D.
bool tamed_drift(const SdeProblem& problem, const TamingPolicy& policy, ConstSpan x,
                 MutSpan out);

/// out = x + dt * drift_value + beta * noise_increment. Aliasing out == x is allowed.
void euler_step(ConstSpan x, ConstSpan drift_value, double dt, ConstSpan noise_increment,
                double beta, MutSpan out);

/// Iterates the explicit Euler update with the tamed coefficient evaluated at
/// the left grid point, over m = round(n * T) steps. The path continues past
/// taming events (zero drift, possibly outside D) and is never projected.
///
/// Throws NonFiniteStateError if a state stops being finite.
TrajectoryRecord simulate_path(const SdeProblem& problem, const TamingPolicy& policy,
                               const NoisePath& noise);
void simulate_path_into(const SdeProblem& problem, const TamingPolicy& policy,
                        const NoisePath& noise, TrajectoryRecord& out);

}  // namespace tamed
