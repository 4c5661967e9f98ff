#pragma once

#include <functional>
#include <memory>

#include "tamed/problem.hpp"
#include "tamed/samplers.hpp"
#include "tamed/vec.hpp"

namespace tamed {
namespace particles {

/// N ordered particles on the line, pairwise repulsion of magnitude
/// gap^{-alpha}, confinement derivative Q', noise intensity sqrt(2 sigma / N).
struct ParticleSystemSpec {
    int particle_count = 0;  // N >= 2
    double alpha = 0.0;      // > 1
    double sigma = 0.0;      // > 0
    std::function<double(double)> confinement_derivative;         // Q'
    std::function<double(double)> confinement_second_derivative;  // Q'' (analytic Jacobian)
    double confinement_lipschitz = 0.0;                           // L_Q
    Vec initial_positions;  // strictly increasing
    double lyapunov_constant = 1.0;

    void validate() const;

    static ParticleSystemSpec quadratic_confinement(int n, double alpha, double sigma,
                                                    Vec initial_positions,
                                                    double lyapunov_constant = 1.0);
    static ParticleSystemSpec no_confinement(int n, double alpha, double sigma,
                                             Vec initial_positions,
                                             double lyapunov_constant = 1.0);
};

/// x_k = (k - (N-1)/2) * spacing, k = 0..N-1.
Vec equispaced_positions(int n, double spacing);

/// Minimum consecutive gap of a configuration, capped at 1.
struct GapSummary {
    double min_gap = 0.0;   // min(raw_min, 1)
    int argmin_index = 0;   // 1-based index j of the gap x[j] - x[j-1], in 2..N
    double raw_min = 0.0;   // uncapped
    bool in_domain = false; // raw_min > 0
};

GapSummary min_gap(ConstSpan x);

/// Gaps below this are treated as coincident: direct evaluations raise
/// DomainBoundaryError and the domain predicate reports false, so that
/// gap powers stay within double range.
inline constexpr double kCoincidentGap = 1e-14;

/// (1/N) sum_{i<j} |x_i - x_j|^{1-alpha} / (alpha - 1); blows up as any two
/// particles approach each other.
double interaction_energy(const ParticleSystemSpec& spec, ConstSpan x);

/// Component i: (1/N) [sum_{j<i} (x_i-x_j)^{-alpha} - sum_{j>i} (x_j-x_i)^{-alpha}]
/// - Q'(x_i).
void drift(const ParticleSystemSpec& spec, ConstSpan x, MutSpan out);

/// c + N^{2/(alpha-1)} * U(x)^{(alpha+1)/(alpha-1)}.
double lyapunov(const ParticleSystemSpec& spec, ConstSpan x);

/// c + N^{3/(alpha-1)} * U(x)^{(alpha+2)/(alpha-1)}.
double lyapunov_hat(const ParticleSystemSpec& spec, ConstSpan x);

/// Gradient and Laplacian of the interaction energy (analytic).
void interaction_gradient(const ParticleSystemSpec& spec, ConstSpan x, MutSpan out);
double interaction_laplacian(const ParticleSystemSpec& spec, ConstSpan x);

/// Analytic Jacobian of the drift, row-major N x N.
void drift_jacobian(const ParticleSystemSpec& spec, ConstSpan x, MutSpan out);

/// Exponent s of U in the Lyapunov function, (alpha+1)/(alpha-1); the
/// generator inequality exponent q is derived from (p, s, alpha).
double lyapunov_exponent(double alpha);
/// Exponent of U in the higher-order Lyapunov function, (alpha+2)/(alpha-1).
double lyapunov_hat_exponent(double alpha);

/// Assembles the SdeProblem: d = N, the drift above, strict-ordering domain,
/// V and V_hat as above, beta = sqrt(2 sigma / N), x0 = initial positions.
/// Provides the fused drift+V evaluator and analytic derivative callbacks.
SdeProblem build_problem(const ParticleSystemSpec& spec, double horizon);

/// Stratified sampler over ordered configurations: half the draws have
/// consecutive gaps uniform in [0.25, 1.5] (bulk), half have gaps log-uniform
/// in [min_gap_floor, 1] (near-boundary strata); the whole configuration is
/// shifted uniformly in [-1, 1].
PointSampler config_sampler(const ParticleSystemSpec& spec, double min_gap_floor = 1e-3);

}  // namespace particles
}  // namespace tamed
