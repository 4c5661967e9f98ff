// Calibration sweep for the particle-system assumption checks: prints the
// observed worst ratios (with rhs constant 1) and the estimated generator
// a_p per (N, alpha) cell. The frozen values in calibration.hpp and
// calibration.cpp are these numbers rounded up with margin.

#include <cstdio>
#include <cstdlib>

#include "tamed/analysis.hpp"
#include "tamed/particles.hpp"

using namespace tamed;

int main(int argc, char** argv) {
    const long count = argc > 1 ? std::atol(argv[1]) : 100000;
    const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 90210;
    const double min_gap_floor = 1e-3;

    std::printf("samples per cell: %ld, seed: %llu, min gap floor: %g\n", count,
                static_cast<unsigned long long>(seed), min_gap_floor);
    std::printf("%3s %5s | %12s %12s %12s %14s\n", "N", "alpha", "lipschitz", "higher_ord",
                "monotone", "generator_a2");

    for (double alpha : {1.5, 2.0, 3.0}) {
        for (int n : {2, 3, 5, 8}) {
            const auto spec = particles::ParticleSystemSpec::quadratic_confinement(
                n, alpha, 1.0, particles::equispaced_positions(n, 1.0));
            const SdeProblem problem = particles::build_problem(spec, 1.0);
            const PointSampler points = particles::config_sampler(spec, min_gap_floor);
            const PairSampler pairs = mixed_pairs(
                points, 0.25, [](ConstSpan x) { return 1e-4 * particles::min_gap(x).min_gap; });

            CheckOptions options;
            options.count = count;
            options.seed = seed;
            options.fd_scale = [](ConstSpan x) { return particles::min_gap(x).min_gap; };

            const auto lip = check_lyapunov_lipschitz(problem, pairs, options);
            const auto high = check_higher_order(problem, problem.drift_jacobian, pairs, options);
            const auto mono = check_monotonicity(problem, spec.confinement_lipschitz, pairs, options);

            GeneratorParams params;
            params.p = 2.0;
            params.q_p = generator_q_exponent(params.p, particles::lyapunov_exponent(alpha), alpha);
            const auto gen = check_generator(problem, params, points, options, true);

            std::printf("%3d %5.2f | %12.5g %12.5g %12.5g %14.6g\n", n, alpha, lip.worst_ratio,
                        high.worst_ratio, mono.worst_ratio, gen.estimated_constant);
        }
    }
    return 0;
}
