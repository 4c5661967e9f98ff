#include <doctest.h>

#include <cmath>

#include "tamed/errors.hpp"
#include "tamed/particles.hpp"
#include "tamed/rng.hpp"
#include "tamed/scheme.hpp"

using namespace tamed;
using namespace tamed::particles;

namespace {

ParticleSystemSpec free_spec(int n, double alpha) {
    return ParticleSystemSpec::no_confinement(n, alpha, 1.0, equispaced_positions(n, 1.0));
}

ParticleSystemSpec confined_spec(int n, double alpha) {
    return ParticleSystemSpec::quadratic_confinement(n, alpha, 1.0, equispaced_positions(n, 1.0));
}

/// Ordered configuration with consecutive gaps log-uniform in [gap_lo, 1] and
/// a uniform shift: the regime in which the min-gap envelopes are asserted.
Vec random_config(CounterRng& rng, int n, double gap_lo = 1e-3) {
    Vec x(n);
    double pos = rng.uniform(-1.0, 1.0);
    x[0] = pos;
    for (int i = 1; i < n; ++i) {
        pos += std::exp(rng.uniform(std::log(gap_lo), 0.0));
        x[i] = pos;
    }
    return x;
}

double relative_gap(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

TEST_CASE("interaction energy matches hand evaluations") {
    CHECK(interaction_energy(free_spec(2, 2.0), Vec{0.0, 1.0}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(interaction_energy(free_spec(3, 2.0), Vec{0.0, 1.0, 2.0}) ==
          doctest::Approx(5.0 / 6.0).epsilon(1e-15));
    // Boundary blow-up: U ~ t^{-1} / 2 for the pair (0, t).
    const auto spec = free_spec(2, 2.0);
    double prev = interaction_energy(spec, Vec{0.0, 1.0});
    for (double t : {1e-1, 1e-3, 1e-6, 1e-9}) {
        const double u = interaction_energy(spec, Vec{0.0, t});
        CHECK(u == doctest::Approx(0.5 / t).epsilon(1e-12));
        CHECK(u > prev);
        prev = u;
    }
}

TEST_CASE("coincident or inverted pairs raise domain-boundary errors") {
    const auto spec = free_spec(2, 2.0);
    CHECK_THROWS_AS(interaction_energy(spec, Vec{0.0, 0.0}), DomainBoundaryError);
    CHECK_THROWS_AS(interaction_energy(spec, Vec{1.0, 0.0}), DomainBoundaryError);
    CHECK_THROWS_AS(interaction_energy(spec, Vec{0.0, 0.5e-14}), DomainBoundaryError);
    Vec out(2);
    CHECK_THROWS_AS(drift(spec, Vec{0.0, 0.0}, out), DomainBoundaryError);
    CHECK_THROWS_AS(lyapunov(spec, Vec{0.0, 0.0}), DomainBoundaryError);
}

TEST_CASE("drift matches hand evaluations") {
    Vec out(2);
    drift(free_spec(2, 2.0), Vec{0.0, 1.0}, out);
    CHECK(out[0] == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(out[1] == doctest::Approx(0.5).epsilon(1e-15));

    Vec out3(3);
    drift(free_spec(3, 2.0), Vec{0.0, 1.0, 2.0}, out3);
    CHECK(out3[1] == doctest::Approx(0.0).epsilon(1e-15));

    // Reflection antisymmetry with Q'(x) = x: b(-a, a) = -reverse(b(-a, a)).
    const auto spec = confined_spec(2, 2.0);
    Vec b(2);
    drift(spec, Vec{-0.7, 0.7}, b);
    CHECK(b[0] == doctest::Approx(-b[1]).epsilon(1e-14));
}

TEST_CASE("Lyapunov functions match hand evaluations") {
    // N = 2, alpha = 3: U = 1/4, V = 1 + 2 * (1/4)^2 = 1.125.
    CHECK(lyapunov(free_spec(2, 3.0), Vec{0.0, 1.0}) == doctest::Approx(1.125).epsilon(1e-15));

    // Widening every gap decreases V.
    CounterRng rng(31, 0);
    const auto spec = free_spec(5, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec x = random_config(rng, 5);
        Vec wide(x);
        for (auto& v : wide) v *= 1.5;
        CHECK(lyapunov(spec, wide) <= lyapunov(spec, x));
    }

    // V_hat is bounded below by the additive constant.
    for (int trial = 0; trial < 50; ++trial) {
        const Vec x = random_config(rng, 5);
        CHECK(lyapunov_hat(spec, x) >= spec.lyapunov_constant);
    }
}

TEST_CASE("min gap summary") {
    const auto a = min_gap(Vec{0.0, 0.5, 2.0});
    CHECK(a.raw_min == 0.5);
    CHECK(a.min_gap == 0.5);
    CHECK(a.argmin_index == 2);
    CHECK(a.in_domain);

    const auto b = min_gap(Vec{0.0, 3.0, 7.0});
    CHECK(b.raw_min == 3.0);
    CHECK(b.min_gap == 1.0);

    const auto c = min_gap(Vec{0.0, 0.0});
    CHECK(c.raw_min == 0.0);
    CHECK_FALSE(c.in_domain);

    const auto d = min_gap(Vec{0.0, 1.0, 0.5});
    CHECK(d.raw_min == -0.5);
    CHECK_FALSE(d.in_domain);
    CHECK(d.argmin_index == 3);
}

TEST_CASE("build_problem wires the system together") {
    auto spec = confined_spec(4, 2.0);
    const auto problem = build_problem(spec, 1.0);
    CHECK(problem.dimension == 4);
    CHECK(problem.noise_intensity == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(problem.in_domain(Vec{1.0, 2.0, 3.0, 4.0}));
    CHECK_FALSE(problem.in_domain(Vec{1.0, 3.0, 2.0, 4.0}));
    Vec b(4);
    problem.drift(problem.initial_state, b);
    CHECK(all_finite(b));

    // The fused evaluator agrees bitwise with the split evaluations.
    CounterRng rng(17, 0);
    Vec fused_b(4), split_b(4);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec x = random_config(rng, 4);
        const double v_fused = problem.drift_and_lyapunov(x, fused_b);
        problem.drift(x, split_b);
        CHECK(v_fused == problem.lyapunov_V(x));
        for (int i = 0; i < 4; ++i) CHECK(fused_b[i] == split_b[i]);
    }
}

TEST_CASE("spec validation rejects bad input") {
    CHECK_THROWS_AS(ParticleSystemSpec::quadratic_confinement(1, 2.0, 1.0, Vec{0.0}), UsageError);
    CHECK_THROWS_AS(ParticleSystemSpec::quadratic_confinement(2, 1.0, 1.0, Vec{0.0, 1.0}),
                    UsageError);
    CHECK_THROWS_AS(ParticleSystemSpec::quadratic_confinement(2, 2.0, 0.0, Vec{0.0, 1.0}),
                    UsageError);
    CHECK_THROWS_AS(ParticleSystemSpec::quadratic_confinement(2, 2.0, 1.0, Vec{1.0, 0.0}),
                    UsageError);
    CHECK_THROWS_AS(equispaced_positions(1, 1.0), UsageError);
    CHECK(equispaced_positions(4, 1.0) == Vec{-1.5, -0.5, 0.5, 1.5});
}

TEST_CASE("interaction gradient matches central differences") {
    // Oracle: central differences of the interaction energy with step
    // 1e-6 * l(x); the drift's interaction part must equal -grad U.
    for (int n : {2, 3, 5, 8}) {
        for (double alpha : {1.5, 2.0, 3.0}) {
            const auto spec = free_spec(n, alpha);
            CounterRng rng(1000 + n + static_cast<int>(10 * alpha), 0);
            for (int trial = 0; trial < 100; ++trial) {
                const Vec x = random_config(rng, n);
                const double h = 1e-6 * min_gap(x).min_gap;
                Vec grad(n), fd(n), xp(x), xm(x);
                interaction_gradient(spec, x, grad);
                for (int i = 0; i < n; ++i) {
                    xp[i] = x[i] + h;
                    xm[i] = x[i] - h;
                    fd[i] = (interaction_energy(spec, xp) - interaction_energy(spec, xm)) /
                            (2.0 * h);
                    xp[i] = x[i];
                    xm[i] = x[i];
                }
                double num = 0.0, den = 0.0;
                for (int i = 0; i < n; ++i) {
                    num = std::max(num, std::abs(fd[i] - grad[i]));
                    den = std::max(den, std::abs(grad[i]));
                }
                CHECK(num / den <= 1e-5);

                // The drift is -grad U minus the confinement part (absent here).
                Vec b(n);
                drift(spec, x, b);
                for (int i = 0; i < n; ++i) CHECK(b[i] == -grad[i]);
            }
        }
    }
}

TEST_CASE("drift jacobian matches central differences") {
    for (int n : {2, 3, 5, 8}) {
        for (double alpha : {1.5, 2.0, 3.0}) {
            const auto spec = confined_spec(n, alpha);
            CounterRng rng(2000 + n + static_cast<int>(10 * alpha), 0);
            Vec jac(static_cast<std::size_t>(n) * n), bp(n), bm(n);
            for (int trial = 0; trial < 100; ++trial) {
                const Vec x = random_config(rng, n);
                const double h = 1e-6 * min_gap(x).min_gap;
                drift_jacobian(spec, x, jac);
                Vec xp(x), xm(x);
                double num = 0.0, den = 0.0;
                for (int j = 0; j < n; ++j) {
                    xp[j] = x[j] + h;
                    xm[j] = x[j] - h;
                    drift(spec, xp, bp);
                    drift(spec, xm, bm);
                    for (int i = 0; i < n; ++i) {
                        const double fd = (bp[i] - bm[i]) / (2.0 * h);
                        num = std::max(num, std::abs(fd - jac[static_cast<std::size_t>(i) * n + j]));
                        den = std::max(den, std::abs(jac[static_cast<std::size_t>(i) * n + j]));
                    }
                    xp[j] = x[j];
                    xm[j] = x[j];
                }
                CHECK(num / den <= 1e-5);
            }
        }
    }
}

TEST_CASE("analytic Lyapunov gradient and Laplacian match central differences") {
    for (int n : {2, 3, 5}) {
        for (double alpha : {1.5, 2.0, 3.0}) {
            const auto problem = build_problem(free_spec(n, alpha), 1.0);
            CounterRng rng(3000 + n + static_cast<int>(10 * alpha), 0);
            Vec grad(n);
            for (int trial = 0; trial < 60; ++trial) {
                // Gaps bounded away from the floor keep the second difference
                // of V well conditioned.
                const Vec x = random_config(rng, n, 1e-2);
                const double h = 1e-5 * min_gap(x).min_gap;
                problem.lyapunov_gradient(x, grad);
                Vec xp(x), xm(x);
                double lap_fd = 0.0;
                const double center = problem.lyapunov_V(x);
                for (int i = 0; i < n; ++i) {
                    xp[i] = x[i] + h;
                    xm[i] = x[i] - h;
                    const double fp = problem.lyapunov_V(xp);
                    const double fm = problem.lyapunov_V(xm);
                    CHECK(relative_gap((fp - fm) / (2.0 * h), grad[i]) <= 1e-5);
                    lap_fd += (fp - 2.0 * center + fm) / (h * h);
                    xp[i] = x[i];
                    xm[i] = x[i];
                }
                CHECK(relative_gap(lap_fd, problem.lyapunov_laplacian(x)) <= 1e-4);
            }
        }
    }
}

TEST_CASE("min-gap envelopes for the interaction energy and its gradient") {
    // Constants frozen from the brute-force sweep over 10^4 configurations per
    // (N, alpha) cell with gaps log-uniform in [1e-3, 1]: the energy sandwich
    // uses the exact combinatorial bounds (lower: the minimal pair alone;
    // upper: (pi^2/6 + 1) N covers every cell up to N = 8), the gradient band
    // uses kappa1 = 1 (split-vector bound, exact) and kappa2 = 3 (ell_1 bound).
    const double upper_const = M_PI * M_PI / 6.0 + 1.0;
    for (int n : {2, 3, 5, 8}) {
        for (double alpha : {1.5, 2.0, 3.0}) {
            const auto spec = free_spec(n, alpha);
            CounterRng rng(4000 + n + static_cast<int>(10 * alpha), 0);
            Vec grad(n);
            for (int trial = 0; trial < 10000; ++trial) {
                const Vec x = random_config(rng, n);
                const double l = min_gap(x).min_gap;
                const double u = interaction_energy(spec, x);
                const double l_pow = std::pow(l, 1.0 - alpha);
                CHECK(u >= l_pow / ((alpha - 1.0) * n * n) * (1.0 - 1e-12));
                CHECK(u <= upper_const * n * l_pow / (alpha - 1.0) * (1.0 + 1e-12));

                interaction_gradient(spec, x, grad);
                const double g = euclidean_norm(grad);
                const double l_pow_a = std::pow(l, -alpha);
                CHECK(g >= l_pow_a / std::pow(static_cast<double>(n), 1.5) * (1.0 - 1e-12));
                CHECK(g <= 3.0 * l_pow_a * (1.0 + 1e-12));
            }
        }
    }
}

TEST_CASE("one-sided Lipschitz bound holds on sampled pairs") {
    for (int n : {2, 3, 5, 8}) {
        for (double alpha : {1.5, 2.0, 3.0}) {
            const auto spec = confined_spec(n, alpha);
            CounterRng rng(5000 + n + static_cast<int>(10 * alpha), 0);
            Vec bx(n), by(n);
            for (int trial = 0; trial < 2000; ++trial) {
                const Vec x = random_config(rng, n);
                const Vec y = random_config(rng, n);
                drift(spec, x, bx);
                drift(spec, y, by);
                double inner = 0.0, dist_sq = 0.0;
                for (int i = 0; i < n; ++i) {
                    inner += (bx[i] - by[i]) * (x[i] - y[i]);
                    dist_sq += (x[i] - y[i]) * (x[i] - y[i]);
                }
                CHECK(inner <= spec.confinement_lipschitz * dist_sq * (1.0 + 1e-9) + 1e-12);
            }
        }
    }
}

TEST_CASE("untamed trajectories preserve the particle ordering") {
    // Low noise keeps V(X_t) under the threshold, so most paths never tame;
    // every untamed path must stay strictly ordered at all grid points.
    const auto spec = ParticleSystemSpec::quadratic_confinement(4, 2.0, 0.05,
                                                                equispaced_positions(4, 1.0));
    const auto problem = build_problem(spec, 1.0);
    const long n = 1 << 10;
    const auto policy = TamingPolicy::for_step_count(n);
    int untamed_paths = 0;
    for (std::uint64_t path = 0; path < 20; ++path) {
        const auto noise = NoisePath::generate(60601, path, n, n, 4);
        const auto rec = simulate_path(problem, policy, noise);
        if (rec.first_taming_time.has_value()) continue;
        ++untamed_paths;
        for (long k = 0; k <= rec.steps(); ++k) {
            const auto x = rec.state(k);
            for (int i = 1; i < 4; ++i) CHECK(x[i] > x[i - 1]);
        }
    }
    CHECK(untamed_paths >= 15);
}
