#include "tamed/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tamed/errors.hpp"

namespace tamed {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint32_t stream_of(Condition c) { return static_cast<std::uint32_t>(c) + 1; }

void require_in_domain(const SdeProblem& problem, ConstSpan x, const char* who) {
    if (!problem.in_domain(x))
        throw UsageError(std::string(who) + ": sampler yielded an out-of-domain point");
}

/// Central-difference Jacobian of the drift, step h per coordinate.
void fd_jacobian(const SdeProblem& problem, ConstSpan x, double h, MutSpan out) {
    const int d = problem.dimension;
    Vec xp(x.begin(), x.end()), xm(x.begin(), x.end());
    Vec bp(d), bm(d);
    for (int j = 0; j < d; ++j) {
        xp[j] = x[j] + h;
        xm[j] = x[j] - h;
        problem.drift(xp, bp);
        problem.drift(xm, bm);
        for (int i = 0; i < d; ++i)
            out[static_cast<std::size_t>(i) * d + j] = (bp[i] - bm[i]) / (2.0 * h);
        xp[j] = x[j];
        xm[j] = x[j];
    }
}

}  // namespace

std::string condition_name(Condition c) {
    switch (c) {
        case Condition::LyapunovLipschitz: return "lyapunov_lipschitz";
        case Condition::HigherOrder: return "higher_order";
        case Condition::Generator: return "generator";
        case Condition::Monotonicity: return "monotonicity";
        case Condition::GradientPowerBound: return "gradient_power_bound";
    }
    return "unknown";
}

Condition condition_from_name(const std::string& name) {
    if (name == "lyapunov_lipschitz") return Condition::LyapunovLipschitz;
    if (name == "higher_order") return Condition::HigherOrder;
    if (name == "generator") return Condition::Generator;
    if (name == "monotonicity") return Condition::Monotonicity;
    if (name == "gradient_power_bound") return Condition::GradientPowerBound;
    throw UsageError("unknown condition name: " + name);
}

void GeneratorParams::validate() const {
    if (!(p >= 1.0)) throw UsageError("GeneratorParams: p must be at least 1");
    if (!(q_p > 1.0)) throw UsageError("GeneratorParams: q_p must exceed 1");
    if (!(a_p > 0.0)) throw UsageError("GeneratorParams: a_p must be positive");
    if (b_p < 0.0) throw UsageError("GeneratorParams: b_p must be nonnegative");
}

double generator_q_exponent(double p, double s, double alpha) {
    if (!(p * s > 1.0)) throw UsageError("generator_q_exponent: requires p * s > 1");
    if (!(alpha > 1.0)) throw UsageError("generator_q_exponent: requires alpha > 1");
    const double base = (p * s - 1.0) * (alpha - 1.0);
    return (base + 1.0 + alpha) / (base + alpha);
}

double envelope_max(double a, double b, double p, double q) {
    if (!(p > q && q > 0.0)) throw UsageError("envelope_max: requires p > q > 0");
    if (!(a > 0.0 && b > 0.0)) throw UsageError("envelope_max: requires a, b > 0");
    return b * std::pow(b * q / (a * p), q / (p - q));
}

AssumptionReport check_lyapunov_lipschitz(const SdeProblem& problem, const PairSampler& pairs,
                                          const CheckOptions& options) {
    AssumptionReport report;
    report.condition = Condition::LyapunovLipschitz;
    report.tolerance = options.tolerance;
    report.rhs_constant = options.rhs_constant;
    report.seed = options.seed;
    report.estimated_constant = kNaN;
    report.fd_cross_error = kNaN;
    report.worst_ratio = -std::numeric_limits<double>::infinity();

    CounterRng rng(options.seed, stream_of(report.condition));
    Vec x, y, bx(problem.dimension), by(problem.dimension);
    for (long i = 0; i < options.count; ++i) {
        pairs(rng, x, y);
        require_in_domain(problem, x, "check_lyapunov_lipschitz");
        require_in_domain(problem, y, "check_lyapunov_lipschitz");
        const double dist = std::sqrt(squared_distance(x, y));
        if (dist == 0.0) continue;
        problem.drift(x, bx);
        problem.drift(y, by);
        const double lhs = std::sqrt(squared_distance(bx, by));
        const double rhs =
            options.rhs_constant * (problem.lyapunov_V(x) + problem.lyapunov_V(y)) * dist;
        const double ratio = lhs / rhs;
        if (ratio > report.worst_ratio) {
            report.worst_ratio = ratio;
            report.worst_sample = {x, y};
        }
        ++report.samples_tested;
    }
    report.passed = report.worst_ratio <= 1.0 + options.tolerance;
    return report;
}

AssumptionReport check_higher_order(const SdeProblem& problem, const JacobianFn& jacobian,
                                    const PairSampler& pairs, const CheckOptions& options) {
    const JacobianFn& jac = jacobian ? jacobian : problem.drift_jacobian;
    if (!jac) throw UsageError("check_higher_order: an analytic drift Jacobian is required");
    if (!problem.lyapunov_V_hat)
        throw UsageError("check_higher_order: the problem does not define V_hat");

    AssumptionReport report;
    report.condition = Condition::HigherOrder;
    report.tolerance = options.tolerance;
    report.rhs_constant = options.rhs_constant;
    report.seed = options.seed;
    report.estimated_constant = kNaN;
    report.fd_cross_error = 0.0;
    report.worst_ratio = -std::numeric_limits<double>::infinity();

    const int d = problem.dimension;
    CounterRng rng(options.seed, stream_of(report.condition));
    Vec x, y, bx(d), by(d), jx(static_cast<std::size_t>(d) * d), jfd(static_cast<std::size_t>(d) * d);
    const long cross_check_stride = std::max<long>(1, options.count / 32);

    for (long i = 0; i < options.count; ++i) {
        pairs(rng, x, y);
        require_in_domain(problem, x, "check_higher_order");
        require_in_domain(problem, y, "check_higher_order");
        const double dist_sq = squared_distance(x, y);
        if (dist_sq == 0.0) continue;
        problem.drift(x, bx);
        problem.drift(y, by);
        jac(x, jx);

        double lhs_sq = 0.0;
        for (int r = 0; r < d; ++r) {
            double v = bx[r] - by[r];
            for (int c = 0; c < d; ++c) v -= jx[static_cast<std::size_t>(r) * d + c] * (x[c] - y[c]);
            lhs_sq += v * v;
        }
        const double rhs = options.rhs_constant *
                           (1.0 + problem.lyapunov_V_hat(x) + problem.lyapunov_V_hat(y)) * dist_sq;
        const double ratio = std::sqrt(lhs_sq) / rhs;
        if (ratio > report.worst_ratio) {
            report.worst_ratio = ratio;
            report.worst_sample = {x, y};
        }

        if (i % cross_check_stride == 0) {
            // Step tied to the scale on which the drift varies at x.
            const double scale = options.fd_scale ? options.fd_scale(x) : 1.0;
            fd_jacobian(problem, x, 1e-5 * scale, jfd);
            double num = 0.0, den = 0.0;
            for (std::size_t k = 0; k < jx.size(); ++k) {
                num = std::max(num, std::abs(jx[k] - jfd[k]));
                den = std::max(den, std::abs(jx[k]));
            }
            if (den > 0.0) report.fd_cross_error = std::max(report.fd_cross_error, num / den);
        }
        ++report.samples_tested;
    }
    report.passed =
        report.worst_ratio <= 1.0 + options.tolerance && report.fd_cross_error <= 1e-5;
    return report;
}

AssumptionReport check_monotonicity(const SdeProblem& problem, double mu, const PairSampler& pairs,
                                    const CheckOptions& options) {
    if (mu < 0.0) throw UsageError("check_monotonicity: mu must be nonnegative");
    AssumptionReport report;
    report.condition = Condition::Monotonicity;
    report.tolerance = options.tolerance;
    report.rhs_constant = std::max(mu, 1e-12);  // floor so mu = 0 asserts lhs <= 0
    report.seed = options.seed;
    report.estimated_constant = kNaN;
    report.fd_cross_error = kNaN;
    report.worst_ratio = -std::numeric_limits<double>::infinity();

    CounterRng rng(options.seed, stream_of(report.condition));
    Vec x, y, bx(problem.dimension), by(problem.dimension);
    for (long i = 0; i < options.count; ++i) {
        pairs(rng, x, y);
        require_in_domain(problem, x, "check_monotonicity");
        require_in_domain(problem, y, "check_monotonicity");
        const double dist_sq = squared_distance(x, y);
        if (dist_sq == 0.0) continue;
        problem.drift(x, bx);
        problem.drift(y, by);
        double inner = 0.0;
        for (int k = 0; k < problem.dimension; ++k) inner += (bx[k] - by[k]) * (x[k] - y[k]);
        const double ratio = inner / (report.rhs_constant * dist_sq);
        if (ratio > report.worst_ratio) {
            report.worst_ratio = ratio;
            report.worst_sample = {x, y};
        }
        ++report.samples_tested;
    }
    report.passed = report.worst_ratio <= 1.0 + options.tolerance;
    return report;
}

AssumptionReport check_gradient_power_bound(const SdeProblem& problem, double bound_constant,
                                            double power, const PointSampler& points,
                                            const CheckOptions& options) {
    if (!(bound_constant > 0.0 && power > 0.0))
        throw UsageError("check_gradient_power_bound: constants must be positive");
    AssumptionReport report;
    report.condition = Condition::GradientPowerBound;
    report.tolerance = options.tolerance;
    report.rhs_constant = options.rhs_constant;
    report.seed = options.seed;
    report.estimated_constant = kNaN;
    report.fd_cross_error = kNaN;
    report.worst_ratio = -std::numeric_limits<double>::infinity();

    CounterRng rng(options.seed, stream_of(report.condition));
    Vec x, grad(problem.dimension);
    for (long i = 0; i < options.count; ++i) {
        points(rng, x);
        require_in_domain(problem, x, "check_gradient_power_bound");
        const double v = problem.lyapunov_V(x);
        if (problem.lyapunov_gradient) {
            problem.lyapunov_gradient(x, grad);
        } else {
            Vec xp(x), xm(x);
            const double h = 1e-6 * (options.fd_scale ? options.fd_scale(x) : 1.0);
            for (int k = 0; k < problem.dimension; ++k) {
                xp[k] = x[k] + h;
                xm[k] = x[k] - h;
                grad[k] = (problem.lyapunov_V(xp) - problem.lyapunov_V(xm)) / (2.0 * h);
                xp[k] = x[k];
                xm[k] = x[k];
            }
        }
        const double lhs = euclidean_norm(grad);
        const double rhs =
            options.rhs_constant * bound_constant * (1.0 + pow_general(v, power));
        const double ratio = lhs / rhs;
        if (ratio > report.worst_ratio) {
            report.worst_ratio = ratio;
            report.worst_sample = {x};
        }
        ++report.samples_tested;
    }
    report.passed = report.worst_ratio <= 1.0 + options.tolerance;
    return report;
}

double generator_lhs(const SdeProblem& problem, const GeneratorParams& params, ConstSpan x,
                     double fd_step) {
    params.validate();
    if (!problem.in_domain(x)) throw UsageError("generator_lhs: x is outside the domain");
    const int d = problem.dimension;
    const double p = params.p;

    Vec grad_vp(d);
    double lap_vp = 0.0;
    if (problem.lyapunov_gradient && problem.lyapunov_laplacian) {
        const double v = problem.lyapunov_V(x);
        Vec grad_v(d);
        problem.lyapunov_gradient(x, grad_v);
        const double lap_v = problem.lyapunov_laplacian(x);
        const double vpm1 = pow_general(v, p - 1.0);
        for (int i = 0; i < d; ++i) grad_vp[i] = p * vpm1 * grad_v[i];
        lap_vp = p * (p - 1.0) * pow_general(v, p - 2.0) * squared_norm(grad_v) + p * vpm1 * lap_v;
    } else {
        const auto vp = [&](ConstSpan z) { return pow_general(problem.lyapunov_V(z), p); };
        double h = fd_step;
        Vec xp(x.begin(), x.end()), xm(x.begin(), x.end());
        bool stencil_ok = false;
        for (int attempt = 0; attempt < 8 && !stencil_ok; ++attempt, h *= 0.5) {
            stencil_ok = true;
            for (int i = 0; i < d && stencil_ok; ++i) {
                xp[i] = x[i] + h;
                xm[i] = x[i] - h;
                stencil_ok = problem.in_domain(xp) && problem.in_domain(xm);
                xp[i] = x[i];
                xm[i] = x[i];
            }
            if (!stencil_ok) continue;
            const double center = vp(x);
            lap_vp = 0.0;
            for (int i = 0; i < d; ++i) {
                xp[i] = x[i] + h;
                xm[i] = x[i] - h;
                const double fp = vp(xp), fm = vp(xm);
                grad_vp[i] = (fp - fm) / (2.0 * h);
                lap_vp += (fp - 2.0 * center + fm) / (h * h);
                xp[i] = x[i];
                xm[i] = x[i];
            }
        }
        if (!stencil_ok)
            throw DomainBoundaryError("generator_lhs: finite-difference stencil exits the domain");
    }

    Vec b(d);
    problem.drift(x, b);
    const double beta = problem.noise_intensity;
    const double diffusion = params.convention == DiffusionConvention::Ito
                                 ? 0.5 * beta * beta
                                 : 0.5 * beta;
    return dot(grad_vp, b) + diffusion * lap_vp +
           pow_general(euclidean_norm(grad_vp), params.q_p) / params.q_p;
}

AssumptionReport check_generator(const SdeProblem& problem, const GeneratorParams& params,
                                 const PointSampler& points, const CheckOptions& options,
                                 bool estimate_constants, double fd_step) {
    params.validate();
    AssumptionReport report;
    report.condition = Condition::Generator;
    report.tolerance = options.tolerance;
    report.rhs_constant = options.rhs_constant;
    report.seed = options.seed;
    report.estimated_constant = kNaN;
    report.fd_cross_error = kNaN;
    report.worst_ratio = -std::numeric_limits<double>::infinity();

    CounterRng rng(options.seed, stream_of(report.condition));
    Vec x;
    double worst_lhs = -std::numeric_limits<double>::infinity();
    bool all_finite_lhs = true;
    for (long i = 0; i < options.count; ++i) {
        points(rng, x);
        require_in_domain(problem, x, "check_generator");
        const double lhs = generator_lhs(problem, params, x, fd_step);
        all_finite_lhs = all_finite_lhs && std::isfinite(lhs);
        double score;
        if (estimate_constants) {
            score = lhs;
        } else {
            const double vp = pow_general(problem.lyapunov_V(x), params.p);
            score = lhs / (options.rhs_constant * (params.a_p + params.b_p * vp));
        }
        if (score > report.worst_ratio) {
            report.worst_ratio = score;
            report.worst_sample = {x};
            if (estimate_constants) worst_lhs = lhs;
        }
        ++report.samples_tested;
    }
    if (estimate_constants) {
        report.estimated_constant = std::max(worst_lhs, 0.0);
        report.passed = all_finite_lhs;
    } else {
        report.passed = report.worst_ratio <= 1.0 + options.tolerance;
    }
    return report;
}

}  // namespace tamed
