#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tamed/problem.hpp"
#include "tamed/samplers.hpp"
#include "tamed/vec.hpp"

namespace tamed {

/// Numerical verifiers for the drift/Lyapunov conditions the convergence
/// theory rests on. A passing report is statistical evidence over the
/// sampled configurations; a failing report carries a concrete
/// counterexample in worst_sample.

enum class Condition {
    LyapunovLipschitz,  // |b(x)-b(y)| <= C (V(x)+V(y)) |x-y|
    HigherOrder,        // |b(x)-b(y)-grad b(x)(x-y)| <= C (1+Vh(x)+Vh(y)) |x-y|^2
    Generator,          // L(V^p) + (1/q)|grad V^p|^q <= a_p + b_p V^p
    Monotonicity,       // <b(x)-b(y), x-y> <= mu |x-y|^2
    GradientPowerBound  // |grad V| <= C (1 + V^l)
};

std::string condition_name(Condition c);
Condition condition_from_name(const std::string& name);

struct AssumptionReport {
    Condition condition = Condition::LyapunovLipschitz;
    long samples_tested = 0;
    double worst_ratio = 0.0;  // max over samples of lhs/rhs
    std::vector<Vec> worst_sample;
    double tolerance = 0.0;
    double rhs_constant = 1.0;
    bool passed = false;
    /// Generator estimate mode: empirical a_p. NaN otherwise.
    double estimated_constant = 0.0;
    /// Higher-order check: worst relative deviation of the supplied Jacobian
    /// from central differences. NaN for other conditions.
    double fd_cross_error = 0.0;
    std::uint64_t seed = 0;
};

struct CheckOptions {
    long count = 10000;
    std::uint64_t seed = 1;
    double tolerance = 1e-9;   // relative slack on the worst ratio
    double rhs_constant = 1.0; // calibrated constant multiplying the right-hand side
    /// Local length scale for finite-difference probes (e.g. the min gap of a
    /// particle configuration). Defaults to 1 when empty.
    std::function<double(ConstSpan)> fd_scale;
};

/// Ratio |b(x)-b(y)| / (rhs_constant (V(x)+V(y)) |x-y|) over sampled pairs.
AssumptionReport check_lyapunov_lipschitz(const SdeProblem& problem, const PairSampler& pairs,
                                          const CheckOptions& options);

/// Ratio |b(x)-b(y)-J(x)(x-y)| / (rhs_constant (1+Vh(x)+Vh(y)) |x-y|^2); the
/// supplied Jacobian (problem.drift_jacobian when `jacobian` is empty) is
/// cross-checked against central differences on a subsample.
AssumptionReport check_higher_order(const SdeProblem& problem, const JacobianFn& jacobian,
                                    const PairSampler& pairs, const CheckOptions& options);

/// One-sided Lipschitz quotient <b(x)-b(y), x-y> / |x-y|^2 compared to mu.
AssumptionReport check_monotonicity(const SdeProblem& problem, double mu,
                                    const PairSampler& pairs, const CheckOptions& options);

/// Ratio |grad V| / (rhs_constant C (1+V^l)); gradient analytic when provided,
/// otherwise central differences.
AssumptionReport check_gradient_power_bound(const SdeProblem& problem, double bound_constant,
                                            double power, const PointSampler& points,
                                            const CheckOptions& options);

enum class DiffusionConvention {
    Ito,          // diffusion term (beta^2 / 2) Laplacian
    HalfIntensity // literal (beta / 2) Laplacian
};

struct GeneratorParams {
    double p = 2.0;    // moment order, >= 1
    double q_p = 0.0;  // > 1
    double a_p = 1.0;  // > 0
    double b_p = 0.0;  // >= 0
    DiffusionConvention convention = DiffusionConvention::Ito;

    void validate() const;
};

/// Exponent q for power-form Lyapunov functions V = const + N^r U^s of the
/// singular particle system:
///   q = ((p s - 1)(alpha - 1) + 1 + alpha) / ((p s - 1)(alpha - 1) + alpha).
/// Requires p s > 1 and alpha > 1; the result is always > 1 and decreasing
/// in p. Use s = lyapunov_exponent(alpha) for V, lyapunov_hat_exponent for V_hat.
double generator_q_exponent(double p, double s, double alpha);

/// Closed-form bound b (b q / (a p))^{q/(p-q)} for sup_{t>0} (-a t^{-p} + b t^{-q}),
/// with p > q > 0 and a, b > 0.
double envelope_max(double a, double b, double p, double q);

/// <grad(V^p), b> + D * lap(V^p) + (1/q_p) |grad(V^p)|^{q_p} at x, where D is
/// beta^2/2 or beta/2 per the convention. Uses the problem's analytic
/// gradient/Laplacian when present, otherwise central differences with step
/// fd_step (shrunk when the stencil exits the domain; error after 8 halvings).
double generator_lhs(const SdeProblem& problem, const GeneratorParams& params, ConstSpan x,
                     double fd_step);

/// estimate_constants = true: report the empirical max of generator_lhs as an
/// estimate of a_p (taking b_p = 0). Otherwise check
/// lhs <= rhs_constant (a_p + b_p V^p) per sample.
AssumptionReport check_generator(const SdeProblem& problem, const GeneratorParams& params,
                                 const PointSampler& points, const CheckOptions& options,
                                 bool estimate_constants, double fd_step = 1e-5);

}  // namespace tamed
