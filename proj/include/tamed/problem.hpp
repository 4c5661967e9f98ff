#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "tamed/errors.hpp"
#include "tamed/vec.hpp"

namespace tamed {

using DriftFn = std::function<void(ConstSpan, MutSpan)>;
using ScalarFieldFn = std::function<double(ConstSpan)>;
using DomainFn = std::function<bool(ConstSpan)>;
/// Writes b(x) and returns V(x) in one pass, for problems where the two
/// evaluations share work. Must agree bitwise with drift / lyapunov_V.
using FusedDriftLyapunovFn = std::function<double(ConstSpan, MutSpan)>;
using GradientFn = std::function<void(ConstSpan, MutSpan)>;
/// Writes the d x d Jacobian of the drift, row-major.
using JacobianFn = std::function<void(ConstSpan, MutSpan)>;

/// An SDE dX = b(X) dt + beta dW on an open domain D, together with the
/// Lyapunov data the taming and the assumption checkers consume.
///
/// drift and lyapunov_V are defined on D only; callers must gate every
/// evaluation on in_domain. The analytic members below drift_and_lyapunov
/// are optional (empty std::function when absent).
struct SdeProblem {
    int dimension = 0;
    DriftFn drift;
    DomainFn in_domain;
    ScalarFieldFn lyapunov_V;
    ScalarFieldFn lyapunov_V_hat;             // optional
    FusedDriftLyapunovFn drift_and_lyapunov;  // optional fast path
    GradientFn lyapunov_gradient;             // optional analytic grad V
    ScalarFieldFn lyapunov_laplacian;         // optional analytic lap V
    JacobianFn drift_jacobian;                // optional analytic grad b
    double noise_intensity = 0.0;             // beta
    Vec initial_state;
    double horizon = 0.0;  // T
    std::string label;

    /// Throws UsageError on an invalid definition (x0 outside D, beta <= 0,
    /// T <= 0, V(x0) < 0, missing callables).
    void validate() const;
};

/// Step count n (grid spacing 1/n) and the taming threshold sqrt(n).
struct TamingPolicy {
    long step_count = 0;
    double threshold = 0.0;

    static TamingPolicy for_step_count(long n) {
        if (n <= 0) throw UsageError("TamingPolicy: step count must be positive");
        return {n, std::sqrt(static_cast<double>(n))};
    }

    double dt() const { return 1.0 / static_cast<double>(step_count); }

    /// n >= V(x0)^2, the regime in which the scheme starts untamed and the
    /// rate-1/2 bound applies.
    bool meets_rate_half_precondition(const SdeProblem& p) const {
        const double v0 = p.lyapunov_V(p.initial_state);
        return static_cast<double>(step_count) >= v0 * v0;
    }

    /// n >= V(x0)^3, the precondition of the rate-1 bound.
    bool meets_rate_one_precondition(const SdeProblem& p) const {
        const double v0 = p.lyapunov_V(p.initial_state);
        return static_cast<double>(step_count) >= v0 * v0 * v0;
    }

    void validate() const;
};

}  // namespace tamed
