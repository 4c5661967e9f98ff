#include "tamed/problems.hpp"

#include <cmath>

#include "tamed/errors.hpp"

namespace tamed {

SdeProblem linear_problem(double x0, double beta, double horizon) {
    SdeProblem p;
    p.dimension = 1;
    p.label = "linear";
    p.drift = [](ConstSpan x, MutSpan out) { out[0] = -x[0]; };
    p.in_domain = [](ConstSpan) { return true; };
    p.lyapunov_V = [](ConstSpan) { return 1.0; };
    p.lyapunov_gradient = [](ConstSpan, MutSpan out) { out[0] = 0.0; };
    p.lyapunov_laplacian = [](ConstSpan) { return 0.0; };
    p.drift_jacobian = [](ConstSpan, MutSpan j) { j[0] = -1.0; };
    p.noise_intensity = beta;
    p.initial_state = {x0};
    p.horizon = horizon;
    p.validate();
    return p;
}

SdeProblem polynomial_problem(double x0, double beta, double horizon, double lyapunov_scale) {
    if (!(lyapunov_scale > 0.0)) throw UsageError("polynomial_problem: lyapunov_scale must be positive");
    const double c = lyapunov_scale;
    SdeProblem p;
    p.dimension = 1;
    p.label = "polynomial";
    p.drift = [](ConstSpan x, MutSpan out) { out[0] = x[0] - x[0] * x[0] * x[0]; };
    p.in_domain = [](ConstSpan) { return true; };
    p.lyapunov_V = [c](ConstSpan x) { return c * (1.0 + x[0] * x[0]); };
    p.lyapunov_V_hat = [c](ConstSpan x) { return c * (1.0 + std::abs(x[0] * x[0] * x[0])); };
    p.lyapunov_gradient = [c](ConstSpan x, MutSpan out) { out[0] = 2.0 * c * x[0]; };
    p.lyapunov_laplacian = [c](ConstSpan) { return 2.0 * c; };
    p.drift_jacobian = [](ConstSpan x, MutSpan j) { j[0] = 1.0 - 3.0 * x[0] * x[0]; };
    p.noise_intensity = beta;
    p.initial_state = {x0};
    p.horizon = horizon;
    p.validate();
    return p;
}

}  // namespace tamed
