#pragma once

#include "tamed/problem.hpp"

namespace tamed {

/// Calibration problem: b(x) = -x in d = 1, constant Lyapunov function.
/// The classical Euler rate 1 for this SDE anchors the harness.
SdeProblem linear_problem(double x0, double beta, double horizon);

/// Cubic double-well drift b(x) = x - x^3 in d = 1, with
/// V(x) = scale * (1 + x^2) and V_hat(x) = scale * (1 + |x|^3).
/// scale = 1.5 is the smallest value for which
/// |b(x) - b(y)| <= (V(x) + V(y)) |x - y| holds everywhere (test-calibrated).
SdeProblem polynomial_problem(double x0, double beta, double horizon, double lyapunov_scale = 1.5);

}  // namespace tamed
