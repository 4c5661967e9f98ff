#pragma once

#include <cstdint>

#include "tamed/errors.hpp"

namespace tamed {
namespace calibration {

/// Frozen right-hand-side constants for the particle-system assumption
/// checks. Calibrated by tools/calibrate (seed 90210, 10^5 stratified
/// samples per (N, alpha) cell, N in {2,3,5,8}, alpha in {1.5,2,3},
/// min gap floor 1e-3); each value is the observed worst ratio rounded up
/// with a 1.25x margin. The unit tests re-assert the checks against these
/// values on fresh samples.

/// |b(x)-b(y)| <= C (V(x)+V(y)) |x-y| with V at lyapunov_constant = 1.
inline double particle_lipschitz_constant(double alpha) {
    if (alpha == 1.5) return 8.0;
    if (alpha == 2.0) return 8.0;
    if (alpha == 3.0) return 16.0;
    throw UsageError("calibration: no frozen Lipschitz constant for this alpha");
}

/// |b(x)-b(y)-J(x)(x-y)| <= C (1+Vh(x)+Vh(y)) |x-y|^2.
inline double particle_higher_order_constant(double alpha) {
    if (alpha == 1.5) return 8.0;
    if (alpha == 2.0) return 8.0;
    if (alpha == 3.0) return 16.0;
    throw UsageError("calibration: no frozen higher-order constant for this alpha");
}

/// Empirical a_p for the generator inequality at p = 2, b_p = 0, over the
/// stratified sampler with min gap floor 1e-3. Indexed by (N, alpha).
double particle_generator_a(int particle_count, double alpha, double p);

/// True when a frozen a_p exists for this cell.
bool has_particle_generator_a(int particle_count, double alpha, double p);

}  // namespace calibration
}  // namespace tamed
