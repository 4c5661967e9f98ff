#pragma once

#include <functional>

#include "tamed/rng.hpp"
#include "tamed/vec.hpp"

namespace tamed {

using PointSampler = std::function<void(CounterRng&, Vec&)>;
using PairSampler = std::function<void(CounterRng&, Vec&, Vec&)>;

/// Uniform over the box [-half_width, half_width]^d.
PointSampler box_sampler(int dimension, double half_width);

/// Independent pairs from one point sampler.
PairSampler independent_pairs(PointSampler sampler);

/// Pairs from `sampler`; with probability `near_fraction` the second point is
/// x + delta * u with |u| = 1 and delta = near_scale(x), probing the y -> x
/// limit of difference-quotient conditions.
PairSampler mixed_pairs(PointSampler sampler, double near_fraction,
                        std::function<double(ConstSpan)> near_scale);

}  // namespace tamed
