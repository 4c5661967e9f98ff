#include "tamed/samplers.hpp"

#include <cmath>

#include "tamed/errors.hpp"

namespace tamed {

PointSampler box_sampler(int dimension, double half_width) {
    if (dimension <= 0 || !(half_width > 0.0)) throw UsageError("box_sampler: invalid parameters");
    return [dimension, half_width](CounterRng& rng, Vec& out) {
        out.resize(dimension);
        for (int i = 0; i < dimension; ++i) out[i] = rng.uniform(-half_width, half_width);
    };
}

PairSampler independent_pairs(PointSampler sampler) {
    return [sampler = std::move(sampler)](CounterRng& rng, Vec& x, Vec& y) {
        sampler(rng, x);
        sampler(rng, y);
    };
}

PairSampler mixed_pairs(PointSampler sampler, double near_fraction,
                        std::function<double(ConstSpan)> near_scale) {
    if (!(near_fraction >= 0.0 && near_fraction <= 1.0))
        throw UsageError("mixed_pairs: near_fraction must lie in [0, 1]");
    return [sampler = std::move(sampler), near_fraction,
            near_scale = std::move(near_scale)](CounterRng& rng, Vec& x, Vec& y) {
        sampler(rng, x);
        if (rng.uniform() <= near_fraction) {
            y.resize(x.size());
            double norm_sq = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                y[i] = rng.gaussian();
                norm_sq += y[i] * y[i];
            }
            const double delta = near_scale(x) / std::sqrt(norm_sq);
            for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + delta * y[i];
        } else {
            sampler(rng, y);
        }
    };
}

}  // namespace tamed
