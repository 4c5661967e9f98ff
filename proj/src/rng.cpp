#include "tamed/rng.hpp"

#include <cmath>
#include <numbers>

namespace tamed {

namespace philox {

std::array<double, 2> gaussian_pair(std::array<std::uint32_t, 4> ctr,
                                    std::array<std::uint32_t, 2> key) {
    const auto u = uniform_pair(ctr, key);
    const double r = std::sqrt(-2.0 * std::log(u[0]));
    const double theta = 2.0 * std::numbers::pi * u[1];
    return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace philox

double indexed_gaussian(std::uint64_t seed, std::uint64_t path, std::uint64_t step,
                        std::uint32_t component) {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32),
        component / 2, static_cast<std::uint32_t>(path)};
    const auto z = philox::gaussian_pair(ctr, philox::key_from_seed(seed));
    return z[component % 2];
}

void CounterRng::refill_if_needed() {
    if (cache_pos_ < 2) return;
    // ctr[2] = ~0 keeps sampler draws disjoint from noise-path blocks, whose
    // third word is a small component-pair index.
    const std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(counter_),
                                              static_cast<std::uint32_t>(counter_ >> 32),
                                              0xFFFFFFFFu, stream_};
    cache_ = philox::uniform_pair(ctr, key_);
    cache_pos_ = 0;
    ++counter_;
}

double CounterRng::gaussian() {
    if (has_gauss_spare_) {
        has_gauss_spare_ = false;
        return gauss_spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    gauss_spare_ = r * std::sin(theta);
    has_gauss_spare_ = true;
    return r * std::cos(theta);
}

}  // namespace tamed
