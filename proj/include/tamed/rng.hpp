#pragma once

#include <array>
#include <cstdint>

namespace tamed {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11 constants).
///
/// Every 128-bit output block is a pure function of (counter, key), so any
/// draw is addressable by index: noise increments are reproducible from
/// (seed, path, step) alone and path farming is order-independent.
namespace philox {

inline std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                          std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t kMulA = 0xD2511F53u;
    constexpr std::uint32_t kMulB = 0xCD9E8D57u;
    constexpr std::uint32_t kWeylA = 0x9E3779B9u;
    constexpr std::uint32_t kWeylB = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
               static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
               static_cast<std::uint32_t>(p0)};
        key[0] += kWeylA;
        key[1] += kWeylB;
    }
    return ctr;
}

/// Two U(0,1] doubles with 53 random bits each from one block.
inline std::array<double, 2> uniform_pair(std::array<std::uint32_t, 4> ctr,
                                          std::array<std::uint32_t, 2> key) {
    const auto b = block(ctr, key);
    const std::uint64_t u0 = (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
    const std::uint64_t u1 = (static_cast<std::uint64_t>(b[2]) << 32) | b[3];
    constexpr double kScale = 0x1.0p-53;
    return {static_cast<double>((u0 >> 11) + 1) * kScale,
            static_cast<double>((u1 >> 11) + 1) * kScale};
}

/// Two independent N(0,1) draws (Box-Muller) from one block.
std::array<double, 2> gaussian_pair(std::array<std::uint32_t, 4> ctr,
                                    std::array<std::uint32_t, 2> key);

inline std::array<std::uint32_t, 2> key_from_seed(std::uint64_t seed) {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

}  // namespace philox

/// Standard Gaussian addressed by (seed, path, step, component).
/// Components 2i and 2i+1 of a step share one Philox block.
double indexed_gaussian(std::uint64_t seed, std::uint64_t path, std::uint64_t step,
                        std::uint32_t component);

/// Sequential convenience stream on top of the counter generator, for
/// samplers and bootstrap draws. Streams with distinct (seed, stream) ids
/// are independent; the counter space is disjoint from the noise-path space.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint32_t stream)
        : key_(philox::key_from_seed(seed)), stream_(stream) {}

    double uniform() {  // U(0,1]
        refill_if_needed();
        return cache_[cache_pos_++];
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * (uniform() - 0x1.0p-53); }

    double gaussian();

    /// Integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(uniform(0.0, static_cast<double>(n)));
    }

private:
    void refill_if_needed();

    std::array<std::uint32_t, 2> key_;
    std::uint32_t stream_;
    std::uint64_t counter_ = 0;
    std::array<double, 2> cache_{};
    int cache_pos_ = 2;
    double gauss_spare_ = 0.0;
    bool has_gauss_spare_ = false;
};

}  // namespace tamed
