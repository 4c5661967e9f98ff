#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace tamed {

using Vec = std::vector<double>;
using ConstSpan = std::span<const double>;
using MutSpan = std::span<double>;

inline double squared_norm(ConstSpan x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

inline double euclidean_norm(ConstSpan x) { return std::sqrt(squared_norm(x)); }

inline double squared_distance(ConstSpan x, ConstSpan y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

inline double dot(ConstSpan x, ConstSpan y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline bool all_finite(ConstSpan x) {
    for (double v : x) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

/// x^k for small non-negative integer k by repeated squaring.
inline double pow_int(double x, long k) {
    double r = 1.0;
    double base = x;
    while (k > 0) {
        if (k & 1) r *= base;
        base *= base;
        k >>= 1;
    }
    return r;
}

/// std::pow with a fast path when the exponent is an integer.
inline double pow_general(double x, double e) {
    const double r = std::nearbyint(e);
    if (e == r && r >= 0.0 && r <= 64.0) return pow_int(x, static_cast<long>(r));
    return std::pow(x, e);
}

}  // namespace tamed
