#include <doctest.h>

#include <cmath>

#include "tamed/rng.hpp"
#include "tamed/scheme.hpp"

using namespace tamed;

TEST_CASE("indexed gaussian is a pure function of its address") {
    const double a = indexed_gaussian(42, 3, 1000, 2);
    const double b = indexed_gaussian(42, 3, 1000, 2);
    CHECK(a == b);
    CHECK(indexed_gaussian(42, 3, 1000, 3) != a);
    CHECK(indexed_gaussian(43, 3, 1000, 2) != a);
    CHECK(indexed_gaussian(42, 4, 1000, 2) != a);
    CHECK(indexed_gaussian(42, 3, 1001, 2) != a);
}

TEST_CASE("gaussian draws have the right first two moments") {
    const long n = 200000;
    double sum = 0.0, sum_sq = 0.0;
    for (long i = 0; i < n; ++i) {
        const double z = indexed_gaussian(7, 0, static_cast<std::uint64_t>(i), 0);
        sum += z;
        sum_sq += z * z;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    // 4 sigma bands: se(mean) = 1/sqrt(n), se(var) ~ sqrt(2/n).
    CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / static_cast<double>(n)));
}

TEST_CASE("gaussian draws at adjacent addresses are uncorrelated") {
    const long n = 100000;
    double sum_xy = 0.0;
    for (long i = 0; i < n; ++i) {
        const double a = indexed_gaussian(11, 0, static_cast<std::uint64_t>(i), 0);
        const double b = indexed_gaussian(11, 0, static_cast<std::uint64_t>(i), 1);
        sum_xy += a * b;
    }
    CHECK(std::abs(sum_xy / n) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("counter rng streams are deterministic and distinct") {
    CounterRng a(5, 1), b(5, 1), c(5, 2);
    bool any_diff = false;
    for (int i = 0; i < 64; ++i) {
        const double ua = a.uniform();
        const double ub = b.uniform();
        const double uc = c.uniform();
        CHECK(ua == ub);
        CHECK(ua > 0.0);
        CHECK(ua <= 1.0);
        any_diff = any_diff || (ua != uc);
    }
    CHECK(any_diff);
}

TEST_CASE("noise increments are reproducible from (seed, path, step) alone") {
    const auto longer = NoisePath::generate(99, 2, 16, 12, 3);
    const auto shorter = NoisePath::generate(99, 2, 16, 5, 3);
    for (long k = 0; k < 5; ++k) {
        const auto a = longer.increment(k);
        const auto b = shorter.increment(k);
        for (int i = 0; i < 3; ++i) CHECK(a[i] == b[i]);
    }
    const auto other_path = NoisePath::generate(99, 3, 16, 5, 3);
    CHECK(other_path.increment(0)[0] != shorter.increment(0)[0]);
}

TEST_CASE("noise increments carry variance 1/n") {
    const long n = 64;
    const long steps = 50000;
    const auto path = NoisePath::generate(1234, 0, n, steps, 1);
    double sum = 0.0, sum_sq = 0.0;
    for (long k = 0; k < steps; ++k) {
        sum += path.increment(k)[0];
        sum_sq += path.increment(k)[0] * path.increment(k)[0];
    }
    const double mean = sum / steps;
    const double var = sum_sq / steps - mean * mean;
    const double dt = 1.0 / static_cast<double>(n);
    CHECK(std::abs(mean) < 4.0 * std::sqrt(dt / steps));
    CHECK(std::abs(var - dt) < 4.0 * dt * std::sqrt(2.0 / steps));
}
