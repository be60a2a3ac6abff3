#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hpcsocial {

/// mt19937_64 with hand-written distributions. The engine's output sequence is
/// fixed by the C++ standard but std::*_distribution is not, so every draw
/// goes through the functions below to keep traces identical across platforms.
class Rng {
public:
    static constexpr const char* kAlgorithm = "mt19937_64";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n); n > 0. Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = (0 - n) % n;
        std::uint64_t x = next();
        while (x < limit) x = next();
        return x % n;
    }

    /// Uniform integer in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Exponential with the given rate (mean 1 / rate).
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

private:
    std::mt19937_64 engine_;
};

}  // namespace hpcsocial
