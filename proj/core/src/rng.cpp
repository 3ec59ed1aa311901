#include "trendline/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace trendline {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(seed + kGolden) ^ mix64(stream * 0xD1B54A32D192ED03ULL + 1)) {}

std::uint64_t CounterRng::next_u64() {
    return mix64(key_ + (++counter_) * kGolden);
}

double CounterRng::uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

double CounterRng::laplace(double scale) {
    const double u = uniform() - 0.5;
    return -scale * std::copysign(1.0, u) * std::log(1.0 - 2.0 * std::abs(u));
}

std::uint64_t CounterRng::poisson(double lambda) {
    std::uint64_t total = 0;
    while (lambda > 0.0) {
        const double chunk = std::min(lambda, 500.0);
        lambda -= chunk;
        const double u = uniform();
        double p = std::exp(-chunk);
        double cdf = p;
        std::uint64_t k = 0;
        while (u > cdf && k < 100000) {
            ++k;
            p *= chunk / static_cast<double>(k);
            cdf += p;
            if (p == 0.0 && cdf < u) {
                break;
            }
        }
        total += k;
    }
    return total;
}

} // namespace trendline
