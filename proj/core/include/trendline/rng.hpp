#pragma once

#include <cstdint>

namespace trendline {

/// Counter-based generator: the i-th draw of stream s under seed k is a pure
/// function of (k, s, i). Output mixing follows SplitMix64. All variates are
/// produced by explicit transforms so results do not depend on the standard
/// library's distribution implementations.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();

    /// Uniform on the open interval (0, 1).
    double uniform();

    /// Standard normal via Box-Muller.
    double normal();

    /// Laplace(0, scale) by inverse CDF.
    double laplace(double scale);

    /// Poisson(lambda) by sequential inversion on chunks of at most 500.
    std::uint64_t poisson(double lambda);

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace trendline
