#pragma once

// SplitMix64 (Steele, Lea & Flood 2014): state advances by the golden-ratio
// increment and each output is a bijective mix of the state. Streams are keyed by
// (seed, replicate) so replicates can run in any order or in parallel.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>

namespace hoeffmc {

class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        state_ += kGolden;
        return mix(state_);
    }

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

private:
    std::uint64_t state_;
};

/// Independent stream for replicate `index` under `seed`.
inline SplitMix64 replicate_stream(std::uint64_t seed, std::uint64_t index) noexcept {
    const std::uint64_t key = SplitMix64::mix(seed) ^ SplitMix64::mix(index * SplitMix64::kGolden + 0xD1B54A32D192ED03ULL);
    return SplitMix64(key);
}

/// Uniform double in [0, 1) from the top 53 bits.
template <class Gen>
double uniform01(Gen& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller (one of the pair is discarded; draws are stream-local).
template <class Gen>
double standard_normal(Gen& gen) {
    double u1 = uniform01(gen);
    while (u1 <= 0.0) u1 = uniform01(gen);
    const double u2 = uniform01(gen);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

/// Pairwise summation; the result depends only on the order of `xs`, not on how it was filled.
inline double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 8) return std::accumulate(xs.begin(), xs.end(), 0.0);
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace hoeffmc
