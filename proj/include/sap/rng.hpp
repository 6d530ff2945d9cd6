#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace sap {

/// splitmix64 finalizer. Used both as a counter-based hash and to derive
/// child seeds, so a stream tree is fixed by the root seed alone.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t child) noexcept {
    return mix64(parent ^ mix64(child + 0x632be59bd9b4e019ULL));
}

template <class... Rest>
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t child, Rest... rest) noexcept {
    return derive_seed(derive_seed(parent, child), static_cast<std::uint64_t>(rest)...);
}

/// Map 64 random bits to a double in [0, 1).
constexpr double to_unit(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Unit-mean exponential draw from a single hashed key.
inline double unit_exponential(std::uint64_t key) noexcept {
    return -std::log1p(-to_unit(mix64(key)));
}

/// Small sequential generator (splitmix64 stream). Satisfies
/// UniformRandomBitGenerator so it also plugs into <random> distributions.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform() noexcept { return to_unit((*this)()); }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    double exponential() noexcept { return -std::log1p(-uniform()); }

    /// Poisson variate by multiplication of uniforms, summed over chunks of
    /// mean 30. Unlike std::poisson_distribution the output does not depend
    /// on the standard library implementation.
    std::uint64_t poisson(double mean) noexcept {
        std::uint64_t total = 0;
        while (mean > 30.0) {
            total += poisson_small(30.0);
            mean -= 30.0;
        }
        return total + poisson_small(mean);
    }

private:
    std::uint64_t poisson_small(double mean) noexcept {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        double prod = uniform();
        std::uint64_t k = 0;
        while (prod > limit) {
            ++k;
            prod *= uniform();
        }
        return k;
    }

    std::uint64_t state_;
};

}  // namespace sap
