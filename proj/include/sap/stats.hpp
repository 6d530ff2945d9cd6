#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace sap {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    bool contains(double x) const { return lo <= x && x <= hi; }
    double width() const { return hi - lo; }
};

/// Wilson score interval for a binomial proportion.
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z = 1.96) {
    if (n == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

/// Welford accumulator.
class RunningStats {
public:
    void add(double x) {
        ++n_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
    }

    std::uint64_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double std_error() const { return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0; }

private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct MeanCi {
    double mean = 0.0;
    double half_width = 0.0;  // normal interval at the requested z
    std::uint64_t n = 0;

    double lo() const { return mean - half_width; }
    double hi() const { return mean + half_width; }
    bool excludes_zero() const { return lo() > 0.0 || hi() < 0.0; }
};

inline MeanCi mean_ci(const std::vector<double>& xs, double z = 1.96) {
    RunningStats s;
    for (double x : xs) s.add(x);
    return {s.mean(), z * s.std_error(), s.count()};
}

/// Normal interval of the mean of a - b over paired observations.
inline MeanCi paired_difference(const std::vector<double>& a, const std::vector<double>& b, double z = 1.96) {
    RunningStats s;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) s.add(a[i] - b[i]);
    return {s.mean(), z * s.std_error(), s.count()};
}

}  // namespace sap
