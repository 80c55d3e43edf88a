#pragma once

#include <cstdint>
#include <span>

namespace tracknet {

// Hurwitz zeta sum_{k>=0} (k + a)^(-s) for s > 1, a > 0.
double hurwitz_zeta(double s, double a);

struct PowerLawFit {
    std::uint64_t x_min = 0;
    double alpha = 0.0;
    double ks_distance = 0.0;
    std::size_t n_tail = 0;
    double sigma = 0.0;  // standard error (alpha - 1) / sqrt(n_tail)
};

struct PowerLawOptions {
    // Exact discrete likelihood maximisation instead of the
    // 1 + n / sum ln(x / (x_min - 1/2)) approximation.
    bool exact_mle = false;
    std::size_t min_samples = 50;
};

// Discrete power-law fit: every distinct sample value is tried as x_min,
// alpha is estimated on the tail, and the candidate whose fitted model has
// the smallest Kolmogorov-Smirnov distance to the empirical tail wins.
// Throws Error for too few samples, fewer than two distinct values, or
// non-positive samples.
PowerLawFit fit_power_law(std::span<const std::uint64_t> samples, const PowerLawOptions& options = {});

// P(X >= x) of the discrete power law with the given parameters (x >= x_min).
double discrete_power_law_ccdf(double alpha, std::uint64_t x_min, std::uint64_t x);

}  // namespace tracknet
