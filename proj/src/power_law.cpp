#include "tracknet/power_law.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "tracknet/error.hpp"

namespace tracknet {
namespace {

// B_{2j} / (2j)! for j = 1..8.
constexpr std::array<double, 8> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
};

constexpr double kShift = 16.0;

// a^s zeta(s, a) = sum_k (a / (a + k))^s, same expansion as hurwitz_zeta.
// Ratios of tail sums are taken between scaled values so large exponents
// cannot underflow them to 0/0.
double scaled_zeta(double s, double a) {
    double sum = 0.0;
    double b = a;
    while (b < kShift) {
        sum += std::pow(a / b, s);
        b += 1.0;
    }
    const double r = std::pow(a / b, s);
    double tail = r * b / (s - 1.0) + 0.5 * r;
    double factor = s * r / b;
    for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
        tail += kBernoulliOverFactorial[j] * factor;
        const double k = 2.0 * static_cast<double>(j + 1);
        factor *= (s + k - 1.0) * (s + k) / (b * b);
    }
    return sum + tail;
}

// Tail sum of the fitted model at consecutive integers, walking upward,
// in units of x_min^(-alpha).
class ZetaWalker {
public:
    ZetaWalker(double alpha, double x_min) : alpha_(alpha), x_min_(x_min), x_(x_min), value_(scaled_zeta(alpha, x_min)) {}

    // x_min^alpha zeta(alpha, x) for x >= current position.
    double at(double x) {
        if (x - x_ > 64.0) {
            x_ = x;
            value_ = scaled_zeta(alpha_, x) * term(x);
        }
        while (x_ < x) {
            value_ -= term(x_);
            x_ += 1.0;
        }
        return value_;
    }

    // (x_min / x)^alpha
    double term(double x) const { return std::pow(x_min_ / x, alpha_); }

private:
    double alpha_;
    double x_min_;
    double x_;
    double value_;
};

double approximate_alpha(std::span<const std::uint64_t> tail, double x_min) {
    double sum = 0.0;
    const double denom = x_min - 0.5;
    for (auto x : tail) sum += std::log(static_cast<double>(x) / denom);
    return 1.0 + static_cast<double>(tail.size()) / sum;
}

double exact_alpha(std::span<const std::uint64_t> tail, double x_min, double start) {
    double sum_log = 0.0;
    for (auto x : tail) sum_log += std::log(static_cast<double>(x));
    const double n = static_cast<double>(tail.size());
    const double log_x_min = std::log(x_min);
    auto negative_log_likelihood = [&](double alpha) {
        return n * (std::log(scaled_zeta(alpha, x_min)) - alpha * log_x_min) + alpha * sum_log;
    };
    double hi = std::max(6.0, 2.0 * start);
    auto [alpha, value] = boost::math::tools::brent_find_minima(negative_log_likelihood, 1.0 + 1e-6, hi, 40);
    (void)value;
    return alpha;
}

}  // namespace

double hurwitz_zeta(double s, double a) {
    if (!(s > 1.0) || !(a > 0.0)) throw Error("hurwitz_zeta: requires s > 1 and a > 0");
    // Direct terms until the Euler-Maclaurin tail is accurate.
    double sum = 0.0;
    double b = a;
    while (b < kShift) {
        sum += std::pow(b, -s);
        b += 1.0;
    }
    double tail = std::pow(b, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(b, -s);
    // Rising factorial s (s+1) ... (s+2j-2) times b^(-s-2j+1).
    double factor = s * std::pow(b, -s - 1.0);
    for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
        tail += kBernoulliOverFactorial[j] * factor;
        const double k = 2.0 * static_cast<double>(j + 1);
        factor *= (s + k - 1.0) * (s + k) / (b * b);
    }
    return sum + tail;
}

double discrete_power_law_ccdf(double alpha, std::uint64_t x_min, std::uint64_t x) {
    if (x <= x_min) return 1.0;
    const double a = static_cast<double>(x_min), b = static_cast<double>(x);
    return std::pow(a / b, alpha) * scaled_zeta(alpha, b) / scaled_zeta(alpha, a);
}

PowerLawFit fit_power_law(std::span<const std::uint64_t> samples, const PowerLawOptions& options) {
    if (samples.size() < options.min_samples) {
        throw Error("fit_power_law: need at least " + std::to_string(options.min_samples) + " samples");
    }
    std::vector<std::uint64_t> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == 0) throw Error("fit_power_law: samples must be positive");
    if (sorted.front() == sorted.back()) throw Error("fit_power_law: need at least two distinct values");

    // Distinct values and the index of their first occurrence.
    std::vector<std::uint64_t> values;
    std::vector<std::size_t> first;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i == 0 || sorted[i] != sorted[i - 1]) {
            values.push_back(sorted[i]);
            first.push_back(i);
        }
    }
    first.push_back(sorted.size());

    PowerLawFit best;
    best.ks_distance = std::numeric_limits<double>::infinity();
    // The largest value leaves a one-point distribution; skip it.
    for (std::size_t c = 0; c + 1 < values.size(); ++c) {
        std::span<const std::uint64_t> tail(sorted.data() + first[c], sorted.size() - first[c]);
        if (tail.size() < 2) break;
        const double x_min = static_cast<double>(values[c]);
        double alpha = approximate_alpha(tail, x_min);
        if (options.exact_mle) alpha = exact_alpha(tail, x_min, alpha);
        if (!std::isfinite(alpha) || alpha <= 1.0) continue;

        const double n_tail = static_cast<double>(tail.size());
        ZetaWalker zeta(alpha, x_min);
        const double norm = zeta.at(x_min);
        double ks = 0.0;
        for (std::size_t v = c; v < values.size(); ++v) {
            const double below = static_cast<double>(first[v] - first[c]) / n_tail;      // empirical P(X < value)
            const double upto = static_cast<double>(first[v + 1] - first[c]) / n_tail;   // empirical P(X <= value)
            const double x = static_cast<double>(values[v]);
            // Model CDF just below x and at x.
            const double model_below = 1.0 - zeta.at(x) / norm;
            const double model_upto = model_below + zeta.term(x) / norm;
            ks = std::max({ks, std::abs(below - model_below), std::abs(upto - model_upto)});
            if (ks >= best.ks_distance) break;
        }
        if (std::isfinite(ks) && ks < best.ks_distance) {
            best.ks_distance = ks;
            best.x_min = values[c];
            best.alpha = alpha;
            best.n_tail = tail.size();
        }
    }
    if (!std::isfinite(best.ks_distance)) throw Error("fit_power_law: no admissible x_min");
    best.sigma = (best.alpha - 1.0) / std::sqrt(static_cast<double>(best.n_tail));
    return best;
}

}  // namespace tracknet
