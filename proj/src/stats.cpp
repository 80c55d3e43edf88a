#include "tracknet/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "tracknet/error.hpp"
#include "tracknet/rng.hpp"

namespace tracknet {
namespace {

double xlogx_ratio(double observed, double expected) {
    return observed > 0.0 ? observed * std::log(observed / expected) : 0.0;
}

}  // namespace

double chi_square_1df_sf(double x) {
    if (!(x > 0.0)) return 1.0;
    return std::erfc(std::sqrt(x / 2.0));
}

TestResult g2_test(const ContingencyTable2x2& t) {
    const double a = static_cast<double>(t.a), b = static_cast<double>(t.b);
    const double c = static_cast<double>(t.c), d = static_cast<double>(t.d);
    const double row1 = a + b, row2 = c + d, col1 = a + c, col2 = b + d;
    const double n = row1 + row2;
    if (row1 == 0.0 || row2 == 0.0 || col1 == 0.0 || col2 == 0.0) throw Error("g2_test: zero margin in contingency table");
    double g = 2.0 * (xlogx_ratio(a, row1 * col1 / n) + xlogx_ratio(b, row1 * col2 / n) +
                      xlogx_ratio(c, row2 * col1 / n) + xlogx_ratio(d, row2 * col2 / n));
    // Rounding can leave tiny negative values under exact independence.
    g = std::max(g, 0.0);
    return TestResult{g, chi_square_1df_sf(g)};
}

CorrelationResult assortativity(const BipartiteGraph& g, const AssortativityOptions& options) {
    const auto m = g.num_edges();
    if (m < 2) throw Error("assortativity: need at least two edges");
    std::vector<double> x;
    std::vector<double> y;
    x.reserve(m);
    y.reserve(m);
    for (std::size_t s = 0; s < g.num_sites(); ++s) {
        const auto ds = static_cast<double>(g.site_degree(s));
        for (auto t : g.third_parties_of(s)) {
            x.push_back(ds);
            y.push_back(static_cast<double>(g.third_party_degree(t)));
        }
    }
    const double n = static_cast<double>(m);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        x[i] -= mx;
        y[i] -= my;
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
    }
    if (sxx <= 0.0 || syy <= 0.0) throw Error("degenerate degree sequence");
    auto cross = [&](const std::vector<double>& ys) {
        double sxy = 0.0;
        for (std::size_t i = 0; i < m; ++i) sxy += x[i] * ys[i];
        return sxy;
    };
    const double denom = std::sqrt(sxx * syy);
    const double r = std::clamp(cross(y) / denom, -1.0, 1.0);

    CorrelationResult result{r, 1.0, m};
    if (options.permutations > 0) {
        Rng rng(options.seed);
        std::vector<double> shuffled = y;
        std::size_t extreme = 0;
        for (std::size_t k = 0; k < options.permutations; ++k) {
            rng.shuffle(std::span<double>(shuffled));
            // Small tolerance so exact ties with the observed value count.
            if (std::abs(cross(shuffled) / denom) >= std::abs(r) - 1e-12) ++extreme;
        }
        result.p_value = static_cast<double>(extreme + 1) / static_cast<double>(options.permutations + 1);
    }
    return result;
}

LabelledMatrix cond_prob_matrix(const BipartiteGraph& g, std::span<const PayLevelDomain> trackers) {
    std::vector<std::uint32_t> index;
    LabelledMatrix out;
    for (const auto& t : trackers) {
        auto j = g.third_party_index(t);
        if (!j || g.third_party_degree(*j) == 0) throw Error("cond_prob_matrix: tracker has no site: " + t.name());
        index.push_back(*j);
        out.labels.push_back(t.name());
    }
    const auto k = index.size();
    out.values.assign(k * k, 0.0);
    for (std::size_t row = 0; row < k; ++row) {
        auto a = g.sites_of(index[row]);
        for (std::size_t col = 0; col < k; ++col) {
            auto b = g.sites_of(index[col]);
            std::size_t both = 0;
            auto ia = a.begin();
            auto ib = b.begin();
            while (ia != a.end() && ib != b.end()) {
                if (*ia < *ib) ++ia;
                else if (*ib < *ia) ++ib;
                else {
                    ++both;
                    ++ia;
                    ++ib;
                }
            }
            out.values[row * k + col] = static_cast<double>(both) / static_cast<double>(b.size());
        }
    }
    return out;
}

CorrelationResult point_biserial(std::span<const int> dichotomous, std::span<const double> continuous) {
    if (dichotomous.size() != continuous.size()) throw Error("point_biserial: length mismatch");
    const auto n = dichotomous.size();
    if (n < 3) throw Error("point_biserial: need at least three observations");
    double sum1 = 0.0, sum0 = 0.0, mean = 0.0;
    std::size_t n1 = 0, n0 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(continuous[i])) throw Error("point_biserial: non-finite value");
        mean += continuous[i];
        if (dichotomous[i] == 1) {
            sum1 += continuous[i];
            ++n1;
        } else if (dichotomous[i] == 0) {
            sum0 += continuous[i];
            ++n0;
        } else {
            throw Error("point_biserial: dichotomous values must be 0 or 1");
        }
    }
    if (n1 == 0 || n0 == 0) throw Error("point_biserial: both groups must be nonempty");
    const double dn = static_cast<double>(n);
    mean /= dn;
    double ss = 0.0;
    for (double v : continuous) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / dn);
    if (!(sd > 0.0)) throw Error("point_biserial: continuous variable has zero variance");
    const double m1 = sum1 / static_cast<double>(n1);
    const double m0 = sum0 / static_cast<double>(n0);
    double r = (m1 - m0) / sd * std::sqrt(static_cast<double>(n1) * static_cast<double>(n0) / (dn * dn));
    r = std::clamp(r, -1.0, 1.0);

    CorrelationResult result{r, 0.0, n};
    if (std::abs(r) < 1.0 && n > 2) {
        const double df = dn - 2.0;
        const double t = r * std::sqrt(df / (1.0 - r * r));
        boost::math::students_t dist(df);
        result.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    }
    return result;
}

std::string_view to_string(PrevalenceDirection direction) noexcept {
    switch (direction) {
        case PrevalenceDirection::more_on_critical: return "more_on_critical";
        case PrevalenceDirection::more_on_noncritical: return "more_on_noncritical";
        case PrevalenceDirection::none: return "none";
    }
    return "none";
}

PrevalenceResult prevalence_test(const ShareTarget& target, const DomainSet& critical, const DomainSet& noncritical,
                                 const BipartiteGraph& g) {
    if (critical.empty() || noncritical.empty()) throw Error("prevalence_test: both domain sets must be nonempty");
    PrevalenceResult result;
    const auto with_critical = covered_sites(critical, target, g).size();
    const auto with_noncritical = covered_sites(noncritical, target, g).size();
    result.table = ContingencyTable2x2{with_critical, with_noncritical, critical.size() - with_critical,
                                       noncritical.size() - with_noncritical};
    auto test = g2_test(result.table);
    result.statistic = test.statistic;
    result.p_value = test.p_value;
    result.rate_critical = static_cast<double>(with_critical) / static_cast<double>(critical.size());
    result.rate_noncritical = static_cast<double>(with_noncritical) / static_cast<double>(noncritical.size());
    // Compare a/(a+c) with b/(b+d) exactly via cross-multiplication.
    const auto lhs = static_cast<unsigned __int128>(with_critical) * noncritical.size();
    const auto rhs = static_cast<unsigned __int128>(with_noncritical) * critical.size();
    if (lhs > rhs) result.direction = PrevalenceDirection::more_on_critical;
    else if (lhs < rhs) result.direction = PrevalenceDirection::more_on_noncritical;
    return result;
}

std::string_view significance_stars(double p) noexcept {
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    return "";
}

}  // namespace tracknet
