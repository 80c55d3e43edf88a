#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tracknet/bipartite.hpp"
#include "tracknet/rank.hpp"

namespace tracknet {

// Observed 2x2 counts laid out as
//   [ a  b ]
//   [ c  d ]
struct ContingencyTable2x2 {
    std::uint64_t a = 0, b = 0, c = 0, d = 0;

    std::uint64_t total() const noexcept { return a + b + c + d; }
};

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// Upper tail of the chi-square distribution with one degree of freedom.
double chi_square_1df_sf(double x);

// Log-likelihood ratio G^2 = 2 sum O ln(O/E) with expectations from the
// margins; p from chi-square with one degree of freedom. Throws Error when a
// row or column total is zero.
TestResult g2_test(const ContingencyTable2x2& table);

struct CorrelationResult {
    double r = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
};

struct AssortativityOptions {
    std::size_t permutations = 1000;
    std::uint64_t seed = 42;
};

// Pearson correlation of (site degree, third-party degree) over all edges.
// The p-value is a two-sided permutation test that shuffles third-party
// endpoint degrees across edges. Throws Error("degenerate degree sequence")
// if either side is constant.
CorrelationResult assortativity(const BipartiteGraph& g, const AssortativityOptions& options = {});

// Square matrix with labelled rows/columns, stored row-major.
struct LabelledMatrix {
    std::vector<std::string> labels;
    std::vector<double> values;

    double at(std::size_t row, std::size_t col) const { return values[row * labels.size() + col]; }
};

// Entry (i, j) is P(t_i | t_j) = |sites with both| / |sites with t_j|.
// Throws Error naming a tracker that is missing or has no site.
LabelledMatrix cond_prob_matrix(const BipartiteGraph& g, std::span<const PayLevelDomain> trackers);

// Point-biserial correlation (M1 - M0) / s_n * sqrt(n1 n0 / n^2) with the
// population standard deviation; two-sided p from Student's t with n - 2
// degrees of freedom. Throws Error on mismatched lengths, n < 3, values
// other than 0/1, an empty group or zero variance.
CorrelationResult point_biserial(std::span<const int> dichotomous, std::span<const double> continuous);

enum class PrevalenceDirection { more_on_critical, more_on_noncritical, none };

std::string_view to_string(PrevalenceDirection direction) noexcept;

struct PrevalenceResult {
    PrevalenceDirection direction = PrevalenceDirection::none;
    double statistic = 0.0;
    double p_value = 1.0;
    // a: critical with, b: noncritical with, c: critical without, d: noncritical without
    ContingencyTable2x2 table;
    double rate_critical = 0.0;
    double rate_noncritical = 0.0;
};

// G^2 test of whether the target's presence is independent of the domain
// set (critical vs noncritical).
PrevalenceResult prevalence_test(const ShareTarget& target, const DomainSet& critical, const DomainSet& noncritical,
                                 const BipartiteGraph& g);

// "***" for p < 0.001, "**" for p < 0.01, "*" for p < 0.05, "" otherwise.
std::string_view significance_stars(double p_value) noexcept;

}  // namespace tracknet
