#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "tracknet/error.hpp"
#include "tracknet/stats.hpp"

using namespace tracknet;
using namespace tracknet::testing;

namespace {

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST_CASE("chi-square tail, one degree of freedom (scipy reference)") {
    CHECK(chi_square_1df_sf(0.5) == doctest::Approx(0.47950012218695337).epsilon(1e-12));
    CHECK(chi_square_1df_sf(3.841458820694124) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(chi_square_1df_sf(10.0) == doctest::Approx(0.001565402258002549).epsilon(1e-12));
    CHECK(chi_square_1df_sf(40.0) == doctest::Approx(2.5396285894708634e-10).epsilon(1e-10));
    CHECK(chi_square_1df_sf(0.0) == 1.0);
}

TEST_CASE("G2 reference values") {
    auto a = g2_test({20, 5, 10, 15});
    CHECK(a.statistic == doctest::Approx(8.630462173553422).epsilon(1e-12));
    CHECK(a.p_value == doctest::Approx(0.003305876912189962).epsilon(1e-10));
    auto b = g2_test({3, 7, 12, 2});
    CHECK(b.statistic == doctest::Approx(8.054492478409816).epsilon(1e-12));
    CHECK(b.p_value == doctest::Approx(0.004539095678043216).epsilon(1e-10));
    CHECK(g2_test({10, 10, 10, 10}).statistic == 0.0);
    CHECK(g2_test({10, 10, 10, 10}).p_value == 1.0);
    CHECK(std::abs(g2_test({10, 0, 0, 10}).statistic - 40.0 * std::log(2.0)) < 1e-9);
    CHECK_THROWS_AS(g2_test({0, 0, 5, 5}), Error);
    CHECK_THROWS_AS(g2_test({0, 5, 0, 5}), Error);
}

TEST_CASE("G2 is symmetric under transposition and row swaps") {
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        ContingencyTable2x2 t{1 + rng.uniform_index(50), 1 + rng.uniform_index(50), 1 + rng.uniform_index(50),
                              1 + rng.uniform_index(50)};
        const double g = g2_test(t).statistic;
        CHECK(g >= 0.0);
        CHECK(g2_test({t.a, t.c, t.b, t.d}).statistic == doctest::Approx(g).epsilon(1e-12));
        CHECK(g2_test({t.c, t.d, t.a, t.b}).statistic == doctest::Approx(g).epsilon(1e-12));
    }
}

TEST_CASE("point-biserial reference and Pearson identity") {
    std::vector<int> x{0, 0, 0, 1, 1, 1, 1, 0, 1, 0};
    std::vector<double> y{1.2, 2.3, 1.9, 3.4, 2.8, 4.1, 3.3, 2.2, 2.9, 1.5};
    auto r = point_biserial(x, y);
    CHECK(r.r == doctest::Approx(0.8600001256391802).epsilon(1e-12));
    CHECK(r.p_value == doctest::Approx(0.0014144789899646678).epsilon(1e-9));
    CHECK(r.n == 10);
    CHECK(r.r == doctest::Approx(pearson(std::vector<double>(x.begin(), x.end()), y)).epsilon(1e-12));

    std::vector<int> flipped;
    for (int v : x) flipped.push_back(1 - v);
    CHECK(point_biserial(flipped, y).r == doctest::Approx(-r.r).epsilon(1e-12));
}

TEST_CASE("point-biserial degenerate inputs") {
    std::vector<double> y{1, 2, 3, 4};
    CHECK_THROWS_AS(point_biserial(std::vector<int>{1, 1, 1, 1}, y), Error);
    CHECK_THROWS_AS(point_biserial(std::vector<int>{0, 1, 2, 1}, y), Error);
    CHECK_THROWS_AS(point_biserial(std::vector<int>{0, 1, 0}, y), Error);
    CHECK_THROWS_AS(point_biserial(std::vector<int>{0, 1}, std::vector<double>{1, 2}), Error);
    CHECK_THROWS_AS(point_biserial(std::vector<int>{0, 1, 0, 1}, std::vector<double>{5, 5, 5, 5}), Error);
}

TEST_CASE("assortativity equals Pearson over edge endpoint degrees") {
    // Site degrees 3,1,2; third-party degrees 3,2,1.
    std::vector<EmbeddingEdge> edges{{pld("a.com"), pld("x.net"), 1}, {pld("a.com"), pld("y.net"), 1},
                                     {pld("a.com"), pld("z.net"), 1}, {pld("b.com"), pld("x.net"), 1},
                                     {pld("c.com"), pld("x.net"), 1}, {pld("c.com"), pld("y.net"), 1}};
    auto g = build_bipartite(edges);
    auto r = assortativity(g, AssortativityOptions{2000, 3});
    CHECK(r.r == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(r.n == 6);
    CHECK(r.p_value > 0.0);
    CHECK(r.p_value <= 1.0);
    // Same seed, same p-value.
    CHECK(assortativity(g, AssortativityOptions{2000, 3}).p_value == r.p_value);

    std::vector<EmbeddingEdge> regular{{pld("a.com"), pld("x.net"), 1}, {pld("b.com"), pld("y.net"), 1}};
    CHECK_THROWS_WITH_AS(assortativity(build_bipartite(regular)), "degenerate degree sequence", Error);
}

TEST_CASE("conditional probability matrix") {
    std::vector<EmbeddingEdge> edges{{pld("a.com"), pld("x.net"), 1}, {pld("a.com"), pld("y.net"), 1},
                                     {pld("b.com"), pld("x.net"), 1}, {pld("c.com"), pld("y.net"), 1},
                                     {pld("d.com"), pld("x.net"), 1}};
    auto g = build_bipartite(edges);
    std::vector<PayLevelDomain> trackers{pld("x.net"), pld("y.net")};
    auto m = cond_prob_matrix(g, trackers);
    CHECK(m.labels == std::vector<std::string>{"x.net", "y.net"});
    CHECK(m.at(0, 0) == 1.0);
    CHECK(m.at(0, 1) == 0.5);                          // P(x | y)
    CHECK(m.at(1, 0) == doctest::Approx(1.0 / 3.0));  // P(y | x)
    std::vector<PayLevelDomain> missing{pld("nope.net")};
    CHECK_THROWS_AS(cond_prob_matrix(g, missing), Error);

    // Bayes: P(i|j) P(j) = P(j|i) P(i) on random graphs.
    Rng rng(4);
    auto b = random_bipartite(rng, 50, 6, 0.4);
    std::vector<PayLevelDomain> all(b.third_parties().begin(), b.third_parties().end());
    auto c = cond_prob_matrix(b, all);
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = 0; j < all.size(); ++j) {
            CHECK(c.at(i, j) * static_cast<double>(b.third_party_degree(j)) ==
                  doctest::Approx(c.at(j, i) * static_cast<double>(b.third_party_degree(i))));
        }
    }
}

TEST_CASE("prevalence test direction") {
    std::vector<EmbeddingEdge> edges;
    std::vector<PayLevelDomain> sites;
    std::vector<std::uint32_t> crit, noncrit;
    for (std::uint32_t i = 0; i < 200; ++i) {
        sites.push_back(pld(site_name(i)));
        const bool critical = i < 100;
        const bool has = critical ? i % 10 < 2 : i % 10 < 7;
        if (has) edges.push_back({pld(site_name(i)), pld("t.net"), 1});
        (critical ? crit : noncrit).push_back(i);
    }
    auto g = build_bipartite(edges, sites);
    auto res = prevalence_test(target_for_pld(g, pld("t.net")), DomainSet::from_indices(crit),
                               DomainSet::from_indices(noncrit), g);
    CHECK(res.direction == PrevalenceDirection::more_on_noncritical);
    CHECK(res.table.a == 20);
    CHECK(res.table.b == 70);
    CHECK(res.rate_critical == 0.2);
    CHECK(res.rate_noncritical == 0.7);
    CHECK(res.p_value < 0.001);
    CHECK(to_string(res.direction) == "more_on_noncritical");
}

TEST_CASE("significance stars") {
    CHECK(significance_stars(0.0005) == "***");
    CHECK(significance_stars(0.005) == "**");
    CHECK(significance_stars(0.03) == "*");
    CHECK(significance_stars(0.05).empty());
}
