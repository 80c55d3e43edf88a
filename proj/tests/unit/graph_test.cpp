#include <doctest.h>

#include <sstream>

#include "test_support.hpp"
#include "tracknet/bipartite.hpp"
#include "tracknet/cooccurrence.hpp"
#include "tracknet/error.hpp"
#include "tracknet/hyperlink.hpp"

using namespace tracknet;
using namespace tracknet::testing;

namespace {

BipartiteGraph small_graph() {
    std::ifstream in(test_data("small_expected_edges.tsv"));
    auto edges = read_edges_tsv(in);
    return build_bipartite(edges, std::vector<PayLevelDomain>{pld("empty.org")});
}

}  // namespace

TEST_CASE("bipartite graph from the small edge list") {
    auto g = small_graph();
    CHECK(g.num_sites() == 5);
    CHECK(g.num_third_parties() == 5);
    CHECK(g.num_edges() == 8);
    auto ga = *g.third_party_index(pld("google-analytics.com"));
    CHECK(g.third_party_degree(ga) == 2);
    CHECK(g.site_degree(*g.site_index(pld("empty.org"))) == 0);
    CHECK(g.has_edge(*g.site_index(pld("delta.org")), *g.third_party_index(pld("facebook.net"))));
    auto alpha = *g.site_index(pld("alpha.com"));
    CHECK(std::vector<std::uint64_t>(g.page_counts_of(alpha).begin(), g.page_counts_of(alpha).end()) ==
          std::vector<std::uint64_t>{1, 2, 1});

    auto ccdf = degree_ccdf(g, Side::left);
    CHECK(ccdf == std::vector<CcdfPoint>{{0, 1.0}, {1, 0.8}, {2, 0.6}, {3, 0.2}});
}

TEST_CASE("bipartite construction rejects duplicates and self edges") {
    std::vector<EmbeddingEdge> dup{{pld("a.com"), pld("t.net"), 1}, {pld("a.com"), pld("t.net"), 2}};
    CHECK_THROWS_AS(build_bipartite(dup), Error);
    std::vector<EmbeddingEdge> self{{pld("a.com"), pld("a.com"), 1}};
    CHECK_THROWS_AS(build_bipartite(self), Error);
}

TEST_CASE("projection matches the dense product") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        auto b = random_bipartite(rng, 30, 12, 0.25);
        auto a = one_mode_projection(b);
        REQUIRE(a.num_vertices() == b.num_third_parties());
        for (std::size_t i = 0; i < b.num_third_parties(); ++i) {
            CHECK(a.diagonal(i) == b.third_party_degree(i));
            for (std::size_t j = i + 1; j < b.num_third_parties(); ++j) {
                std::uint64_t both = 0;
                for (std::size_t s = 0; s < b.num_sites(); ++s) both += b.has_edge(s, i) && b.has_edge(s, j);
                CHECK(a.weight(i, j).value_or(0) == both);
            }
        }
    }
}

TEST_CASE("k-core peeling") {
    // Triangle 0-1-2 with a tail 2-3-4 and an isolated pair 5-6.
    auto g = make_graph(7, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {2, 3, 1}, {3, 4, 1}, {5, 6, 2}});
    auto core = k_core(g, 2);
    CHECK(core.num_vertices() == 3);
    CHECK(core.num_edges() == 3);
    CHECK(core.vertex(2).name() == tracker_name(2));
    CHECK(k_core(g, 3).num_vertices() == 0);
    CHECK(k_core(g, 1).num_vertices() == 7);

    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        auto r = planted_graph(rng, 2, 15, 0.2, 0.05);
        auto c = k_core(r, 3);
        for (std::size_t v = 0; v < c.num_vertices(); ++v) CHECK(c.degree(v) >= 3);
    }
}

TEST_CASE("cooccurrence graph invariants") {
    CHECK_THROWS_AS(make_graph(3, {{0, 0, 1}}), Error);
    CHECK_THROWS_AS(make_graph(3, {{0, 1, 1}, {1, 0, 1}}), Error);
    CHECK_THROWS_AS(make_graph(3, {{0, 1, 0}}), Error);
    CHECK_THROWS_AS(make_graph(3, {{0, 5, 1}}), Error);
    auto g = make_graph(3, {{2, 0, 4}, {0, 1, 1}});
    CHECK(g.edges()[0] == WeightedEdge{0, 1, 1});
    CHECK(g.edges()[1] == WeightedEdge{0, 2, 4});
    CHECK(g.total_weight() == 5);
}

TEST_CASE("hyperlink graph") {
    std::istringstream in("a.com\tb.com\na.com\tb.com\nb.com\tb.com\nc.com\ta.com\n");
    auto links = read_hyperlinks_tsv(in);
    auto g = HyperlinkGraph::from_links(links, false, std::vector<PayLevelDomain>{pld("d.com")});
    CHECK(g.num_vertices() == 4);
    CHECK(g.num_edges() == 2);
    CHECK(g.out_degree(*g.index_of(pld("b.com"))) == 0);
    auto kept = HyperlinkGraph::from_links(links, true);
    CHECK(kept.num_edges() == 3);
}
