#include <doctest.h>

#include <sstream>

#include "test_support.hpp"
#include "tracknet/corpus.hpp"
#include "tracknet/error.hpp"
#include "tracknet/warc.hpp"

using namespace tracknet;
using namespace tracknet::testing;

namespace {

std::string edges_text(const IngestResult& r) {
    std::ostringstream out;
    write_edges_tsv(out, r.edges);
    return out.str();
}

}  // namespace

TEST_CASE("single response WARC yields one page") {
    WarcReader reader(test_data("warc/single_response.warc"));
    std::size_t responses = 0;
    while (auto record = reader.next()) {
        if (record->header("warc-type") && *record->header("warc-type") == "response") ++responses;
    }
    CHECK(responses == 1);
    CHECK_FALSE(reader.truncated());

    auto sources = discover_corpus(test_data("warc/single_response.warc"));
    auto result = ingest_corpus(sources, bundled_rules());
    CHECK(result.stats.pages == 1);
}

TEST_CASE("truncated WARC is counted, not fatal") {
    auto sources = discover_corpus(test_data("warc/truncated.warc.gz"));
    auto result = ingest_corpus(sources, bundled_rules());
    CHECK(result.stats.skipped_truncated == 1);
    CHECK(result.stats.pages >= 1);
}

TEST_CASE("http response decoding") {
    auto plain = parse_http_response("HTTP/1.1 200 OK\r\nContent-Type: text/html\r\n\r\n<p>x</p>");
    REQUIRE(plain.has_value());
    CHECK(plain->status == 200);
    CHECK(plain->headers.at("content-type") == "text/html");
    CHECK(plain->body == "<p>x</p>");

    auto chunked = parse_http_response(
        "HTTP/1.1 200 OK\r\nTransfer-Encoding: chunked\r\n\r\n4\r\nWiki\r\n5\r\npedia\r\n0\r\n\r\n");
    REQUIRE(chunked.has_value());
    CHECK(chunked->body == "Wikipedia");
    CHECK_FALSE(parse_http_response("not http at all").has_value());
}

TEST_CASE("small corpus matches the hand-written edge list") {
    auto result = ingest_corpus(discover_corpus(test_data("small_corpus")), bundled_rules());
    CHECK(result.stats.pages == 10);
    CHECK(result.edges.size() == 8);
    CHECK(edges_text(result) == read_file(test_data("small_expected_edges.tsv")));
    CHECK(result.site_pages.size() == 4);
    CHECK(result.site_pages.at(pld("delta.org")) == 3);
}

TEST_CASE("mini corpus golden output, independent of source order and threads") {
    const auto golden = read_file(test_data("mini_expected/edges.tsv"));
    auto sources = discover_corpus(test_data("mini_corpus"));
    REQUIRE(sources.size() == 3);
    auto forward = ingest_corpus(sources, bundled_rules());
    CHECK(edges_text(forward) == golden);
    CHECK(forward.stats.pages == 50);
    CHECK(forward.stats.duplicate_pages == 1);
    CHECK(forward.stats.skipped_non_html == 1);

    std::reverse(sources.begin(), sources.end());
    auto reversed = ingest_corpus(sources, bundled_rules(), IngestOptions{4, {}});
    CHECK(edges_text(reversed) == golden);
    CHECK(reversed.site_pages == forward.site_pages);

    std::ostringstream sites;
    write_sites_tsv(sites, forward.site_pages);
    CHECK(sites.str() == read_file(test_data("mini_expected/sites.tsv")));
}

TEST_CASE("aggregator merges pages by URL") {
    EdgeAggregator a, b;
    a.add_page("http://s.com/1", pld("s.com"), {pld("t.net")});
    b.add_page("http://s.com/1", pld("s.com"), {pld("u.net")});
    b.add_page("http://s.com/2", pld("s.com"), {pld("t.net")});
    a.merge(std::move(b));
    CHECK(a.page_count() == 2);
    auto edges = a.edges();
    REQUIRE(edges.size() == 2);
    CHECK(edges[0] == EmbeddingEdge{pld("s.com"), pld("t.net"), 2});
    CHECK(edges[1] == EmbeddingEdge{pld("s.com"), pld("u.net"), 1});
}

TEST_CASE("edge and site TSV round trip and validation") {
    std::vector<EmbeddingEdge> edges{{pld("b.com"), pld("x.net"), 3}, {pld("a.com"), pld("x.net"), 1}};
    std::ostringstream out;
    write_edges_tsv(out, edges);
    CHECK(out.str() == "a.com\tx.net\t1\nb.com\tx.net\t3\n");
    std::istringstream in(out.str());
    auto back = read_edges_tsv(in);
    REQUIRE(back.size() == 2);
    CHECK(back[1] == edges[0]);

    std::istringstream bad_count("a.com\tx.net\t0\n");
    CHECK_THROWS_AS(read_edges_tsv(bad_count), Error);
    std::istringstream bad_shape("a.com\tx.net\n");
    CHECK_THROWS_AS(read_edges_tsv(bad_shape), Error);
    CHECK_THROWS_AS(discover_corpus(test_data("does-not-exist")), Error);
}
