#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tracknet/domain.hpp"
#include "tracknet/extractor.hpp"
#include "tracknet/suffix_rules.hpp"

namespace tracknet {

// A site embedding a third party on `page_count` distinct pages.
struct EmbeddingEdge {
    PayLevelDomain site;
    PayLevelDomain third_party;
    std::uint64_t page_count = 1;

    friend bool operator==(const EmbeddingEdge&, const EmbeddingEdge&) = default;
};

struct CorpusSource {
    enum class Kind { warc, manifest };
    Kind kind = Kind::warc;
    std::filesystem::path path;
};

// A directory yields every *.warc, *.warc.gz and *.tsv file in it (sorted);
// a file is classified by its extension.
std::vector<CorpusSource> discover_corpus(const std::filesystem::path& path);

struct IngestStats {
    std::uint64_t records = 0;          // readable response records / manifest rows
    std::uint64_t pages = 0;            // distinct HTML pages processed
    std::uint64_t duplicate_pages = 0;  // repeated URLs, merged into one page
    std::uint64_t skipped_truncated = 0;
    std::uint64_t skipped_non_html = 0;
    std::uint64_t skipped_no_pld = 0;
    std::uint64_t skipped_unreadable = 0;

    std::uint64_t skipped() const noexcept {
        return skipped_truncated + skipped_non_html + skipped_no_pld + skipped_unreadable;
    }
};

// Order-independent accumulator: pages are keyed by URL, so the same page
// seen twice (or by two workers) counts once and their embeddings merge.
class EdgeAggregator {
public:
    void add_page(const std::string& url, const PayLevelDomain& site, const std::set<PayLevelDomain>& third_parties);
    void merge(EdgeAggregator&& other);

    // Edges sorted by (site, third_party).
    std::vector<EmbeddingEdge> edges() const;
    // Distinct pages per site, including sites without any embedding.
    std::map<PayLevelDomain, std::uint64_t> site_pages() const;
    std::size_t page_count() const noexcept { return pages_.size(); }

private:
    struct Page {
        PayLevelDomain site;
        std::set<PayLevelDomain> third_parties;
    };
    std::unordered_map<std::string, Page> pages_;
};

struct IngestOptions {
    unsigned threads = 1;
    UriLiteralPattern pattern{};
};

struct IngestResult {
    std::vector<EmbeddingEdge> edges;                   // sorted by (site, third_party)
    std::map<PayLevelDomain, std::uint64_t> site_pages;  // every site with a readable page
    IngestStats stats;
};

// Runs extract_page over every HTML page of the sources and aggregates per
// (site, third party). Throws Error("no readable records") if nothing could
// be read at all.
IngestResult ingest_corpus(std::span<const CorpusSource> sources, const SuffixRuleSet& rules,
                           const IngestOptions& options = {});

// site_pld<TAB>third_party_pld<TAB>page_count, sorted.
void write_edges_tsv(std::ostream& out, std::span<const EmbeddingEdge> edges);
std::vector<EmbeddingEdge> read_edges_tsv(std::istream& in);

// site_pld<TAB>page_count, sorted.
void write_sites_tsv(std::ostream& out, const std::map<PayLevelDomain, std::uint64_t>& sites);
std::map<PayLevelDomain, std::uint64_t> read_sites_tsv(std::istream& in);

}  // namespace tracknet
