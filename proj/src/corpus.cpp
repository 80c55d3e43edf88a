#include "tracknet/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <future>
#include <istream>
#include <ostream>
#include <sstream>

#include "tracknet/error.hpp"
#include "tracknet/warc.hpp"

namespace tracknet {
namespace {

namespace fs = std::filesystem;

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::optional<CorpusSource> classify(const fs::path& path) {
    auto name = path.filename().string();
    if (ends_with(name, ".warc") || ends_with(name, ".warc.gz")) return CorpusSource{CorpusSource::Kind::warc, path};
    if (ends_with(name, ".tsv")) return CorpusSource{CorpusSource::Kind::manifest, path};
    return std::nullopt;
}

bool is_html_content_type(const std::map<std::string, std::string>& headers) {
    auto it = headers.find("content-type");
    if (it == headers.end()) return false;
    std::string value = it->second;
    std::transform(value.begin(), value.end(), value.begin(), [](char c) {
        return c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c;
    });
    return value.find("text/html") != std::string::npos;
}

struct RawPage {
    std::string url;
    std::string body;
};

// Extracts a batch of pages with `threads` workers, each into its own
// aggregator, then folds them into `into`.
void process_batch(std::vector<RawPage>& batch, const SuffixRuleSet& rules, const IngestOptions& options,
                   EdgeAggregator& into, IngestStats& stats) {
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(options.threads, batch.size()));
    std::vector<std::future<std::pair<EdgeAggregator, std::uint64_t>>> futures;
    for (std::size_t w = 0; w < workers; ++w) {
        futures.push_back(std::async(workers == 1 ? std::launch::deferred : std::launch::async, [&, w] {
            EdgeAggregator local;
            std::uint64_t no_pld = 0;
            for (std::size_t i = w; i < batch.size(); i += workers) {
                auto page = make_page_record(batch[i].url, std::move(batch[i].body), rules);
                if (!page) {
                    ++no_pld;
                    continue;
                }
                local.add_page(page->url, page->site_pld, extract_page(*page, rules, options.pattern));
            }
            return std::make_pair(std::move(local), no_pld);
        }));
    }
    for (auto& f : futures) {
        auto [local, no_pld] = f.get();
        stats.skipped_no_pld += no_pld;
        into.merge(std::move(local));
    }
    batch.clear();
}

constexpr std::size_t kBatchSize = 512;

void ingest_warc(const fs::path& path, const SuffixRuleSet& rules, const IngestOptions& options, EdgeAggregator& agg,
                 IngestStats& stats) {
    WarcReader reader(path);
    std::vector<RawPage> batch;
    while (auto record = reader.next()) {
        const auto* type = record->header("warc-type");
        if (!type || *type != "response") continue;
        auto response = parse_http_response(record->block);
        if (!response) {
            ++stats.skipped_unreadable;
            continue;
        }
        ++stats.records;
        if (!is_html_content_type(response->headers)) {
            ++stats.skipped_non_html;
            continue;
        }
        const auto* uri = record->header("warc-target-uri");
        if (!uri) {
            ++stats.skipped_no_pld;
            continue;
        }
        std::string url = *uri;
        // WARC 0.x and some writers wrap the URI in angle brackets.
        if (url.size() >= 2 && url.front() == '<' && url.back() == '>') url = url.substr(1, url.size() - 2);
        batch.push_back(RawPage{std::move(url), std::move(response->body)});
        if (batch.size() >= kBatchSize) process_batch(batch, rules, options, agg, stats);
    }
    if (reader.truncated()) ++stats.skipped_truncated;
    process_batch(batch, rules, options, agg, stats);
}

void ingest_manifest(const fs::path& path, const SuffixRuleSet& rules, const IngestOptions& options,
                     EdgeAggregator& agg, IngestStats& stats) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open manifest: " + path.string());
    const auto base = path.parent_path();
    std::vector<RawPage> batch;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            ++stats.skipped_unreadable;
            continue;
        }
        std::ifstream page(base / line.substr(tab + 1), std::ios::binary);
        if (!page) {
            ++stats.skipped_unreadable;
            continue;
        }
        ++stats.records;
        std::ostringstream body;
        body << page.rdbuf();
        batch.push_back(RawPage{line.substr(0, tab), body.str()});
        if (batch.size() >= kBatchSize) process_batch(batch, rules, options, agg, stats);
    }
    process_batch(batch, rules, options, agg, stats);
}

std::uint64_t parse_count(std::string_view text, std::size_t line_no) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error("line " + std::to_string(line_no) + ": bad count '" + std::string(text) + "'");
    }
    return value;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
    }
    return fields;
}

}  // namespace

std::vector<CorpusSource> discover_corpus(const fs::path& path) {
    std::vector<CorpusSource> sources;
    if (fs::is_directory(path)) {
        std::vector<fs::path> entries;
        for (const auto& entry : fs::directory_iterator(path)) {
            if (entry.is_regular_file()) entries.push_back(entry.path());
        }
        std::sort(entries.begin(), entries.end());
        for (const auto& p : entries) {
            if (auto source = classify(p)) sources.push_back(*source);
        }
    } else if (fs::exists(path)) {
        if (auto source = classify(path)) sources.push_back(*source);
        else throw Error("unrecognized corpus file (expected .warc, .warc.gz or .tsv): " + path.string());
    } else {
        throw Error("corpus path does not exist: " + path.string());
    }
    return sources;
}

void EdgeAggregator::add_page(const std::string& url, const PayLevelDomain& site,
                              const std::set<PayLevelDomain>& third_parties) {
    auto [it, inserted] = pages_.try_emplace(url, Page{site, {}});
    it->second.third_parties.insert(third_parties.begin(), third_parties.end());
}

void EdgeAggregator::merge(EdgeAggregator&& other) {
    if (pages_.empty()) {
        pages_ = std::move(other.pages_);
        return;
    }
    for (auto& [url, page] : other.pages_) {
        auto [it, inserted] = pages_.try_emplace(url, std::move(page));
        if (!inserted) it->second.third_parties.insert(page.third_parties.begin(), page.third_parties.end());
    }
    other.pages_.clear();
}

std::vector<EmbeddingEdge> EdgeAggregator::edges() const {
    std::map<std::pair<PayLevelDomain, PayLevelDomain>, std::uint64_t> counts;
    for (const auto& [url, page] : pages_) {
        for (const auto& tp : page.third_parties) {
            if (tp == page.site) continue;
            ++counts[{page.site, tp}];
        }
    }
    std::vector<EmbeddingEdge> out;
    out.reserve(counts.size());
    for (const auto& [key, count] : counts) out.push_back(EmbeddingEdge{key.first, key.second, count});
    return out;
}

std::map<PayLevelDomain, std::uint64_t> EdgeAggregator::site_pages() const {
    std::map<PayLevelDomain, std::uint64_t> out;
    for (const auto& [url, page] : pages_) ++out[page.site];
    return out;
}

IngestResult ingest_corpus(std::span<const CorpusSource> sources, const SuffixRuleSet& rules,
                           const IngestOptions& options) {
    IngestStats stats;
    EdgeAggregator agg;
    for (const auto& source : sources) {
        try {
            if (source.kind == CorpusSource::Kind::warc) ingest_warc(source.path, rules, options, agg, stats);
            else ingest_manifest(source.path, rules, options, agg, stats);
        } catch (const Error&) {
            ++stats.skipped_unreadable;
        }
    }
    if (stats.records == 0) throw Error("no readable records");
    IngestResult result;
    result.edges = agg.edges();
    result.site_pages = agg.site_pages();
    stats.pages = agg.page_count();
    stats.duplicate_pages = stats.records - stats.skipped_non_html - stats.skipped_no_pld - stats.pages;
    result.stats = stats;
    return result;
}

void write_edges_tsv(std::ostream& out, std::span<const EmbeddingEdge> edges) {
    std::vector<const EmbeddingEdge*> sorted;
    sorted.reserve(edges.size());
    for (const auto& e : edges) sorted.push_back(&e);
    std::sort(sorted.begin(), sorted.end(), [](const EmbeddingEdge* a, const EmbeddingEdge* b) {
        return std::tie(a->site, a->third_party) < std::tie(b->site, b->third_party);
    });
    for (const auto* e : sorted) out << e->site.name() << '\t' << e->third_party.name() << '\t' << e->page_count << '\n';
}

std::vector<EmbeddingEdge> read_edges_tsv(std::istream& in) {
    std::vector<EmbeddingEdge> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_tabs(line);
        if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
            throw Error("edge TSV line " + std::to_string(line_no) + ": expected site, third party, page count");
        }
        auto count = parse_count(fields[2], line_no);
        if (count == 0) throw Error("edge TSV line " + std::to_string(line_no) + ": page count must be positive");
        edges.push_back(EmbeddingEdge{PayLevelDomain(std::string(fields[0])), PayLevelDomain(std::string(fields[1])), count});
    }
    return edges;
}

void write_sites_tsv(std::ostream& out, const std::map<PayLevelDomain, std::uint64_t>& sites) {
    for (const auto& [site, count] : sites) out << site.name() << '\t' << count << '\n';
}

std::map<PayLevelDomain, std::uint64_t> read_sites_tsv(std::istream& in) {
    std::map<PayLevelDomain, std::uint64_t> sites;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_tabs(line);
        if (fields.size() != 2 || fields[0].empty()) {
            throw Error("sites TSV line " + std::to_string(line_no) + ": expected site, page count");
        }
        sites[PayLevelDomain(std::string(fields[0]))] = parse_count(fields[1], line_no);
    }
    return sites;
}

}  // namespace tracknet
