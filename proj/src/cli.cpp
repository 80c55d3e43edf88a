#include "tracknet/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <zlib.h>

#include <algorithm>
#include <cstdlib>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "tracknet/bipartite.hpp"
#include "tracknet/cluster.hpp"
#include "tracknet/corpus.hpp"
#include "tracknet/csv.hpp"
#include "tracknet/error.hpp"
#include "tracknet/hyperlink.hpp"
#include "tracknet/power_law.hpp"
#include "tracknet/rank.hpp"
#include "tracknet/stats.hpp"
#include "tracknet/suffix_rules.hpp"

#ifndef TRACKNET_DATA_DIR
#define TRACKNET_DATA_DIR "data"
#endif

namespace tracknet {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// Bundled data files; the TRACKNET_DATA_DIR environment variable overrides
// the build-time location (installed Python packages set it).
fs::path data_dir() {
    if (const char* env = std::getenv("TRACKNET_DATA_DIR"); env && *env) return env;
    return TRACKNET_DATA_DIR;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double parse_number(const std::string& text, std::string_view what) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value))
        throw Error("invalid number '" + text + "' in " + std::string(what));
    return value;
}

}  // namespace

std::map<std::string, std::string> read_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read config file " + path.string());
    std::map<std::string, std::string> entries;
    std::string line;
    for (std::size_t number = 1; std::getline(in, line); ++number) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto text = trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw Error(path.string() + ":" + std::to_string(number) + ": expected key=value");
        auto key = trim(std::string_view(text).substr(0, eq));
        if (key.empty()) throw Error(path.string() + ":" + std::to_string(number) + ": empty key");
        entries[key] = trim(std::string_view(text).substr(eq + 1));
    }
    return entries;
}

std::vector<CategoryEntry> read_category_map(std::istream& in) {
    static constexpr std::string_view required[] = {"pld", "category", "criticality"};
    const auto table = read_csv_table(in, required, "category map");
    const auto pld_col = *table.column("pld");
    const auto cat_col = *table.column("category");
    const auto crit_col = *table.column("criticality");
    std::map<std::string, Criticality> seen;
    std::vector<CategoryEntry> out;
    for (const auto& row : table.rows) {
        std::string pld;
        for (const char c : trim(row[pld_col])) pld.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        if (!is_canonical_host(pld)) throw Error("category map: invalid site PLD '" + row[pld_col] + "'");
        const auto category = trim(row[cat_col]);
        if (category.empty()) throw Error("category map: empty category for " + pld);
        Criticality crit;
        const auto text = trim(row[crit_col]);
        if (text == "highly_critical") {
            crit = Criticality::highly_critical;
        } else if (text == "less_critical") {
            crit = Criticality::less_critical;
        } else {
            throw Error("category map: criticality must be highly_critical or less_critical, got '" + text + "'");
        }
        auto [it, inserted] = seen.emplace(category, crit);
        if (!inserted && it->second != crit) throw Error("category map: category '" + category + "' has both criticalities");
        out.push_back({PayLevelDomain(pld), category, crit});
    }
    return out;
}

std::vector<CountryRow> read_country_table(std::istream& in) {
    static constexpr std::string_view required[] = {"tld", "country"};
    const auto table = read_csv_table(in, required, "country table");
    const auto tld_col = *table.column("tld");
    const auto country_col = *table.column("country");
    std::vector<CountryRow> out;
    std::set<std::string> seen;
    for (const auto& row : table.rows) {
        auto tld = trim(row[tld_col]);
        if (!tld.empty() && tld.front() == '.') tld.erase(0, 1);
        if (tld.empty() || !seen.insert(tld).second) throw Error("country table: empty or repeated TLD '" + tld + "'");
        out.push_back({tld, trim(row[country_col])});
    }
    return out;
}

std::vector<CountryIndicators> read_country_indicators(std::istream& in, const std::vector<CountryRow>& countries) {
    std::vector<std::string_view> required{"tld"};
    for (const auto& c : kIndicatorColumns) required.push_back(c);
    const auto table = read_csv_table(in, required, "country indicators");
    std::set<std::string> known;
    for (const auto& c : countries) known.insert(c.tld);
    std::vector<CountryIndicators> out;
    std::set<std::string> seen;
    for (const auto& row : table.rows) {
        auto tld = trim(row[*table.column("tld")]);
        if (!tld.empty() && tld.front() == '.') tld.erase(0, 1);
        if (!known.contains(tld)) throw Error("country indicators: TLD '" + tld + "' is not in the country table");
        if (!seen.insert(tld).second) throw Error("country indicators: repeated TLD '" + tld + "'");
        CountryIndicators ci{tld, {}};
        for (const auto& name : kIndicatorColumns)
            ci.values.push_back(parse_number(trim(row[*table.column(name)]), "country indicators column " + name));
        out.push_back(std::move(ci));
    }
    return out;
}

namespace {

json input_record(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    uLong crc = crc32(0L, Z_NULL, 0);
    std::uint64_t bytes = 0;
    std::vector<char> buffer(1 << 16);
    while (in) {
        in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
        const auto n = in.gcount();
        if (n <= 0) break;
        crc = crc32(crc, reinterpret_cast<const Bytef*>(buffer.data()), static_cast<uInt>(n));
        bytes += static_cast<std::uint64_t>(n);
    }
    char hex[9];
    std::snprintf(hex, sizeof hex, "%08lx", static_cast<unsigned long>(crc));
    return {{"file", path.filename().string()}, {"bytes", bytes}, {"crc32", hex}};
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw Error("cannot write " + path.string());
}

void write_json(const fs::path& path, const json& value) { write_text(path, value.dump(2) + "\n"); }

std::string csv_line(const std::vector<std::string>& fields) {
    std::ostringstream out;
    write_csv_row(out, fields);
    return out.str();
}

class Analysis {
public:
    Analysis(const RunConfig& config, std::string command, std::ostream& log)
        : config_(config), command_(std::move(command)), log_(log) {}

    fs::path out(const std::string& name) const { return config_.out_dir / name; }

    // Resolves an input produced by an earlier stage.
    fs::path staged(const std::string& explicit_path, const std::string& file, const std::string& producer) const {
        fs::path path = explicit_path.empty() ? out(file) : fs::path(explicit_path);
        if (!fs::exists(path)) throw Error("missing " + path.string() + "; run `tracknet " + producer + "` first");
        return path;
    }

    // Resolves a user-supplied input.
    fs::path supplied(const std::string& path, const std::string& flag) const {
        if (path.empty()) throw Error(command_ + " needs --" + flag);
        if (!fs::exists(path)) throw Error("--" + flag + " file not found: " + path);
        return path;
    }

    std::ifstream open(const fs::path& path) {
        inputs_.push_back(input_record(path));
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error("cannot read " + path.string());
        return in;
    }

    BipartiteGraph bipartite() {
        auto edges_path = staged(config_.edges, "edges.tsv", "extract");
        auto in = open(edges_path);
        const auto edges = read_edges_tsv(in);
        std::vector<PayLevelDomain> extra;
        const fs::path sites_path = config_.sites.empty() ? out("sites.tsv") : fs::path(config_.sites);
        if (!config_.sites.empty() || fs::exists(sites_path)) {
            auto sites_in = open(staged(config_.sites, "sites.tsv", "extract"));
            for (const auto& [site, pages] : read_sites_tsv(sites_in)) extra.push_back(site);
        }
        return build_bipartite(edges, extra);
    }

    LabelTable labels() {
        auto in = open(supplied(config_.labels, "labels"));
        return LabelTable::read_csv(in);
    }

    RankVector ranks() {
        auto in = open(staged(config_.ranks, "ranks.tsv", "analyze pagerank"));
        return read_rank_tsv(in);
    }

    json report(json body) const {
        json r = {{"command", command_}, {"config", config_json()}, {"inputs", inputs_}};
        r.update(body);
        return r;
    }

    void emit_json(const std::string& name, json body) {
        write_json(out(name), report(std::move(body)));
        log_ << "wrote " << out(name).string() << "\n";
    }

    void emit_text(const std::string& name, const std::string& content) {
        fs::create_directories(out(name).parent_path());
        write_text(out(name), content);
        log_ << "wrote " << out(name).string() << "\n";
    }

    json config_json() const {
        const auto& c = config_;
        return {
            {"seed", c.seed},
            {"damping", c.damping},
            {"tolerance", c.tolerance},
            {"max_iterations", c.max_iterations},
            {"dangling", c.dangling},
            {"keep_self_loops", c.keep_self_loops},
            {"top", c.top},
            {"dominance_top", c.dominance_top},
            {"companies", c.companies},
            {"permutations", c.permutations},
            {"exact_mle", c.exact_mle},
            {"powerlaw_min_samples", c.powerlaw_min_samples},
            {"condprob_top", c.condprob_top},
            {"prevalence_level", c.prevalence_level},
            {"g2_alpha", c.g2_alpha},
            {"bonferroni", !c.no_bonferroni},
            {"resolutions", c.resolutions},
            {"louvain_seeds", c.louvain_seeds},
            {"weighted", !c.unweighted},
            {"core_order", c.core_order},
            {"core_k", c.core_k},
        };
    }

    const RunConfig& config() const { return config_; }
    std::ostream& log() { return log_; }

private:
    const RunConfig& config_;
    std::string command_;
    std::ostream& log_;
    json inputs_ = json::array();
};

json prevalence_json(const PrevalenceResult& p) {
    return {{"critical_with", p.table.a},   {"noncritical_with", p.table.b}, {"critical_without", p.table.c},
            {"noncritical_without", p.table.d}, {"rate_critical", p.rate_critical}, {"rate_noncritical", p.rate_noncritical},
            {"g2", p.statistic},               {"p_value", p.p_value},          {"stars", significance_stars(p.p_value)},
            {"direction", to_string(p.direction)}};
}

std::string share_csv(const CompanyShareTable& table) {
    std::ostringstream out;
    write_company_shares_csv(out, table);
    return out.str();
}

// ---------------------------------------------------------------- extract

void cmd_extract(const RunConfig& c, std::ostream& log) {
    if (c.corpus.empty()) throw Error("extract needs --corpus");
    std::vector<CorpusSource> sources;
    for (const auto& path : c.corpus) {
        if (!fs::exists(path)) throw Error("corpus path not found: " + path);
        auto found = discover_corpus(path);
        sources.insert(sources.end(), found.begin(), found.end());
    }
    if (sources.empty()) throw Error("no corpus files (*.warc, *.warc.gz, *.tsv) found");
    const fs::path psl = c.suffix_list.empty() ? data_dir() / "public_suffix_list.dat" : fs::path(c.suffix_list);
    if (!fs::exists(psl)) throw Error("public suffix list not found: " + psl.string());
    const auto rules = SuffixRuleSet::load(psl);

    IngestOptions options;
    options.threads = c.threads;
    const auto result = ingest_corpus(sources, rules, options);

    fs::create_directories(c.out_dir);
    {
        std::ostringstream edges;
        write_edges_tsv(edges, result.edges);
        write_text(c.out_dir / "edges.tsv", edges.str());
        std::ostringstream sites;
        write_sites_tsv(sites, result.site_pages);
        write_text(c.out_dir / "sites.tsv", sites.str());
    }
    std::set<PayLevelDomain> third_parties;
    for (const auto& e : result.edges) third_parties.insert(e.third_party);
    json inputs = json::array();
    for (const auto& s : sources) inputs.push_back(input_record(s.path));
    inputs.push_back(input_record(psl));
    const auto& st = result.stats;
    json summary = {
        {"command", "extract"},
        {"inputs", inputs},
        {"pages", st.pages},
        {"skipped", st.skipped()},
        {"skipped_detail",
         {{"truncated", st.skipped_truncated},
          {"non_html", st.skipped_non_html},
          {"no_pld", st.skipped_no_pld},
          {"unreadable", st.skipped_unreadable}}},
        {"records", st.records},
        {"duplicate_pages", st.duplicate_pages},
        {"sites", result.site_pages.size()},
        {"third_parties", third_parties.size()},
        {"edges", result.edges.size()},
    };
    write_json(c.out_dir / "summary.json", summary);
    log << "extract: " << st.pages << " pages, " << st.skipped() << " skipped, " << result.edges.size() << " edges -> "
        << c.out_dir.string() << "\n";
}

// ---------------------------------------------------------------- analyze

PageRankOptions pagerank_options(const RunConfig& c) {
    PageRankOptions o;
    o.damping = c.damping;
    o.tolerance = c.tolerance;
    o.max_iterations = c.max_iterations;
    if (c.dangling == "uniform") {
        o.dangling = DanglingPolicy::uniform;
    } else if (c.dangling == "self_loop") {
        o.dangling = DanglingPolicy::self_loop;
    } else {
        throw Error("--dangling must be uniform or self_loop");
    }
    return o;
}

void cmd_pagerank(Analysis& a) {
    const auto& c = a.config();
    auto in = a.open(a.supplied(c.hyperlinks, "hyperlinks"));
    const auto links = read_hyperlinks_tsv(in);
    std::vector<PayLevelDomain> extra;
    const fs::path sites_path = c.sites.empty() ? a.out("sites.tsv") : fs::path(c.sites);
    if (!c.sites.empty() || fs::exists(sites_path)) {
        auto sites_in = a.open(a.staged(c.sites, "sites.tsv", "extract"));
        for (const auto& [site, pages] : read_sites_tsv(sites_in)) extra.push_back(site);
    }
    const auto graph = HyperlinkGraph::from_links(links, c.keep_self_loops, extra);
    const auto result = pagerank(graph, pagerank_options(c));
    std::ostringstream ranks;
    write_rank_tsv(ranks, result.ranks);
    a.emit_text("ranks.tsv", ranks.str());
    a.emit_json("pagerank.json", {{"vertices", graph.num_vertices()},
                                  {"edges", graph.num_edges()},
                                  {"iterations", result.iterations},
                                  {"converged", result.converged},
                                  {"residual", result.residual}});
    if (!result.converged)
        a.log() << "warning: pagerank did not converge within " << c.max_iterations << " iterations (residual "
                << result.residual << ")\n";
}

void cmd_rank_share(Analysis& a) {
    const auto b = a.bipartite();
    const auto labels = a.labels();
    const auto r = a.ranks();
    const auto all = DomainSet::all(b);

    struct Row {
        std::string pld;
        double rank_share, domain_share;
        bool tracker;
    };
    std::vector<Row> rows;
    for (std::uint32_t j = 0; j < b.num_third_parties(); ++j) {
        if (b.third_party_degree(j) == 0) continue;
        const ShareTarget t{b.third_party(j).name(), {j}};
        const auto* label = labels.find(b.third_party(j));
        rows.push_back({t.name, rank_share(all, t, b, r), domain_share(all, t, b), label && label->is_tracker});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
        if (x.rank_share != y.rank_share) return x.rank_share > y.rank_share;
        return x.pld < y.pld;
    });
    if (rows.size() > a.config().top) rows.resize(a.config().top);

    std::string csv = csv_line({"third_party", "rank_share", "domain_share", "is_tracker"});
    json top = json::array();
    for (const auto& row : rows) {
        csv += csv_line({row.pld, format_double(row.rank_share), format_double(row.domain_share), row.tracker ? "true" : "false"});
        top.push_back({{"third_party", row.pld}, {"rank_share", row.rank_share}, {"domain_share", row.domain_share},
                       {"is_tracker", row.tracker}});
    }
    a.emit_text("top_third_parties.csv", csv);

    const auto trackers = filter_trackers(b, labels).graph;
    const auto table = company_shares(DomainSet::all(trackers), labels, trackers, r);
    a.emit_text("company_shares.csv", share_csv(table));
    json companies = json::array();
    for (std::size_t i = 0; i < std::min(table.rows.size(), a.config().top); ++i)
        companies.push_back({{"company", table.rows[i].company},
                             {"rank_share", table.rows[i].rank_share},
                             {"domain_share", table.rows[i].domain_share}});
    a.emit_json("rank_share.json", {{"sites", b.num_sites()},
                                    {"third_parties", b.num_third_parties()},
                                    {"top_third_parties", top},
                                    {"top_companies", companies}});
}

std::vector<PayLevelDomain> trackers_by_degree(const BipartiteGraph& t, std::size_t limit) {
    std::vector<std::uint32_t> order;
    for (std::uint32_t j = 0; j < t.num_third_parties(); ++j)
        if (t.third_party_degree(j) > 0) order.push_back(j);
    std::stable_sort(order.begin(), order.end(),
                     [&](auto x, auto y) { return t.third_party_degree(x) > t.third_party_degree(y); });
    if (order.size() > limit) order.resize(limit);
    std::vector<PayLevelDomain> out;
    for (auto j : order) out.push_back(t.third_party(j));
    return out;
}

void cmd_condprob(Analysis& a) {
    const auto b = a.bipartite();
    const auto labels = a.labels();
    const auto t = filter_trackers(b, labels).graph;
    const auto trackers = trackers_by_degree(t, a.config().condprob_top);
    if (trackers.empty()) throw Error("condprob: no tracker embedded on any site");
    const auto m = cond_prob_matrix(t, trackers);

    std::vector<std::string> header{""};
    header.insert(header.end(), m.labels.begin(), m.labels.end());
    std::string csv = csv_line(header);
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
        std::vector<std::string> row{m.labels[i]};
        for (std::size_t k = 0; k < m.labels.size(); ++k) row.push_back(format_double(m.at(i, k)));
        csv += csv_line(row);
    }
    a.emit_text("condprob.csv", csv);
    json list = json::array();
    for (const auto& pld : trackers) list.push_back({{"tracker", pld.name()}, {"sites", t.third_party_degree(*t.third_party_index(pld))}});
    a.emit_json("condprob.json", {{"trackers", list}});
}

std::string ccdf_csv(const std::vector<CcdfPoint>& points) {
    std::string csv = csv_line({"degree", "fraction"});
    for (const auto& p : points) csv += csv_line({std::to_string(p.degree), format_double(p.fraction)});
    return csv;
}

void cmd_powerlaw(Analysis& a) {
    const auto b = a.bipartite();
    const auto labels = a.labels();
    const auto t = filter_trackers(b, labels).graph;
    std::vector<std::uint64_t> degrees;
    for (std::size_t j = 0; j < t.num_third_parties(); ++j)
        if (t.third_party_degree(j) > 0) degrees.push_back(t.third_party_degree(j));
    PowerLawOptions options;
    options.exact_mle = a.config().exact_mle;
    options.min_samples = a.config().powerlaw_min_samples;
    const auto fit = fit_power_law(degrees, options);
    a.emit_text("ccdf_trackers.csv", ccdf_csv(degree_ccdf(t, Side::right)));
    a.emit_text("ccdf_sites.csv", ccdf_csv(degree_ccdf(t, Side::left)));
    a.emit_json("powerlaw.json", {{"n", degrees.size()},
                                  {"x_min", fit.x_min},
                                  {"alpha", fit.alpha},
                                  {"sigma", fit.sigma},
                                  {"ks_distance", fit.ks_distance},
                                  {"n_tail", fit.n_tail}});
}

void cmd_assortativity(Analysis& a) {
    const auto b = a.bipartite();
    const auto labels = a.labels();
    const auto t = filter_trackers(b, labels).graph;
    const auto result = assortativity(t, {a.config().permutations, a.config().seed});
    a.emit_json("assortativity.json", {{"r", result.r},
                                       {"p_value", result.p_value},
                                       {"n", result.n},
                                       {"permutations", a.config().permutations},
                                       {"seed", a.config().seed}});
}

void cmd_cooccur(Analysis& a) {
    const auto& c = a.config();
    const auto b = a.bipartite();
    const auto labels = a.labels();
    const auto t = filter_trackers(b, labels).graph;
    ClusterConfig cc;
    cc.prune.alpha_level = c.g2_alpha;
    cc.prune.bonferroni = !c.no_bonferroni;
    cc.resolutions = c.resolutions;
    cc.seeds = c.louvain_seeds;
    cc.base_seed = c.seed;
    cc.weighted = !c.unweighted;
    cc.core_k = c.core_k;
    cc.threads = c.threads;
    if (c.core_order == "before") {
        cc.core_order = CoreOrder::before_clustering;
    } else if (c.core_order == "after") {
        cc.core_order = CoreOrder::after_clustering;
    } else {
        throw Error("--core-order must be before or after");
    }
    const auto report = cluster_pipeline(t, labels, cc);
    a.emit_json("clusters.json", {{"clustering", to_json(report)}});
    a.emit_text("clusters.dot", to_dot(report));
}

void cmd_country(Analysis& a) {
    const auto& c = a.config();
    const auto b = a.bipartite();
    const auto labels = a.labels();
    const auto r = a.ranks();
    const auto t = filter_trackers(b, labels).graph;
    const fs::path countries_path = c.countries.empty() ? data_dir() / "country_tlds.csv" : fs::path(c.countries);
    auto countries_in = a.open(a.supplied(countries_path.string(), "countries"));
    const auto countries = read_country_table(countries_in);
    std::vector<CountryIndicators> indicators;
    if (!c.indicators.empty()) {
        auto in = a.open(a.supplied(c.indicators, "indicators"));
        indicators = read_country_indicators(in, countries);
    }
    const std::set<std::string> companies(c.companies.begin(), c.companies.end());

    a.emit_text("country/company_shares_all.csv", share_csv(company_shares(DomainSet::all(t), labels, t, r)));
    const auto com = DomainSet::with_tld(t, "com");
    if (!com.empty()) a.emit_text("country/company_shares_com.csv", share_csv(company_shares(com, labels, t, r)));

    std::map<std::string, bool> dominant;
    json rows = json::array();
    std::string csv = csv_line({"tld", "country", "sites", "dominant", "target_mass", "top_mass"});
    for (const auto& country : countries) {
        const auto d = DomainSet::with_tld(t, country.tld);
        json row = {{"tld", country.tld}, {"country", country.country}, {"sites", d.size()}};
        std::string reason;
        CompanyShareTable table;
        if (d.empty()) {
            reason = "no sites";
        } else {
            try {
                table = company_shares(d, labels, t, r);
                if (table.rows.empty()) reason = "no tracker company";
            } catch (const Error& e) {
                reason = e.what();
            }
        }
        if (!reason.empty()) {
            row["skipped"] = reason;
            rows.push_back(row);
            continue;
        }
        a.emit_text("country/company_shares_" + country.tld + ".csv", share_csv(table));
        const auto dom = dominance_detail(table, companies, c.dominance_top);
        dominant[country.tld] = dom.dominant;
        row["dominant"] = dom.dominant;
        row["target_mass"] = dom.target_mass;
        row["top_mass"] = dom.top_mass;
        rows.push_back(row);
        csv += csv_line({country.tld, country.country, std::to_string(d.size()), dom.dominant ? "true" : "false",
                         format_double(dom.target_mass), format_double(dom.top_mass)});
    }
    a.emit_text("country_dominance.csv", csv);

    json correlations = json::array();
    if (!indicators.empty()) {
        std::string pb = csv_line({"indicator", "r", "p_value", "n", "stars"});
        for (std::size_t k = 0; k < kIndicatorColumns.size(); ++k) {
            std::vector<int> x;
            std::vector<double> y;
            for (const auto& ci : indicators) {
                auto it = dominant.find(ci.tld);
                if (it == dominant.end()) continue;
                x.push_back(it->second ? 1 : 0);
                y.push_back(ci.values[k]);
            }
            json entry = {{"indicator", kIndicatorColumns[k]}, {"n", x.size()}};
            try {
                const auto res = point_biserial(x, y);
                entry["r"] = res.r;
                entry["p_value"] = res.p_value;
                entry["stars"] = significance_stars(res.p_value);
                pb += csv_line({kIndicatorColumns[k], format_double(res.r), format_double(res.p_value),
                                std::to_string(res.n), std::string(significance_stars(res.p_value))});
            } catch (const Error& e) {
                entry["error"] = e.what();
                pb += csv_line({kIndicatorColumns[k], "", "", std::to_string(x.size()), ""});
            }
            correlations.push_back(entry);
        }
        a.emit_text("point_biserial.csv", pb);
    }
    a.emit_json("country.json", {{"countries", rows}, {"correlations", correlations}});
}

void cmd_category(Analysis& a) {
    const auto& c = a.config();
    const auto b = a.bipartite();
    const auto labels = a.labels();
    const auto r = a.ranks();
    const auto t = filter_trackers(b, labels).graph;
    auto in = a.open(a.supplied(c.categories, "categories"));
    const auto entries = read_category_map(in);

    std::map<std::string, std::pair<Criticality, std::vector<PayLevelDomain>>> by_category;
    std::vector<PayLevelDomain> critical_sites, noncritical_sites;
    for (const auto& e : entries) {
        auto& slot = by_category[e.category];
        slot.first = e.criticality;
        slot.second.push_back(e.site);
        (e.criticality == Criticality::highly_critical ? critical_sites : noncritical_sites).push_back(e.site);
    }
    const auto critical = DomainSet::from_sites(t, critical_sites);
    const auto noncritical = DomainSet::from_sites(t, noncritical_sites);
    if (critical.empty() || noncritical.empty())
        throw Error("category needs corpus sites in both highly_critical and less_critical categories");

    // Overall presence of any tracker.
    ShareTarget any{"any tracker", {}};
    for (std::uint32_t j = 0; j < t.num_third_parties(); ++j) any.third_parties.push_back(j);
    const auto overall = prevalence_test(any, critical, noncritical, t);
    {
        auto frac = [](std::uint64_t with, std::uint64_t without) {
            return format_double(static_cast<double>(with) / static_cast<double>(with + without));
        };
        std::string csv = csv_line({"", "highly_critical", "less_critical"});
        csv += csv_line({"without_trackers", std::to_string(overall.table.c), std::to_string(overall.table.d)});
        csv += csv_line({"with_trackers", std::to_string(overall.table.a), std::to_string(overall.table.b)});
        csv += csv_line({"fraction_with_trackers", frac(overall.table.a, overall.table.c), frac(overall.table.b, overall.table.d)});
        a.emit_text("category_overall.csv", csv);
    }

    // Per-tracker prevalence for the most widespread trackers.
    std::vector<ShareTarget> targets;
    if (c.prevalence_level == "company") {
        for (const auto& company : labels.tracker_companies()) targets.push_back(target_for_company(t, labels, company));
    } else if (c.prevalence_level == "pld") {
        for (std::uint32_t j = 0; j < t.num_third_parties(); ++j) targets.push_back({t.third_party(j).name(), {j}});
    } else {
        throw Error("--prevalence-level must be company or pld");
    }
    const auto everyone = DomainSet::all(t);
    std::vector<std::pair<std::size_t, std::size_t>> coverage;  // (sites, target index)
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const auto n = covered_sites(everyone, targets[i], t).size();
        if (n > 0) coverage.emplace_back(n, i);
    }
    std::stable_sort(coverage.begin(), coverage.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    if (coverage.size() > c.top) coverage.resize(c.top);
    std::string prevalence_csv =
        csv_line({"tracker", "sites", "rate_critical", "rate_noncritical", "g2", "p_value", "stars", "direction"});
    json prevalence = json::array();
    for (const auto& [n, i] : coverage) {
        json entry = {{"tracker", targets[i].name}, {"sites", n}};
        try {
            const auto p = prevalence_test(targets[i], critical, noncritical, t);
            entry.update(prevalence_json(p));
            prevalence_csv += csv_line({targets[i].name, std::to_string(n), format_double(p.rate_critical),
                                        format_double(p.rate_noncritical), format_double(p.statistic),
                                        format_double(p.p_value), std::string(significance_stars(p.p_value)),
                                        std::string(to_string(p.direction))});
        } catch (const Error& e) {
            entry["error"] = e.what();
            prevalence_csv += csv_line({targets[i].name, std::to_string(n), "", "", "", "", "", "untestable"});
        }
        prevalence.push_back(entry);
    }
    a.emit_text("prevalence.csv", prevalence_csv);

    // Shares of the selected companies per category, and their rank CDFs
    // over highly critical sites.
    std::vector<ShareTarget> selected;
    json missing = json::array();
    for (const auto& company : c.companies) {
        if (labels.tracker_plds_of(company).empty()) {
            missing.push_back(company);
            continue;
        }
        selected.push_back(target_for_company(t, labels, company));
    }
    std::string shares_csv = csv_line({"category", "criticality", "sites", "company", "domain_share", "rank_share"});
    for (const auto& [category, slot] : by_category) {
        const auto d = DomainSet::from_sites(t, slot.second);
        if (d.empty()) continue;
        const std::string crit = slot.first == Criticality::highly_critical ? "highly_critical" : "less_critical";
        for (const auto& target : selected) {
            std::string rs;
            try {
                rs = format_double(rank_share(d, target, t, r));
            } catch (const Error&) {
                // no rank mass in this category
            }
            shares_csv += csv_line({category, crit, std::to_string(d.size()), target.name,
                                    format_double(domain_share(d, target, t)), rs});
        }
    }
    a.emit_text("category_shares.csv", shares_csv);

    const auto scores = r.site_scores(t);
    std::string cdf_csv = csv_line({"company", "pagerank", "cumulative_fraction"});
    for (const auto& target : selected) {
        std::vector<double> values;
        for (const auto s : covered_sites(critical, target, t)) values.push_back(scores[s]);
        std::sort(values.begin(), values.end());
        for (std::size_t i = 0; i < values.size(); ++i)
            cdf_csv += csv_line({target.name, format_double(values[i]),
                                 format_double(static_cast<double>(i + 1) / static_cast<double>(values.size()))});
    }
    a.emit_text("rank_cdf.csv", cdf_csv);

    auto top_companies = [&](const DomainSet& d) {
        try {
            return share_csv(company_shares(d, labels, t, r));
        } catch (const Error&) {
            return csv_line({"company", "rank_share", "domain_share"});
        }
    };
    a.emit_text("top_companies_critical.csv", top_companies(critical));
    a.emit_text("top_companies_noncritical.csv", top_companies(noncritical));

    a.emit_json("category.json", {{"critical_sites", critical.size()},
                                  {"noncritical_sites", noncritical.size()},
                                  {"overall", prevalence_json(overall)},
                                  {"prevalence", prevalence},
                                  {"missing_companies", missing}});
}

// key -> "--key=value" tokens appended after the command line, skipping
// keys the command line already sets.
std::vector<std::string> merge_config(const std::vector<std::string>& args, const CLI::App& app) {
    std::optional<std::string> config_path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    if (!config_path) return args;
    // Keys of the other subcommand are skipped, so one file can serve a
    // whole run.
    const CLI::App* selected = nullptr;
    for (std::size_t i = 1; i < args.size() && !selected; ++i) {
        if (args[i] == "extract" || args[i] == "analyze") selected = app.get_subcommand(args[i]);
    }
    std::vector<std::string> merged = args;
    for (const auto& [key, value] : read_config_file(*config_path)) {
        const std::string flag = "--" + key;
        auto known_in = [&](const CLI::App* scope) { return scope && scope->get_option_no_throw(flag) != nullptr; };
        const bool known = known_in(&app) || known_in(app.get_subcommand("extract")) || known_in(app.get_subcommand("analyze"));
        if (!known || key == "config") throw Error("unknown config key: " + key);
        if (!known_in(&app) && !known_in(selected)) continue;
        const bool given = std::any_of(args.begin() + 1, args.end(), [&](const std::string& a) {
            return a == flag || a.rfind(flag + "=", 0) == 0;
        });
        if (!given) merged.push_back(flag + "=" + value);
    }
    return merged;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Third-party tracker extraction and network analysis", "tracknet"};
    app.require_subcommand(1);
    std::string out_dir = c.out_dir.string();
    std::string config_file;
    app.add_option("--config", config_file, "key=value file; command-line flags override it");
    app.add_option("--out", out_dir, "Output directory for all stages")->capture_default_str();
    app.add_option("--seed", c.seed, "Seed for permutation tests and clustering")->capture_default_str();
    app.add_option("--threads", c.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

    auto* extract = app.add_subcommand("extract", "Extract site -> third-party embeddings from a crawl corpus");
    extract->fallthrough();
    extract->add_option("--corpus", c.corpus, "WARC file, manifest TSV, or directory of them")->delimiter(',');
    extract->add_option("--suffix-list", c.suffix_list, "Public suffix list (default: bundled snapshot)");

    auto* analyze = app.add_subcommand("analyze", "Run one analysis over extracted data");
    analyze->require_subcommand(1);
    analyze->fallthrough();
    analyze->add_option("--edges", c.edges, "Edge TSV (default: <out>/edges.tsv)");
    analyze->add_option("--sites", c.sites, "Site TSV (default: <out>/sites.tsv if present)");
    analyze->add_option("--ranks", c.ranks, "Rank TSV (default: <out>/ranks.tsv)");
    analyze->add_option("--hyperlinks", c.hyperlinks, "Hyperlink TSV src_pld<TAB>dst_pld");
    analyze->add_option("--labels", c.labels, "Third-party labels CSV pld,company,category,country,is_tracker");
    analyze->add_option("--countries", c.countries, "Country table CSV tld,country (default: bundled)");
    analyze->add_option("--indicators", c.indicators, "Country indicators CSV");
    analyze->add_option("--categories", c.categories, "Category map CSV pld,category,criticality");
    analyze->add_option("--damping", c.damping, "PageRank damping")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    analyze->add_option("--tol", c.tolerance, "PageRank L1 tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    analyze->add_option("--max-iter", c.max_iterations, "PageRank iteration cap")->capture_default_str()->check(CLI::PositiveNumber);
    analyze->add_option("--dangling", c.dangling, "Dangling policy")->capture_default_str()->check(CLI::IsMember({"uniform", "self_loop"}));
    analyze->add_flag("--keep-self-loops", c.keep_self_loops, "Keep PLD self-links in the hyperlink graph");
    analyze->add_option("--top", c.top, "Rows in top-N tables")->capture_default_str()->check(CLI::PositiveNumber);
    analyze->add_option("--dominance-top", c.dominance_top, "Companies considered for dominance")->capture_default_str()->check(CLI::PositiveNumber);
    analyze->add_option("--companies", c.companies, "Companies tested for dominance and category shares")->delimiter(',')->capture_default_str();
    analyze->add_option("--permutations", c.permutations, "Assortativity permutation rounds")->capture_default_str()->check(CLI::PositiveNumber);
    analyze->add_flag("--exact-mle", c.exact_mle, "Exact discrete power-law likelihood");
    analyze->add_option("--powerlaw-min-samples", c.powerlaw_min_samples, "Smallest sample the power-law fit accepts")->capture_default_str()->check(CLI::Range(2, 1 << 30));
    analyze->add_option("--condprob-top", c.condprob_top, "Trackers in the conditional probability matrix")->capture_default_str()->check(CLI::PositiveNumber);
    analyze->add_option("--prevalence-level", c.prevalence_level, "Aggregate prevalence tests by company or pld")->capture_default_str()->check(CLI::IsMember({"company", "pld"}));
    analyze->add_option("--g2-alpha", c.g2_alpha, "Significance level for co-occurrence pruning")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    analyze->add_flag("--no-bonferroni", c.no_bonferroni, "Do not divide the pruning level by the number of pairs");
    analyze->add_option("--resolutions", c.resolutions, "Louvain resolution grid")->delimiter(',')->capture_default_str();
    analyze->add_option("--louvain-seeds", c.louvain_seeds, "Louvain runs per resolution")->capture_default_str()->check(CLI::PositiveNumber);
    analyze->add_flag("--unweighted", c.unweighted, "Cluster on unit edge weights");
    analyze->add_option("--core-order", c.core_order, "Apply the k-core before or after clustering")->capture_default_str()->check(CLI::IsMember({"before", "after"}));
    analyze->add_option("--core-k", c.core_k, "k of the k-core cleanup")->capture_default_str();

    const std::vector<std::pair<std::string, std::string>> analyses = {
        {"pagerank", "PageRank of the hyperlink graph -> ranks.tsv"},
        {"rank-share", "Rank and domain share of third parties and tracker companies"},
        {"condprob", "Conditional co-occurrence probabilities of the top trackers"},
        {"powerlaw", "Tracker degree CCDFs and power-law fit"},
        {"assortativity", "Degree assortativity of the tracking network"},
        {"cooccur", "Co-occurrence clustering of trackers"},
        {"country", "Per-TLD company shares, dominance and indicator correlations"},
        {"category", "Tracker prevalence on highly vs less privacy-critical sites"},
    };
    for (const auto& [name, help] : analyses) analyze->add_subcommand(name, help)->fallthrough();

    try {
        const auto merged = merge_config(args, app);
        std::vector<std::string> reversed(merged.rbegin(), merged.rend() - 1);
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    } catch (const std::exception& e) {
        err << "tracknet: error: " << e.what() << "\n";
        return 2;
    }

    try {
        c.out_dir = out_dir;
        if (extract->parsed()) {
            cmd_extract(c, out);
            return 0;
        }
        const auto* sub = analyze->get_subcommands().front();
        fs::create_directories(c.out_dir);
        Analysis a(c, sub->get_name(), out);
        const auto& name = sub->get_name();
        if (name == "pagerank") cmd_pagerank(a);
        else if (name == "rank-share") cmd_rank_share(a);
        else if (name == "condprob") cmd_condprob(a);
        else if (name == "powerlaw") cmd_powerlaw(a);
        else if (name == "assortativity") cmd_assortativity(a);
        else if (name == "cooccur") cmd_cooccur(a);
        else if (name == "country") cmd_country(a);
        else if (name == "category") cmd_category(a);
        return 0;
    } catch (const std::exception& e) {
        err << "tracknet: error: " << e.what() << "\n";
        return 1;
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    return run_cli(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace tracknet
