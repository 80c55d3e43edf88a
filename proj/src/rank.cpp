#include "tracknet/rank.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>

#include "tracknet/csv.hpp"
#include "tracknet/error.hpp"

namespace tracknet {

RankVector::RankVector(std::vector<PayLevelDomain> vertices, std::vector<double> scores)
    : vertices_(std::move(vertices)), scores_(std::move(scores)) {
    if (vertices_.size() != scores_.size()) throw Error("rank vector: size mismatch");
    for (std::size_t i = 1; i < vertices_.size(); ++i) {
        if (!(vertices_[i - 1] < vertices_[i])) throw Error("rank vector: vertices not sorted/unique");
    }
}

double RankVector::score(const PayLevelDomain& pld) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), pld);
    if (it == vertices_.end() || *it != pld) return 0.0;
    return scores_[static_cast<std::size_t>(it - vertices_.begin())];
}

std::vector<double> RankVector::site_scores(const BipartiteGraph& g) const {
    std::vector<double> out(g.num_sites(), 0.0);
    // Both name lists are sorted: merge instead of searching.
    std::size_t r = 0;
    for (std::size_t s = 0; s < g.num_sites() && r < vertices_.size(); ++s) {
        while (r < vertices_.size() && vertices_[r] < g.site(s)) ++r;
        if (r < vertices_.size() && vertices_[r] == g.site(s)) out[s] = scores_[r];
    }
    return out;
}

PageRankResult pagerank(const HyperlinkGraph& g, const PageRankOptions& options) {
    const auto n = g.num_vertices();
    if (n == 0) throw Error("pagerank: empty graph");
    if (!(options.damping > 0.0 && options.damping < 1.0)) throw Error("pagerank: damping must lie in (0, 1)");
    if (!(options.tolerance > 0.0)) throw Error("pagerank: tolerance must be positive");
    if (options.max_iterations < 1) throw Error("pagerank: max_iterations must be positive");

    const double d = options.damping;
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> x(n, inv_n);
    std::vector<double> y(n);
    PageRankResult result;
    for (int it = 1; it <= options.max_iterations; ++it) {
        double dangling = 0.0;
        std::fill(y.begin(), y.end(), 0.0);
        for (std::size_t u = 0; u < n; ++u) {
            const auto deg = g.out_degree(u);
            if (deg == 0) {
                if (options.dangling == DanglingPolicy::uniform) dangling += x[u];
                else y[u] += d * x[u];
                continue;
            }
            const double share = d * x[u] / static_cast<double>(deg);
            for (auto v : g.out_neighbors(u)) y[v] += share;
        }
        const double base = (1.0 - d) * inv_n + d * dangling * inv_n;
        double residual = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            y[v] += base;
            residual += std::abs(y[v] - x[v]);
        }
        x.swap(y);
        result.iterations = it;
        result.residual = residual;
        if (residual < options.tolerance) {
            result.converged = true;
            break;
        }
    }
    double total = 0.0;
    for (double v : x) total += v;
    for (double& v : x) v /= total;
    std::vector<PayLevelDomain> vertices(g.vertices().begin(), g.vertices().end());
    result.ranks = RankVector(std::move(vertices), std::move(x));
    return result;
}

void write_rank_tsv(std::ostream& out, const RankVector& ranks) {
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        out << ranks.vertices()[i].name() << '\t' << format_double17(ranks.scores()[i]) << '\n';
    }
}

RankVector read_rank_tsv(std::istream& in) {
    std::vector<std::pair<PayLevelDomain, double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw Error("rank TSV line " + std::to_string(line_no) + ": expected pld<TAB>score");
        const char* begin = line.c_str() + tab + 1;
        char* end = nullptr;
        double score = std::strtod(begin, &end);
        if (end == begin || *end != '\0' || !std::isfinite(score) || score < 0.0) {
            throw Error("rank TSV line " + std::to_string(line_no) + ": bad score");
        }
        rows.emplace_back(PayLevelDomain(line.substr(0, tab)), score);
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<PayLevelDomain> vertices;
    std::vector<double> scores;
    for (auto& [pld, score] : rows) {
        vertices.push_back(std::move(pld));
        scores.push_back(score);
    }
    return RankVector(std::move(vertices), std::move(scores));
}

DomainSet DomainSet::all(const BipartiteGraph& g) {
    DomainSet d;
    d.sites_.resize(g.num_sites());
    for (std::uint32_t i = 0; i < d.sites_.size(); ++i) d.sites_[i] = i;
    return d;
}

DomainSet DomainSet::with_tld(const BipartiteGraph& g, std::string_view tld) {
    DomainSet d;
    for (std::uint32_t i = 0; i < g.num_sites(); ++i) {
        if (g.site(i).tld() == tld) d.sites_.push_back(i);
    }
    return d;
}

DomainSet DomainSet::from_sites(const BipartiteGraph& g, std::span<const PayLevelDomain> names) {
    DomainSet d;
    for (const auto& name : names) {
        if (auto i = g.site_index(name)) d.sites_.push_back(*i);
    }
    std::sort(d.sites_.begin(), d.sites_.end());
    d.sites_.erase(std::unique(d.sites_.begin(), d.sites_.end()), d.sites_.end());
    return d;
}

DomainSet DomainSet::from_indices(std::vector<std::uint32_t> sites) {
    DomainSet d;
    d.sites_ = std::move(sites);
    std::sort(d.sites_.begin(), d.sites_.end());
    d.sites_.erase(std::unique(d.sites_.begin(), d.sites_.end()), d.sites_.end());
    return d;
}

ShareTarget target_for_pld(const BipartiteGraph& g, const PayLevelDomain& pld, const LabelTable* labels) {
    ShareTarget t{pld.name(), {}};
    if (auto j = g.third_party_index(pld)) t.third_parties.push_back(*j);
    else if (!labels || !labels->find(pld)) throw Error("unknown third party: " + pld.name());
    return t;
}

ShareTarget target_for_company(const BipartiteGraph& g, const LabelTable& labels, std::string_view company) {
    auto plds = labels.tracker_plds_of(company);
    if (plds.empty()) throw Error("unknown tracker company: " + std::string(company));
    ShareTarget t{std::string(company), {}};
    for (const auto& pld : plds) {
        if (auto j = g.third_party_index(pld)) t.third_parties.push_back(*j);
    }
    std::sort(t.third_parties.begin(), t.third_parties.end());
    return t;
}

std::vector<std::uint32_t> covered_sites(const DomainSet& d, const ShareTarget& t, const BipartiteGraph& g) {
    std::vector<std::uint32_t> out;
    for (auto s : d.sites()) {
        auto adj = g.third_parties_of(s);
        bool hit = std::any_of(t.third_parties.begin(), t.third_parties.end(),
                               [&](std::uint32_t j) { return std::binary_search(adj.begin(), adj.end(), j); });
        if (hit) out.push_back(s);
    }
    return out;
}

double rank_share(const DomainSet& d, const ShareTarget& t, const BipartiteGraph& g, const RankVector& r) {
    if (d.empty()) throw Error("rank_share: empty domain set");
    auto scores = r.site_scores(g);
    double total = 0.0;
    for (auto s : d.sites()) total += scores[s];
    if (!(total > 0.0)) throw Error("rank_share: no ranked domain in the domain set");
    double covered = 0.0;
    for (auto s : covered_sites(d, t, g)) covered += scores[s];
    return covered / total;
}

double domain_share(const DomainSet& d, const ShareTarget& t, const BipartiteGraph& g) {
    if (d.empty()) throw Error("domain_share: empty domain set");
    return static_cast<double>(covered_sites(d, t, g).size()) / static_cast<double>(d.size());
}

CompanyShareTable company_shares(const DomainSet& d, const LabelTable& labels, const BipartiteGraph& g,
                                 const RankVector& r) {
    if (d.empty()) throw Error("company_shares: empty domain set");
    auto companies = labels.tracker_companies();
    std::vector<int> company_of(g.num_third_parties(), -1);
    for (std::size_t j = 0; j < g.num_third_parties(); ++j) {
        const auto* label = labels.find(g.third_party(j));
        if (!label || !label->is_tracker || label->company.empty()) continue;
        auto it = std::lower_bound(companies.begin(), companies.end(), label->company);
        company_of[j] = static_cast<int>(it - companies.begin());
    }
    auto scores = r.site_scores(g);
    double total_rank = 0.0;
    std::vector<double> rank_mass(companies.size(), 0.0);
    std::vector<std::size_t> site_count(companies.size(), 0);
    std::vector<int> seen;
    for (auto s : d.sites()) {
        total_rank += scores[s];
        seen.clear();
        for (auto j : g.third_parties_of(s)) {
            if (company_of[j] >= 0) seen.push_back(company_of[j]);
        }
        std::sort(seen.begin(), seen.end());
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        for (int c : seen) {
            rank_mass[static_cast<std::size_t>(c)] += scores[s];
            ++site_count[static_cast<std::size_t>(c)];
        }
    }
    if (!(total_rank > 0.0)) throw Error("company_shares: no ranked domain in the domain set");
    CompanyShareTable table;
    for (std::size_t c = 0; c < companies.size(); ++c) {
        if (site_count[c] == 0) continue;
        table.rows.push_back(CompanyShare{companies[c], rank_mass[c] / total_rank,
                                          static_cast<double>(site_count[c]) / static_cast<double>(d.size())});
    }
    std::stable_sort(table.rows.begin(), table.rows.end(), [](const CompanyShare& a, const CompanyShare& b) {
        if (a.rank_share != b.rank_share) return a.rank_share > b.rank_share;
        return a.company < b.company;
    });
    return table;
}

void write_company_shares_csv(std::ostream& out, const CompanyShareTable& table) {
    out << "company,rank_share,domain_share\n";
    for (const auto& row : table.rows) {
        out << csv_field(row.company) << ',' << format_double(row.rank_share) << ',' << format_double(row.domain_share)
            << '\n';
    }
}

DominanceResult dominance_detail(const CompanyShareTable& table, const std::set<std::string>& companies,
                                 std::size_t top_n) {
    if (companies.empty()) throw Error("dominance: empty company set");
    if (table.rows.empty()) throw Error("dominance: no company row in the domain set");
    DominanceResult result;
    const auto n = std::min(top_n, table.rows.size());
    for (std::size_t i = 0; i < n; ++i) {
        result.top_mass += table.rows[i].rank_share;
        if (companies.contains(table.rows[i].company)) result.target_mass += table.rows[i].rank_share;
    }
    result.dominant = result.target_mass > 0.5 * result.top_mass;
    return result;
}

bool dominance(const DomainSet& d, const LabelTable& labels, const BipartiteGraph& g, const RankVector& r,
               const std::set<std::string>& companies) {
    return dominance_detail(company_shares(d, labels, g, r), companies).dominant;
}

}  // namespace tracknet
