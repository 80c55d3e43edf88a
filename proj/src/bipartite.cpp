#include "tracknet/bipartite.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "tracknet/error.hpp"

namespace tracknet {
namespace {

std::optional<std::uint32_t> find_index(const std::vector<PayLevelDomain>& names, const PayLevelDomain& key) {
    auto it = std::lower_bound(names.begin(), names.end(), key);
    if (it == names.end() || *it != key) return std::nullopt;
    return static_cast<std::uint32_t>(it - names.begin());
}

void require_sorted_unique(const std::vector<PayLevelDomain>& names, const char* what) {
    for (std::size_t i = 1; i < names.size(); ++i) {
        if (!(names[i - 1] < names[i])) throw Error(std::string("bipartite graph: ") + what + " not sorted/unique");
    }
}

}  // namespace

BipartiteGraph::BipartiteGraph(std::vector<PayLevelDomain> sites, std::vector<PayLevelDomain> third_parties,
                               std::vector<IndexedEdge> edges)
    : sites_(std::move(sites)), third_parties_(std::move(third_parties)) {
    require_sorted_unique(sites_, "sites");
    require_sorted_unique(third_parties_, "third parties");
    for (const auto& e : edges) {
        if (e.site >= sites_.size() || e.third_party >= third_parties_.size()) {
            throw Error("bipartite graph: edge index out of range");
        }
    }
    std::sort(edges.begin(), edges.end(), [](const IndexedEdge& a, const IndexedEdge& b) {
        return std::tie(a.site, a.third_party) < std::tie(b.site, b.third_party);
    });
    for (std::size_t k = 1; k < edges.size(); ++k) {
        if (edges[k].site == edges[k - 1].site && edges[k].third_party == edges[k - 1].third_party) {
            throw Error("duplicate edge " + sites_[edges[k].site].name() + " -> " +
                        third_parties_[edges[k].third_party].name());
        }
    }

    site_offsets_.assign(sites_.size() + 1, 0);
    tp_offsets_.assign(third_parties_.size() + 1, 0);
    for (const auto& e : edges) {
        ++site_offsets_[e.site + 1];
        ++tp_offsets_[e.third_party + 1];
    }
    std::partial_sum(site_offsets_.begin(), site_offsets_.end(), site_offsets_.begin());
    std::partial_sum(tp_offsets_.begin(), tp_offsets_.end(), tp_offsets_.begin());

    site_adj_.resize(edges.size());
    site_weights_.resize(edges.size());
    tp_adj_.resize(edges.size());
    // Edges are sorted by site, so site lists fill in order.
    for (std::size_t k = 0; k < edges.size(); ++k) {
        site_adj_[k] = edges[k].third_party;
        site_weights_[k] = edges[k].weight;
    }
    std::vector<std::size_t> cursor(tp_offsets_.begin(), tp_offsets_.end() - 1);
    for (const auto& e : edges) tp_adj_[cursor[e.third_party]++] = e.site;
}

std::optional<std::uint32_t> BipartiteGraph::site_index(const PayLevelDomain& pld) const { return find_index(sites_, pld); }

std::optional<std::uint32_t> BipartiteGraph::third_party_index(const PayLevelDomain& pld) const {
    return find_index(third_parties_, pld);
}

std::span<const std::uint32_t> BipartiteGraph::third_parties_of(std::size_t site) const {
    return std::span<const std::uint32_t>(site_adj_).subspan(site_offsets_[site], site_degree(site));
}

std::span<const std::uint64_t> BipartiteGraph::page_counts_of(std::size_t site) const {
    return std::span<const std::uint64_t>(site_weights_).subspan(site_offsets_[site], site_degree(site));
}

std::span<const std::uint32_t> BipartiteGraph::sites_of(std::size_t third_party) const {
    return std::span<const std::uint32_t>(tp_adj_).subspan(tp_offsets_[third_party], third_party_degree(third_party));
}

bool BipartiteGraph::has_edge(std::size_t site, std::size_t third_party) const {
    auto adj = third_parties_of(site);
    return std::binary_search(adj.begin(), adj.end(), static_cast<std::uint32_t>(third_party));
}

std::vector<EmbeddingEdge> BipartiteGraph::edges() const {
    std::vector<EmbeddingEdge> out;
    out.reserve(num_edges());
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        auto adj = third_parties_of(i);
        auto weights = page_counts_of(i);
        for (std::size_t k = 0; k < adj.size(); ++k) out.push_back(EmbeddingEdge{sites_[i], third_parties_[adj[k]], weights[k]});
    }
    return out;
}

BipartiteGraph build_bipartite(std::span<const EmbeddingEdge> edges, std::span<const PayLevelDomain> extra_sites) {
    std::vector<PayLevelDomain> sites(extra_sites.begin(), extra_sites.end());
    std::vector<PayLevelDomain> third_parties;
    sites.reserve(sites.size() + edges.size());
    third_parties.reserve(edges.size());
    for (const auto& e : edges) {
        if (e.site == e.third_party) throw Error("self edge on " + e.site.name());
        sites.push_back(e.site);
        third_parties.push_back(e.third_party);
    }
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    std::sort(third_parties.begin(), third_parties.end());
    third_parties.erase(std::unique(third_parties.begin(), third_parties.end()), third_parties.end());

    std::vector<BipartiteGraph::IndexedEdge> indexed;
    indexed.reserve(edges.size());
    for (const auto& e : edges) {
        auto s = static_cast<std::uint32_t>(std::lower_bound(sites.begin(), sites.end(), e.site) - sites.begin());
        auto t = static_cast<std::uint32_t>(std::lower_bound(third_parties.begin(), third_parties.end(), e.third_party) -
                                            third_parties.begin());
        indexed.push_back({s, t, e.page_count});
    }
    return BipartiteGraph(std::move(sites), std::move(third_parties), std::move(indexed));
}

TrackerFilterResult filter_trackers(const BipartiteGraph& g, const LabelTable& labels) {
    TrackerFilterResult result;
    std::vector<PayLevelDomain> kept;
    std::vector<std::uint32_t> old_index;
    for (const auto& label : labels.rows()) {
        if (!label.is_tracker) continue;
        if (auto j = g.third_party_index(label.pld)) {
            kept.push_back(label.pld);
            old_index.push_back(*j);
        } else {
            ++result.labels_missing_from_graph;
        }
    }
    // Label rows are sorted by PLD, so `kept` is sorted too.
    std::vector<BipartiteGraph::IndexedEdge> edges;
    for (std::uint32_t t = 0; t < old_index.size(); ++t) {
        for (auto s : g.sites_of(old_index[t])) {
            auto adj = g.third_parties_of(s);
            auto pos = std::lower_bound(adj.begin(), adj.end(), old_index[t]) - adj.begin();
            edges.push_back({s, t, g.page_counts_of(s)[static_cast<std::size_t>(pos)]});
        }
    }
    std::vector<PayLevelDomain> sites(g.sites().begin(), g.sites().end());
    result.graph = BipartiteGraph(std::move(sites), std::move(kept), std::move(edges));
    return result;
}

std::vector<CcdfPoint> degree_ccdf(const BipartiteGraph& g, Side side) {
    const auto n = g.num_vertices(side);
    if (n == 0) throw Error("degree_ccdf: no vertices on the requested side");
    std::map<std::size_t, std::size_t> histogram;
    for (std::size_t v = 0; v < n; ++v) ++histogram[g.degree(side, v)];
    std::vector<CcdfPoint> out;
    std::size_t at_least = n;
    for (const auto& [degree, count] : histogram) {
        out.push_back(CcdfPoint{degree, static_cast<double>(at_least) / static_cast<double>(n)});
        at_least -= count;
    }
    return out;
}

}  // namespace tracknet
