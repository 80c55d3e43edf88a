#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tracknet/corpus.hpp"
#include "tracknet/domain.hpp"
#include "tracknet/labels.hpp"

namespace tracknet {

enum class Side { left, right };

// Sites (left) x third parties (right). Both vertex sets are sorted by
// name, so vertex numbering is deterministic. Incidence is stored twice in
// CSR form (site -> third parties, third party -> sites) with sorted
// neighbor lists; page counts ride along with the site-side lists.
class BipartiteGraph {
public:
    struct IndexedEdge {
        std::uint32_t site;
        std::uint32_t third_party;
        std::uint64_t weight;
    };

    BipartiteGraph() = default;

    // `sites` and `third_parties` must be sorted and unique. Throws Error on
    // out-of-range indices or duplicate pairs.
    BipartiteGraph(std::vector<PayLevelDomain> sites, std::vector<PayLevelDomain> third_parties,
                   std::vector<IndexedEdge> edges);

    std::size_t num_sites() const noexcept { return sites_.size(); }
    std::size_t num_third_parties() const noexcept { return third_parties_.size(); }
    std::size_t num_edges() const noexcept { return site_adj_.size(); }
    std::size_t num_vertices(Side side) const noexcept { return side == Side::left ? num_sites() : num_third_parties(); }

    std::span<const PayLevelDomain> sites() const noexcept { return sites_; }
    std::span<const PayLevelDomain> third_parties() const noexcept { return third_parties_; }
    const PayLevelDomain& site(std::size_t i) const { return sites_[i]; }
    const PayLevelDomain& third_party(std::size_t j) const { return third_parties_[j]; }

    std::optional<std::uint32_t> site_index(const PayLevelDomain& pld) const;
    std::optional<std::uint32_t> third_party_index(const PayLevelDomain& pld) const;

    std::span<const std::uint32_t> third_parties_of(std::size_t site) const;
    std::span<const std::uint64_t> page_counts_of(std::size_t site) const;
    std::span<const std::uint32_t> sites_of(std::size_t third_party) const;

    std::size_t site_degree(std::size_t i) const { return site_offsets_[i + 1] - site_offsets_[i]; }
    std::size_t third_party_degree(std::size_t j) const { return tp_offsets_[j + 1] - tp_offsets_[j]; }
    std::size_t degree(Side side, std::size_t v) const { return side == Side::left ? site_degree(v) : third_party_degree(v); }

    bool has_edge(std::size_t site, std::size_t third_party) const;

    // All edges, sorted by (site, third party).
    std::vector<EmbeddingEdge> edges() const;

private:
    std::vector<PayLevelDomain> sites_;
    std::vector<PayLevelDomain> third_parties_;
    std::vector<std::size_t> site_offsets_{0};
    std::vector<std::uint32_t> site_adj_;
    std::vector<std::uint64_t> site_weights_;
    std::vector<std::size_t> tp_offsets_{0};
    std::vector<std::uint32_t> tp_adj_;
};

// Vertex sets are the PLDs appearing in `edges`, plus `extra_sites` on the
// left (sites whose pages embed nothing). Throws Error on a repeated
// (site, third party) pair or a self edge.
BipartiteGraph build_bipartite(std::span<const EmbeddingEdge> edges, std::span<const PayLevelDomain> extra_sites = {});

struct TrackerFilterResult {
    BipartiteGraph graph;
    std::size_t labels_missing_from_graph = 0;  // tracker labels with no vertex in the input
};

// Keeps third parties labelled as trackers; the site set is unchanged.
TrackerFilterResult filter_trackers(const BipartiteGraph& g, const LabelTable& labels);

struct CcdfPoint {
    std::size_t degree;
    double fraction;  // fraction of vertices with degree >= `degree`

    friend bool operator==(const CcdfPoint&, const CcdfPoint&) = default;
};

// One point per distinct degree, ascending. Throws Error if the side is empty.
std::vector<CcdfPoint> degree_ccdf(const BipartiteGraph& g, Side side);

}  // namespace tracknet
