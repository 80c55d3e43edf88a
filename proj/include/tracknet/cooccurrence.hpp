#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tracknet/bipartite.hpp"
#include "tracknet/domain.hpp"

namespace tracknet {

struct WeightedEdge {
    std::uint32_t u;
    std::uint32_t v;
    std::uint64_t weight;

    friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

// Undirected weighted tracker-tracker graph. The diagonal of the
// projection (each tracker's site count) is kept as a vertex attribute,
// never as a self-loop.
class CooccurrenceGraph {
public:
    struct Neighbor {
        std::uint32_t vertex;
        std::uint64_t weight;
    };

    CooccurrenceGraph() = default;

    // Edges are normalized to u < v and sorted. Throws Error on self-loops,
    // duplicate pairs, zero weights or out-of-range indices.
    CooccurrenceGraph(std::vector<PayLevelDomain> vertices, std::vector<std::uint64_t> diagonal,
                      std::vector<WeightedEdge> edges);

    std::size_t num_vertices() const noexcept { return vertices_.size(); }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    std::span<const PayLevelDomain> vertices() const noexcept { return vertices_; }
    const PayLevelDomain& vertex(std::size_t i) const { return vertices_[i]; }
    std::uint64_t diagonal(std::size_t i) const { return diagonal_[i]; }
    std::span<const std::uint64_t> diagonal() const noexcept { return diagonal_; }
    std::span<const WeightedEdge> edges() const noexcept { return edges_; }

    std::span<const Neighbor> neighbors(std::size_t v) const {
        return std::span<const Neighbor>(adjacency_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
    }
    // Number of distinct neighbors.
    std::size_t degree(std::size_t v) const { return offsets_[v + 1] - offsets_[v]; }
    std::optional<std::uint64_t> weight(std::size_t u, std::size_t v) const;
    std::uint64_t total_weight() const noexcept { return total_weight_; }

    // Subgraph on the vertices with keep[v] set, renumbered in order.
    CooccurrenceGraph induced(const std::vector<bool>& keep) const;
    // Same vertex set, different edge set.
    CooccurrenceGraph with_edges(std::vector<WeightedEdge> edges) const;

private:
    std::vector<PayLevelDomain> vertices_;
    std::vector<std::uint64_t> diagonal_;
    std::vector<WeightedEdge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Neighbor> adjacency_;
    std::uint64_t total_weight_ = 0;
};

// A = B^T B restricted to the off-diagonal: weight(t1, t2) is the number of
// sites embedding both. Pairs are counted site by site, never through a
// dense product.
CooccurrenceGraph one_mode_projection(const BipartiteGraph& b);

// Maximal subgraph in which every vertex has at least k neighbors,
// obtained by iterative peeling.
CooccurrenceGraph k_core(const CooccurrenceGraph& g, std::size_t k);

}  // namespace tracknet
