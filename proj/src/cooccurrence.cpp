#include "tracknet/cooccurrence.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "tracknet/error.hpp"

namespace tracknet {

CooccurrenceGraph::CooccurrenceGraph(std::vector<PayLevelDomain> vertices, std::vector<std::uint64_t> diagonal,
                                     std::vector<WeightedEdge> edges)
    : vertices_(std::move(vertices)), diagonal_(std::move(diagonal)), edges_(std::move(edges)) {
    if (diagonal_.size() != vertices_.size()) throw Error("co-occurrence graph: diagonal size mismatch");
    for (auto& e : edges_) {
        if (e.u >= vertices_.size() || e.v >= vertices_.size()) throw Error("co-occurrence graph: vertex out of range");
        if (e.u == e.v) throw Error("co-occurrence graph: self-loop on " + vertices_[e.u].name());
        if (e.weight == 0) throw Error("co-occurrence graph: zero-weight edge");
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
        return std::tie(a.u, a.v) < std::tie(b.u, b.v);
    });
    for (std::size_t k = 1; k < edges_.size(); ++k) {
        if (edges_[k].u == edges_[k - 1].u && edges_[k].v == edges_[k - 1].v) {
            throw Error("co-occurrence graph: duplicate edge");
        }
    }
    offsets_.assign(vertices_.size() + 1, 0);
    for (const auto& e : edges_) {
        ++offsets_[e.u + 1];
        ++offsets_[e.v + 1];
        total_weight_ += e.weight;
    }
    for (std::size_t v = 0; v < vertices_.size(); ++v) offsets_[v + 1] += offsets_[v];
    adjacency_.resize(2 * edges_.size());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) adjacency_[cursor[e.v]++] = Neighbor{e.u, e.weight};
    for (const auto& e : edges_) adjacency_[cursor[e.u]++] = Neighbor{e.v, e.weight};
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
        std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                  adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]),
                  [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
    }
}

std::optional<std::uint64_t> CooccurrenceGraph::weight(std::size_t u, std::size_t v) const {
    auto adj = neighbors(u);
    auto it = std::lower_bound(adj.begin(), adj.end(), v, [](const Neighbor& n, std::size_t key) { return n.vertex < key; });
    if (it == adj.end() || it->vertex != v) return std::nullopt;
    return it->weight;
}

CooccurrenceGraph CooccurrenceGraph::induced(const std::vector<bool>& keep) const {
    if (keep.size() != vertices_.size()) throw Error("co-occurrence graph: keep mask size mismatch");
    std::vector<std::int64_t> remap(vertices_.size(), -1);
    std::vector<PayLevelDomain> vertices;
    std::vector<std::uint64_t> diagonal;
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
        if (!keep[v]) continue;
        remap[v] = static_cast<std::int64_t>(vertices.size());
        vertices.push_back(vertices_[v]);
        diagonal.push_back(diagonal_[v]);
    }
    std::vector<WeightedEdge> edges;
    for (const auto& e : edges_) {
        if (remap[e.u] >= 0 && remap[e.v] >= 0) {
            edges.push_back({static_cast<std::uint32_t>(remap[e.u]), static_cast<std::uint32_t>(remap[e.v]), e.weight});
        }
    }
    return CooccurrenceGraph(std::move(vertices), std::move(diagonal), std::move(edges));
}

CooccurrenceGraph CooccurrenceGraph::with_edges(std::vector<WeightedEdge> edges) const {
    return CooccurrenceGraph(vertices_, diagonal_, std::move(edges));
}

CooccurrenceGraph one_mode_projection(const BipartiteGraph& b) {
    std::unordered_map<std::uint64_t, std::uint64_t> counts;
    for (std::size_t s = 0; s < b.num_sites(); ++s) {
        auto adj = b.third_parties_of(s);
        for (std::size_t i = 0; i < adj.size(); ++i) {
            for (std::size_t j = i + 1; j < adj.size(); ++j) {
                ++counts[(static_cast<std::uint64_t>(adj[i]) << 32) | adj[j]];
            }
        }
    }
    std::vector<WeightedEdge> edges;
    edges.reserve(counts.size());
    for (const auto& [key, count] : counts) {
        edges.push_back({static_cast<std::uint32_t>(key >> 32), static_cast<std::uint32_t>(key & 0xFFFFFFFFu), count});
    }
    std::vector<PayLevelDomain> vertices(b.third_parties().begin(), b.third_parties().end());
    std::vector<std::uint64_t> diagonal(b.num_third_parties());
    for (std::size_t t = 0; t < diagonal.size(); ++t) diagonal[t] = b.third_party_degree(t);
    return CooccurrenceGraph(std::move(vertices), std::move(diagonal), std::move(edges));
}

CooccurrenceGraph k_core(const CooccurrenceGraph& g, std::size_t k) {
    if (k == 0) throw Error("k_core: k must be positive");
    const auto n = g.num_vertices();
    std::vector<std::size_t> degree(n);
    std::vector<bool> keep(n, true);
    std::deque<std::size_t> queue;
    for (std::size_t v = 0; v < n; ++v) {
        degree[v] = g.degree(v);
        if (degree[v] < k) {
            keep[v] = false;
            queue.push_back(v);
        }
    }
    while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        for (const auto& nb : g.neighbors(v)) {
            if (!keep[nb.vertex]) continue;
            if (--degree[nb.vertex] < k) {
                keep[nb.vertex] = false;
                queue.push_back(nb.vertex);
            }
        }
    }
    return g.induced(keep);
}

}  // namespace tracknet
