#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tracknet/domain.hpp"

namespace tracknet {

// Directed PLD-level link graph. Parallel links are collapsed; self-loops
// are dropped unless kept explicitly.
class HyperlinkGraph {
public:
    HyperlinkGraph() = default;

    static HyperlinkGraph from_links(std::span<const std::pair<PayLevelDomain, PayLevelDomain>> links,
                                     bool keep_self_loops = false,
                                     std::span<const PayLevelDomain> extra_vertices = {});

    std::size_t num_vertices() const noexcept { return vertices_.size(); }
    std::size_t num_edges() const noexcept { return targets_.size(); }
    std::span<const PayLevelDomain> vertices() const noexcept { return vertices_; }
    const PayLevelDomain& vertex(std::size_t i) const { return vertices_[i]; }
    std::optional<std::uint32_t> index_of(const PayLevelDomain& pld) const;

    std::span<const std::uint32_t> out_neighbors(std::size_t v) const {
        return std::span<const std::uint32_t>(targets_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
    }
    std::size_t out_degree(std::size_t v) const { return offsets_[v + 1] - offsets_[v]; }

private:
    std::vector<PayLevelDomain> vertices_;  // sorted
    std::vector<std::size_t> offsets_{0};
    std::vector<std::uint32_t> targets_;    // sorted per source
};

// src_pld<TAB>dst_pld lines.
std::vector<std::pair<PayLevelDomain, PayLevelDomain>> read_hyperlinks_tsv(std::istream& in);

}  // namespace tracknet
