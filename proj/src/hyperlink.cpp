#include "tracknet/hyperlink.hpp"

#include <algorithm>
#include <istream>
#include <string>

#include "tracknet/error.hpp"

namespace tracknet {

HyperlinkGraph HyperlinkGraph::from_links(std::span<const std::pair<PayLevelDomain, PayLevelDomain>> links,
                                          bool keep_self_loops, std::span<const PayLevelDomain> extra_vertices) {
    HyperlinkGraph g;
    g.vertices_.assign(extra_vertices.begin(), extra_vertices.end());
    for (const auto& [src, dst] : links) {
        g.vertices_.push_back(src);
        g.vertices_.push_back(dst);
    }
    std::sort(g.vertices_.begin(), g.vertices_.end());
    g.vertices_.erase(std::unique(g.vertices_.begin(), g.vertices_.end()), g.vertices_.end());

    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    edges.reserve(links.size());
    for (const auto& [src, dst] : links) {
        if (!keep_self_loops && src == dst) continue;
        edges.emplace_back(*g.index_of(src), *g.index_of(dst));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    g.offsets_.assign(g.vertices_.size() + 1, 0);
    for (const auto& [s, t] : edges) ++g.offsets_[s + 1];
    for (std::size_t v = 0; v < g.vertices_.size(); ++v) g.offsets_[v + 1] += g.offsets_[v];
    g.targets_.reserve(edges.size());
    for (const auto& [s, t] : edges) g.targets_.push_back(t);
    return g;
}

std::optional<std::uint32_t> HyperlinkGraph::index_of(const PayLevelDomain& pld) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), pld);
    if (it == vertices_.end() || *it != pld) return std::nullopt;
    return static_cast<std::uint32_t>(it - vertices_.begin());
}

std::vector<std::pair<PayLevelDomain, PayLevelDomain>> read_hyperlinks_tsv(std::istream& in) {
    std::vector<std::pair<PayLevelDomain, PayLevelDomain>> links;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size() || line.find('\t', tab + 1) != std::string::npos) {
            throw Error("hyperlink TSV line " + std::to_string(line_no) + ": expected src_pld<TAB>dst_pld");
        }
        links.emplace_back(PayLevelDomain(line.substr(0, tab)), PayLevelDomain(line.substr(tab + 1)));
    }
    return links;
}

}  // namespace tracknet
