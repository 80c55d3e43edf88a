#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tracknet/bipartite.hpp"
#include "tracknet/cooccurrence.hpp"
#include "tracknet/corpus.hpp"
#include "tracknet/rng.hpp"
#include "tracknet/suffix_rules.hpp"

namespace tracknet::testing {

inline std::filesystem::path test_data(const std::string& name) {
    return std::filesystem::path(TRACKNET_TEST_DATA) / name;
}

inline const SuffixRuleSet& bundled_rules() {
    static const SuffixRuleSet rules =
        SuffixRuleSet::load(std::filesystem::path(TRACKNET_DATA_DIR) / "public_suffix_list.dat");
    return rules;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("tracknet_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline PayLevelDomain pld(const std::string& name) { return PayLevelDomain(name); }

// Site names s000.com..., third party names t000.net..., so index order
// equals name order.
inline std::string site_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "s%04zu.com", i);
    return buf;
}

inline std::string tracker_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "t%04zu.net", i);
    return buf;
}

// Random bipartite graph with every site and third party present.
inline BipartiteGraph random_bipartite(Rng& rng, std::size_t sites, std::size_t third_parties, double p) {
    std::vector<EmbeddingEdge> edges;
    for (std::size_t i = 0; i < sites; ++i) {
        for (std::size_t j = 0; j < third_parties; ++j) {
            if (rng.uniform01() < p) edges.push_back({pld(site_name(i)), pld(tracker_name(j)), 1 + rng.uniform_index(3)});
        }
    }
    std::vector<PayLevelDomain> all_sites;
    for (std::size_t i = 0; i < sites; ++i) all_sites.push_back(pld(site_name(i)));
    return build_bipartite(edges, all_sites);
}

// Undirected graph from an edge list over vertices v0..v(n-1).
inline CooccurrenceGraph make_graph(std::size_t n, const std::vector<WeightedEdge>& edges) {
    std::vector<PayLevelDomain> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back(pld(tracker_name(i)));
    return CooccurrenceGraph(names, std::vector<std::uint64_t>(n, 1), edges);
}

// Adjusted Rand index between two labelings.
inline double adjusted_rand_index(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> joint;
    std::map<std::uint32_t, double> ra, rb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        joint[{a[i], b[i]}] += 1;
        ra[a[i]] += 1;
        rb[b[i]] += 1;
    }
    auto c2 = [](double x) { return x * (x - 1) / 2; };
    double index = 0, sa = 0, sb = 0;
    for (const auto& [k, v] : joint) index += c2(v);
    for (const auto& [k, v] : ra) sa += c2(v);
    for (const auto& [k, v] : rb) sb += c2(v);
    const double expected = sa * sb / c2(static_cast<double>(a.size()));
    const double max_index = (sa + sb) / 2;
    if (max_index == expected) return 1.0;
    return (index - expected) / (max_index - expected);
}

// Planted partition: `blocks` groups of `size` vertices.
inline CooccurrenceGraph planted_graph(Rng& rng, std::size_t blocks, std::size_t size, double p_in, double p_out) {
    std::vector<WeightedEdge> edges;
    const std::size_t n = blocks * size;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            const double p = u / size == v / size ? p_in : p_out;
            if (rng.uniform01() < p) edges.push_back({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v), 1});
        }
    }
    return make_graph(n, edges);
}

}  // namespace tracknet::testing
