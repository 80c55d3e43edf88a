#include "tracknet/cluster.hpp"

#include <algorithm>
#include <future>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "tracknet/error.hpp"
#include "tracknet/rng.hpp"
#include "tracknet/stats.hpp"

namespace tracknet {

Partition Partition::normalized(const std::vector<std::uint32_t>& raw) {
    Partition p;
    p.assignment.resize(raw.size());
    std::vector<std::uint32_t> relabel;
    std::vector<std::uint32_t> seen;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto c = raw[i];
        if (c >= relabel.size()) relabel.resize(c + 1, std::numeric_limits<std::uint32_t>::max());
        if (relabel[c] == std::numeric_limits<std::uint32_t>::max()) relabel[c] = static_cast<std::uint32_t>(p.community_count++);
        p.assignment[i] = relabel[c];
    }
    return p;
}

Partition Partition::singletons(std::size_t n) {
    Partition p;
    p.assignment.resize(n);
    std::iota(p.assignment.begin(), p.assignment.end(), 0u);
    p.community_count = n;
    return p;
}

double modularity(const CooccurrenceGraph& g, const Partition& p, double resolution) {
    if (p.assignment.size() != g.num_vertices()) throw Error("partition size does not match the graph");
    if (g.total_weight() == 0) throw Error("modularity is undefined on a graph without edges");
    const double two_m = 2.0 * static_cast<double>(g.total_weight());
    std::vector<double> internal(p.community_count, 0.0);
    std::vector<double> total(p.community_count, 0.0);
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        const auto c = p.assignment[v];
        if (c >= p.community_count) throw Error("partition id out of range");
        for (const auto& nb : g.neighbors(v)) {
            const auto w = static_cast<double>(nb.weight);
            total[c] += w;
            if (p.assignment[nb.vertex] == c) internal[c] += w;
        }
    }
    double q = 0.0;
    for (std::size_t c = 0; c < p.community_count; ++c) {
        const double share = total[c] / two_m;
        q += internal[c] / two_m - resolution * share * share;
    }
    return q;
}

namespace {

// Symmetric weighted graph with explicit self-loop weight A_vv (after
// aggregation A_CC counts every internal edge twice).
struct LevelGraph {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adjacency;
    std::vector<double> self_loop;

    std::size_t size() const { return adjacency.size(); }
    double strength(std::size_t v) const {
        double k = self_loop[v];
        for (const auto& [u, w] : adjacency[v]) k += w;
        return k;
    }
};

LevelGraph level_graph_from(const CooccurrenceGraph& g, bool weighted) {
    LevelGraph lg;
    lg.adjacency.resize(g.num_vertices());
    lg.self_loop.assign(g.num_vertices(), 0.0);
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        for (const auto& nb : g.neighbors(v))
            lg.adjacency[v].emplace_back(nb.vertex, weighted ? static_cast<double>(nb.weight) : 1.0);
    }
    return lg;
}

// One round of local moves. Returns the community of each vertex (raw ids)
// and whether anything moved.
bool local_moves(const LevelGraph& g, double resolution, Rng& rng, std::vector<std::uint32_t>& community) {
    const std::size_t n = g.size();
    std::vector<double> k(n);
    double two_m = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
        k[v] = g.strength(v);
        two_m += k[v];
    }
    community.resize(n);
    std::iota(community.begin(), community.end(), 0u);
    std::vector<double> tot = k;
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    rng.shuffle(std::span<std::uint32_t>(order));

    // Gains are in units of edge weight; a move must raise Q by more than this.
    const double min_gain = 1e-12 * two_m;
    std::vector<double> link(n, -1.0);
    std::vector<std::uint32_t> touched;
    bool any_move = false;
    for (bool moved = true; moved;) {
        moved = false;
        for (const auto v : order) {
            const auto own = community[v];
            touched.clear();
            for (const auto& [u, w] : g.adjacency[v]) {
                const auto c = community[u];
                if (link[c] < 0.0) {
                    link[c] = 0.0;
                    touched.push_back(c);
                }
                link[c] += w;
            }
            tot[own] -= k[v];
            const double scale = resolution * k[v] / two_m;
            auto best = own;
            double best_gain = std::max(link[own], 0.0) - tot[own] * scale;
            for (const auto c : touched) {
                if (c == own) continue;
                const double gain = link[c] - tot[c] * scale;
                if (gain > best_gain + min_gain) {
                    best = c;
                    best_gain = gain;
                }
            }
            tot[best] += k[v];
            for (const auto c : touched) link[c] = -1.0;
            link[own] = -1.0;
            if (best != own) {
                community[v] = best;
                moved = true;
                any_move = true;
            }
        }
    }
    return any_move;
}

LevelGraph aggregate(const LevelGraph& g, const Partition& p) {
    LevelGraph out;
    out.adjacency.resize(p.community_count);
    out.self_loop.assign(p.community_count, 0.0);
    std::vector<std::vector<std::uint32_t>> members(p.community_count);
    for (std::size_t v = 0; v < g.size(); ++v) members[p.assignment[v]].push_back(static_cast<std::uint32_t>(v));

    std::vector<double> link(p.community_count, 0.0);
    std::vector<std::uint32_t> touched;
    for (std::uint32_t c = 0; c < p.community_count; ++c) {
        touched.clear();
        for (const auto v : members[c]) {
            out.self_loop[c] += g.self_loop[v];
            for (const auto& [u, w] : g.adjacency[v]) {
                const auto d = p.assignment[u];
                if (d == c) {
                    out.self_loop[c] += w;
                    continue;
                }
                if (link[d] == 0.0) touched.push_back(d);
                link[d] += w;
            }
        }
        std::sort(touched.begin(), touched.end());
        for (const auto d : touched) {
            out.adjacency[c].emplace_back(d, link[d]);
            link[d] = 0.0;
        }
    }
    return out;
}

}  // namespace

Partition louvain(const CooccurrenceGraph& g, const LouvainOptions& options) {
    if (g.num_edges() == 0) throw Error("louvain needs at least one edge");
    Rng rng(options.seed);
    LevelGraph level = level_graph_from(g, options.weighted);
    std::vector<std::uint32_t> membership(g.num_vertices());
    std::iota(membership.begin(), membership.end(), 0u);

    std::vector<std::uint32_t> raw;
    while (true) {
        if (!local_moves(level, options.resolution, rng, raw)) break;
        const auto p = Partition::normalized(raw);
        for (auto& m : membership) m = p.assignment[m];
        if (p.community_count == level.size()) break;
        level = aggregate(level, p);
    }
    return Partition::normalized(membership);
}

CooccurrenceGraph prune_g2(const CooccurrenceGraph& g, const BipartiteGraph& b, const PruneOptions& options) {
    const std::uint64_t n = b.num_sites();
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        const auto index = b.third_party_index(g.vertex(v));
        if (!index || b.third_party_degree(*index) != g.diagonal(v))
            throw Error("co-occurrence graph does not match the bipartite graph at " + g.vertex(v).name());
    }
    double threshold = options.alpha_level;
    if (options.bonferroni && g.num_edges() > 0) threshold /= static_cast<double>(g.num_edges());

    std::vector<WeightedEdge> kept;
    for (const auto& e : g.edges()) {
        const std::uint64_t n1 = g.diagonal(e.u);
        const std::uint64_t n2 = g.diagonal(e.v);
        if (e.weight > std::min(n1, n2) || n1 + n2 - e.weight > n)
            throw Error("co-occurrence count inconsistent with site counts for " + g.vertex(e.u).name() + " and " +
                        g.vertex(e.v).name());
        if (n1 == n || n2 == n) continue;  // a margin of the table is zero
        const auto observed = static_cast<unsigned __int128>(e.weight) * n;
        if (observed <= static_cast<unsigned __int128>(n1) * n2) continue;
        const ContingencyTable2x2 table{e.weight, n1 - e.weight, n2 - e.weight, n - n1 - n2 + e.weight};
        if (g2_test(table).p_value < threshold) kept.push_back(e);
    }
    return g.with_edges(std::move(kept));
}

namespace {

CooccurrenceGraph drop_isolated(const CooccurrenceGraph& g) {
    std::vector<bool> keep(g.num_vertices());
    for (std::size_t v = 0; v < g.num_vertices(); ++v) keep[v] = g.degree(v) > 0;
    return g.induced(keep);
}

CooccurrenceGraph unit_weights(const CooccurrenceGraph& g) {
    std::vector<WeightedEdge> edges(g.edges().begin(), g.edges().end());
    for (auto& e : edges) e.weight = 1;
    return g.with_edges(std::move(edges));
}

struct Candidate {
    Partition partition;
    double q = 0.0;
    double resolution = 0.0;
    std::uint64_t seed = 0;
};

bool better(const Candidate& x, const Candidate& y) {
    if (x.q != y.q) return x.q > y.q;
    if (x.partition.community_count != y.partition.community_count)
        return x.partition.community_count < y.partition.community_count;
    return x.partition.assignment < y.partition.assignment;
}

Candidate grid_search(const CooccurrenceGraph& g, const ClusterConfig& config) {
    if (config.resolutions.empty() || config.seeds == 0) throw Error("cluster grid is empty");
    struct Cell {
        double resolution;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (const auto r : config.resolutions)
        for (std::size_t s = 0; s < config.seeds; ++s) cells.push_back({r, config.base_seed + s});

    std::vector<Candidate> results(cells.size());
    auto run = [&](std::size_t i) {
        auto p = louvain(g, {cells[i].resolution, cells[i].seed, true});
        results[i] = {p, modularity(g, p, 1.0), cells[i].resolution, cells[i].seed};
    };
    const unsigned threads = std::max(1u, config.threads);
    if (threads == 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run(i);
    } else {
        std::vector<std::future<void>> workers;
        for (unsigned t = 0; t < threads; ++t) {
            workers.push_back(std::async(std::launch::async, [&, t] {
                for (std::size_t i = t; i < cells.size(); i += threads) run(i);
            }));
        }
        for (auto& w : workers) w.get();
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i)
        if (better(results[i], results[best])) best = i;
    return results[best];
}

std::string label_or_unknown(const std::string& s) { return s.empty() ? std::string("unknown") : s; }

std::map<std::string, double> enrichment(const Histogram& local, const Histogram& corpus) {
    std::size_t local_total = 0, corpus_total = 0;
    for (const auto& [k, c] : local) local_total += c;
    for (const auto& [k, c] : corpus) corpus_total += c;
    std::map<std::string, double> out;
    for (const auto& [key, count] : local) {
        auto it = corpus.find(key);
        if (it == corpus.end() || it->second == 0 || local_total == 0) continue;
        out[key] = (static_cast<double>(count) / static_cast<double>(local_total)) /
                   (static_cast<double>(it->second) / static_cast<double>(corpus_total));
    }
    return out;
}

std::string stage_text(const char* name, const StageSize& s) {
    return std::string(name) + " " + std::to_string(s.vertices) + " vertices/" + std::to_string(s.edges) + " edges";
}

StageSize size_of(const CooccurrenceGraph& g) { return {g.num_vertices(), g.num_edges()}; }

}  // namespace

ClusterReport cluster_pipeline(const BipartiteGraph& b, const LabelTable& labels, const ClusterConfig& config) {
    ClusterReport report;
    report.config = config;

    const auto projected = one_mode_projection(b);
    report.projected = size_of(projected);
    const auto pruned = drop_isolated(prune_g2(projected, b, config.prune));
    report.pruned = size_of(pruned);

    auto fail = [&](const StageSize& core) {
        report.core = core;
        throw Error("nothing left to cluster: " + stage_text("projected", report.projected) + ", " +
                    stage_text("pruned", report.pruned) + ", " + std::to_string(config.core_k) + "-" +
                    stage_text("core", report.core));
    };

    Candidate best;
    if (config.core_order == CoreOrder::before_clustering) {
        auto core = k_core(pruned, config.core_k);
        if (core.num_edges() == 0) fail(size_of(core));
        report.core = size_of(core);
        report.graph = config.weighted ? core : unit_weights(core);
        best = grid_search(report.graph, config);
    } else {
        if (pruned.num_edges() == 0) fail({});
        const auto clustered_graph = config.weighted ? pruned : unit_weights(pruned);
        best = grid_search(clustered_graph, config);
        auto core = k_core(clustered_graph, config.core_k);
        if (core.num_edges() == 0) fail(size_of(core));
        report.core = size_of(core);
        std::vector<std::uint32_t> raw;
        raw.reserve(core.num_vertices());
        const auto names = clustered_graph.vertices();
        for (const auto& v : core.vertices()) {
            auto it = std::lower_bound(names.begin(), names.end(), v);
            raw.push_back(best.partition.assignment[static_cast<std::size_t>(it - names.begin())]);
        }
        best.partition = Partition::normalized(raw);
        best.q = modularity(core, best.partition, 1.0);
        report.graph = std::move(core);
    }
    report.modularity = best.q;
    report.best_resolution = best.resolution;
    report.best_seed = best.seed;
    report.partition = best.partition;

    for (std::size_t j = 0; j < b.num_third_parties(); ++j) {
        if (b.third_party_degree(j) == 0) continue;
        const auto* label = labels.find(b.third_party(j));
        ++report.corpus_country[label ? label_or_unknown(label->country) : "unknown"];
        ++report.corpus_category[label ? label_or_unknown(label->category) : "unknown"];
    }
    for (std::size_t i = 0; i < b.num_sites(); ++i)
        if (b.site_degree(i) > 0) ++report.corpus_tld[std::string(b.site(i).tld())];

    report.communities.resize(report.partition.community_count);
    std::vector<std::set<std::uint32_t>> sites(report.communities.size());
    for (std::size_t c = 0; c < report.communities.size(); ++c) report.communities[c].id = static_cast<std::uint32_t>(c);
    for (std::size_t v = 0; v < report.graph.num_vertices(); ++v) {
        auto& community = report.communities[report.partition.assignment[v]];
        const auto& pld = report.graph.vertex(v);
        community.members.push_back(pld.name());
        const auto* label = labels.find(pld);
        ++community.country_histogram[label ? label_or_unknown(label->country) : "unknown"];
        ++community.category_histogram[label ? label_or_unknown(label->category) : "unknown"];
        if (auto j = b.third_party_index(pld)) {
            for (const auto s : b.sites_of(*j)) sites[community.id].insert(s);
        }
    }
    for (auto& community : report.communities) {
        for (const auto s : sites[community.id]) ++community.tld_histogram[std::string(b.site(s).tld())];
        community.country_enrichment = enrichment(community.country_histogram, report.corpus_country);
        community.category_enrichment = enrichment(community.category_histogram, report.corpus_category);
        community.tld_enrichment = enrichment(community.tld_histogram, report.corpus_tld);
    }
    return report;
}

nlohmann::json to_json(const ClusterConfig& config) {
    return {
        {"alpha_level", config.prune.alpha_level},
        {"bonferroni", config.prune.bonferroni},
        {"resolutions", config.resolutions},
        {"seeds", config.seeds},
        {"base_seed", config.base_seed},
        {"weighted", config.weighted},
        {"core_order", config.core_order == CoreOrder::before_clustering ? "before_clustering" : "after_clustering"},
        {"core_k", config.core_k},
    };
}

nlohmann::json to_json(const ClusterReport& report) {
    auto stage = [](const StageSize& s) { return nlohmann::json{{"vertices", s.vertices}, {"edges", s.edges}}; };
    nlohmann::json communities = nlohmann::json::array();
    for (const auto& c : report.communities) {
        communities.push_back({
            {"id", c.id},
            {"size", c.members.size()},
            {"members", c.members},
            {"country_histogram", c.country_histogram},
            {"category_histogram", c.category_histogram},
            {"tld_histogram", c.tld_histogram},
            {"country_enrichment", c.country_enrichment},
            {"category_enrichment", c.category_enrichment},
            {"tld_enrichment", c.tld_enrichment},
        });
    }
    return {
        {"config", to_json(report.config)},
        {"Q", report.modularity},
        {"best_resolution", report.best_resolution},
        {"best_seed", report.best_seed},
        {"stages", {{"projected", stage(report.projected)}, {"pruned", stage(report.pruned)}, {"core", stage(report.core)}}},
        {"corpus", {{"country", report.corpus_country}, {"category", report.corpus_category}, {"tld", report.corpus_tld}}},
        {"communities", communities},
    };
}

std::string to_dot(const ClusterReport& report) {
    std::ostringstream out;
    out << "graph trackers {\n  node [style=filled, colorscheme=set312];\n";
    const auto& g = report.graph;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        const auto c = report.partition.assignment[v];
        out << "  \"" << g.vertex(v).name() << "\" [community=" << c << ", fillcolor=" << (c % 12) + 1 << "];\n";
    }
    for (const auto& e : g.edges())
        out << "  \"" << g.vertex(e.u).name() << "\" -- \"" << g.vertex(e.v).name() << "\" [weight=" << e.weight << "];\n";
    out << "}\n";
    return out.str();
}

}  // namespace tracknet
