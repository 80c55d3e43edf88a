#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "tracknet/bipartite.hpp"
#include "tracknet/cooccurrence.hpp"
#include "tracknet/labels.hpp"

namespace tracknet {

// Community id per vertex; ids are contiguous from 0.
struct Partition {
    std::vector<std::uint32_t> assignment;
    std::size_t community_count = 0;

    // Relabels ids by first appearance in vertex order.
    static Partition normalized(const std::vector<std::uint32_t>& raw);
    static Partition singletons(std::size_t n);
};

// Q = 1/(2m) sum_ij [A_ij - gamma k_i k_j / (2m)] delta(c_i, c_j) over the
// weighted adjacency. Throws Error if the partition size does not match or
// the graph has no edge weight.
double modularity(const CooccurrenceGraph& g, const Partition& p, double resolution = 1.0);

struct LouvainOptions {
    double resolution = 1.0;
    std::uint64_t seed = 1;
    bool weighted = true;  // false: every edge counts 1
};

// Two-phase Louvain (local moves, then aggregation) until no vertex moves.
// Visiting order is shuffled with the seed. Throws Error on a graph without
// edges.
Partition louvain(const CooccurrenceGraph& g, const LouvainOptions& options = {});

struct PruneOptions {
    double alpha_level = 0.01;
    bool bonferroni = true;  // divide alpha_level by the number of candidate pairs
};

// Keeps a pair when its site-level 2x2 table (t1 present/absent x t2
// present/absent over all sites of b) is significant under G^2 and the pair
// co-occurs more often than independence predicts.
CooccurrenceGraph prune_g2(const CooccurrenceGraph& g, const BipartiteGraph& b, const PruneOptions& options = {});

enum class CoreOrder { before_clustering, after_clustering };

struct ClusterConfig {
    PruneOptions prune{};
    std::vector<double> resolutions{0.5, 0.75, 1.0, 1.25, 1.5};
    std::size_t seeds = 10;
    std::uint64_t base_seed = 1;
    bool weighted = true;
    CoreOrder core_order = CoreOrder::before_clustering;
    std::size_t core_k = 2;
    unsigned threads = 1;
};

using Histogram = std::map<std::string, std::size_t>;

struct Community {
    std::uint32_t id = 0;
    std::vector<std::string> members;  // sorted
    Histogram country_histogram;
    Histogram category_histogram;
    Histogram tld_histogram;           // TLDs of sites embedding any member
    std::map<std::string, double> country_enrichment;
    std::map<std::string, double> category_enrichment;
    std::map<std::string, double> tld_enrichment;
};

struct StageSize {
    std::size_t vertices = 0;
    std::size_t edges = 0;
};

struct ClusterReport {
    ClusterConfig config;
    double modularity = 0.0;
    double best_resolution = 0.0;
    std::uint64_t best_seed = 0;
    StageSize projected, pruned, core;
    CooccurrenceGraph graph;  // the clustered graph
    Partition partition;
    std::vector<Community> communities;
    Histogram corpus_country, corpus_category, corpus_tld;
};

// Projection -> G^2 pruning -> k-core -> Louvain grid search (best
// modularity, ties to fewer communities, then smaller assignment) ->
// per-community attribute histograms. Throws Error with stage sizes when the
// pruned core is empty.
ClusterReport cluster_pipeline(const BipartiteGraph& b, const LabelTable& labels, const ClusterConfig& config = {});

nlohmann::json to_json(const ClusterConfig& config);
nlohmann::json to_json(const ClusterReport& report);
// Graphviz export, vertices colored by community.
std::string to_dot(const ClusterReport& report);

}  // namespace tracknet
