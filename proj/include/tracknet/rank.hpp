#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tracknet/bipartite.hpp"
#include "tracknet/domain.hpp"
#include "tracknet/hyperlink.hpp"
#include "tracknet/labels.hpp"

namespace tracknet {

enum class DanglingPolicy {
    uniform,    // mass of nodes without out-links is spread over all nodes
    self_loop,  // such nodes keep their own mass
};

struct PageRankOptions {
    double damping = 0.85;
    double tolerance = 1e-10;  // on the L1 change between iterations
    int max_iterations = 200;
    DanglingPolicy dangling = DanglingPolicy::uniform;
};

// PageRank score per PLD; scores sum to 1.
class RankVector {
public:
    RankVector() = default;
    // `vertices` sorted and unique, same length as `scores`.
    RankVector(std::vector<PayLevelDomain> vertices, std::vector<double> scores);

    std::span<const PayLevelDomain> vertices() const noexcept { return vertices_; }
    std::span<const double> scores() const noexcept { return scores_; }
    std::size_t size() const noexcept { return scores_.size(); }
    // Zero for PLDs outside the hyperlink graph.
    double score(const PayLevelDomain& pld) const;

    // Scores aligned with g's site order.
    std::vector<double> site_scores(const BipartiteGraph& g) const;

private:
    std::vector<PayLevelDomain> vertices_;
    std::vector<double> scores_;
};

struct PageRankResult {
    RankVector ranks;
    int iterations = 0;
    bool converged = false;
    double residual = 0.0;  // L1 change of the last iteration
};

// Power iteration with uniform teleportation. Throws Error on an empty graph
// or out-of-range parameters; non-convergence is reported, not thrown.
PageRankResult pagerank(const HyperlinkGraph& g, const PageRankOptions& options = {});

// pld<TAB>score with 17 significant digits, in vertex order.
void write_rank_tsv(std::ostream& out, const RankVector& ranks);
RankVector read_rank_tsv(std::istream& in);

// A subset of the sites of one bipartite graph.
class DomainSet {
public:
    DomainSet() = default;

    static DomainSet all(const BipartiteGraph& g);
    // Sites whose last label equals `tld` ("de", without the dot).
    static DomainSet with_tld(const BipartiteGraph& g, std::string_view tld);
    // Intersection of `names` with the graph's sites.
    static DomainSet from_sites(const BipartiteGraph& g, std::span<const PayLevelDomain> names);
    static DomainSet from_indices(std::vector<std::uint32_t> sites);

    std::span<const std::uint32_t> sites() const noexcept { return sites_; }
    std::size_t size() const noexcept { return sites_.size(); }
    bool empty() const noexcept { return sites_.empty(); }

private:
    std::vector<std::uint32_t> sites_;  // sorted, unique
};

// Third parties whose embedding counts for a share: one PLD, or the union
// of a company's PLDs. Indices refer to the graph's right vertex set.
struct ShareTarget {
    std::string name;
    std::vector<std::uint32_t> third_parties;  // sorted
};

// Throws Error when the PLD is in neither the graph nor the labels.
ShareTarget target_for_pld(const BipartiteGraph& g, const PayLevelDomain& pld, const LabelTable* labels = nullptr);
// Tracker PLDs of the company that occur in g. Throws Error for an unknown company.
ShareTarget target_for_company(const BipartiteGraph& g, const LabelTable& labels, std::string_view company);

// Sites of D that embed at least one of the target's third parties.
std::vector<std::uint32_t> covered_sites(const DomainSet& d, const ShareTarget& t, const BipartiteGraph& g);

// Sum of PageRank over covered sites / sum over D. Throws Error when D is
// empty or carries no rank mass.
double rank_share(const DomainSet& d, const ShareTarget& t, const BipartiteGraph& g, const RankVector& r);

// Covered sites / |D|. Throws Error when D is empty.
double domain_share(const DomainSet& d, const ShareTarget& t, const BipartiteGraph& g);

struct CompanyShare {
    std::string company;
    double rank_share = 0.0;
    double domain_share = 0.0;
};

// Companies with at least one covered site in D, by rank share descending,
// ties by name.
struct CompanyShareTable {
    std::vector<CompanyShare> rows;
};

CompanyShareTable company_shares(const DomainSet& d, const LabelTable& labels, const BipartiteGraph& g,
                                 const RankVector& r);

void write_company_shares_csv(std::ostream& out, const CompanyShareTable& table);

struct DominanceResult {
    bool dominant = false;
    double target_mass = 0.0;  // rank share of target companies in the top rows
    double top_mass = 0.0;     // rank share of all top rows
};

inline const std::set<std::string> kDefaultDominantCompanies = {"Facebook", "Google", "Twitter"};

// Whether the given companies hold more than half of the rank share mass of
// the top `top_n` companies. Throws Error when D has no company row or the
// company set is empty.
DominanceResult dominance_detail(const CompanyShareTable& table, const std::set<std::string>& companies,
                                 std::size_t top_n = 10);
bool dominance(const DomainSet& d, const LabelTable& labels, const BipartiteGraph& g, const RankVector& r,
               const std::set<std::string>& companies = kDefaultDominantCompanies);

}  // namespace tracknet
