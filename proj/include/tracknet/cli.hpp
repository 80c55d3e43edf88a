#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tracknet/labels.hpp"

namespace tracknet {

// Everything a run depends on. Input paths left empty fall back to the
// file the producing stage writes into `out_dir`.
struct RunConfig {
    std::filesystem::path out_dir = "out";
    std::uint64_t seed = 42;
    unsigned threads = 1;

    std::vector<std::string> corpus;
    std::string suffix_list;
    std::string edges, sites, ranks, hyperlinks;
    std::string labels, countries, indicators, categories;

    double damping = 0.85;
    double tolerance = 1e-10;
    int max_iterations = 200;
    std::string dangling = "uniform";
    bool keep_self_loops = false;

    std::size_t top = 20;
    std::size_t dominance_top = 10;
    std::vector<std::string> companies{"Facebook", "Google", "Twitter"};

    std::size_t permutations = 1000;
    bool exact_mle = false;
    std::size_t powerlaw_min_samples = 50;
    std::size_t condprob_top = 15;
    std::string prevalence_level = "company";

    double g2_alpha = 0.01;
    bool no_bonferroni = false;
    std::vector<double> resolutions{0.5, 0.75, 1.0, 1.25, 1.5};
    std::size_t louvain_seeds = 10;
    bool unweighted = false;
    std::string core_order = "before";
    std::size_t core_k = 2;
};

// key=value lines; '#' starts a comment, blank lines are ignored. Keys are
// long flag names without the dashes.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

enum class Criticality { highly_critical, less_critical };

struct CategoryEntry {
    PayLevelDomain site;
    std::string category;
    Criticality criticality;
};

// `pld,category,criticality`; a category must keep one criticality.
std::vector<CategoryEntry> read_category_map(std::istream& in);

struct CountryRow {
    std::string tld;
    std::string country;
};

std::vector<CountryRow> read_country_table(std::istream& in);

inline const std::vector<std::string> kIndicatorColumns = {"democracy",  "press_freedom",  "english_pct",
                                                           "ad_spend_pc", "ad_spend_ratio", "us_trade_pc"};

struct CountryIndicators {
    std::string tld;
    std::vector<double> values;  // in kIndicatorColumns order
};

// Every TLD must appear in `countries`; values must be finite.
std::vector<CountryIndicators> read_country_indicators(std::istream& in, const std::vector<CountryRow>& countries);

// Entry point of the tracknet tool. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tracknet
