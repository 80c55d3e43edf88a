#pragma once

#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "tracknet/cli.hpp"

namespace tracknet::testing {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

inline CliResult run(std::vector<std::string> args) {
    args.insert(args.begin(), "tracknet");
    std::ostringstream out, err;
    CliResult r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

// extract plus every analysis on the mini corpus. Returns the first
// failing command's result, or a zero result.
inline CliResult full_mini_run(const std::filesystem::path& dir, const std::string& seed = "42") {
    const auto data = [](const char* name) { return test_data(name).string(); };
    const std::vector<std::string> common{"--out", dir.string(), "--seed", seed};
    const std::vector<std::string> inputs{"--labels", data("mini_labels.csv"), "--hyperlinks", data("mini_hyperlinks.tsv"),
                                          "--categories", data("mini_categories.csv"), "--indicators",
                                          data("mini_indicators.csv"), "--powerlaw-min-samples", "10",
                                          "--permutations", "200"};
    std::vector<std::vector<std::string>> commands{{"extract", "--corpus", data("mini_corpus")}};
    for (const char* name : {"pagerank", "rank-share", "condprob", "powerlaw", "assortativity", "cooccur", "country",
                             "category"}) {
        std::vector<std::string> cmd{"analyze"};
        cmd.insert(cmd.end(), inputs.begin(), inputs.end());
        cmd.push_back(name);
        commands.push_back(cmd);
    }
    for (auto cmd : commands) {
        cmd.insert(cmd.begin(), common.begin(), common.end());
        auto r = run(cmd);
        if (r.code != 0) return r;
    }
    return {};
}

// Relative path -> bytes for every regular file under `dir`.
inline std::map<std::string, std::string> snapshot(const std::filesystem::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file()) files[std::filesystem::relative(entry.path(), dir).string()] = read_file(entry.path());
    }
    return files;
}

}  // namespace tracknet::testing
