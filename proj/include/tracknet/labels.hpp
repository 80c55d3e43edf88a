#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tracknet/domain.hpp"

namespace tracknet {

struct ThirdPartyLabel {
    PayLevelDomain pld;
    std::string company;
    std::string category;
    std::string country;
    bool is_tracker = false;
};

// Curated third-party metadata, read from `pld,company,category,country,is_tracker`.
class LabelTable {
public:
    LabelTable() = default;
    explicit LabelTable(std::vector<ThirdPartyLabel> rows);

    static LabelTable read_csv(std::istream& in);
    static LabelTable load(const std::filesystem::path& path);

    const ThirdPartyLabel* find(const PayLevelDomain& pld) const;
    std::span<const ThirdPartyLabel> rows() const noexcept { return rows_; }
    bool empty() const noexcept { return rows_.empty(); }

    // Sorted, distinct companies owning at least one tracker PLD.
    std::vector<std::string> tracker_companies() const;
    // Tracker PLDs of a company, sorted.
    std::vector<PayLevelDomain> tracker_plds_of(std::string_view company) const;

private:
    std::vector<ThirdPartyLabel> rows_;  // sorted by pld, unique
};

// Accepts true/false, 1/0, yes/no (case-insensitive).
std::optional<bool> parse_bool(std::string_view text);

}  // namespace tracknet
