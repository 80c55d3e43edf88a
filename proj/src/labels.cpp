#include "tracknet/labels.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>

#include "tracknet/csv.hpp"
#include "tracknet/error.hpp"

namespace tracknet {
namespace {

std::string normalize_pld(std::string_view text) {
    std::string out;
    for (char c : text) {
        if (c == ' ' || c == '\t') continue;
        out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
    }
    while (!out.empty() && out.back() == '.') out.pop_back();
    return out;
}

}  // namespace

std::optional<bool> parse_bool(std::string_view text) {
    std::string t;
    for (char c : text) {
        if (c != ' ' && c != '\t') t.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
    }
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    return std::nullopt;
}

LabelTable::LabelTable(std::vector<ThirdPartyLabel> rows) : rows_(std::move(rows)) {
    std::sort(rows_.begin(), rows_.end(), [](const auto& a, const auto& b) { return a.pld < b.pld; });
    auto dup = std::adjacent_find(rows_.begin(), rows_.end(), [](const auto& a, const auto& b) { return a.pld == b.pld; });
    if (dup != rows_.end()) throw Error("labels: duplicate row for " + dup->pld.name());
}

LabelTable LabelTable::read_csv(std::istream& in) {
    static constexpr std::array<std::string_view, 5> kColumns = {"pld", "company", "category", "country", "is_tracker"};
    auto table = read_csv_table(in, kColumns, "labels");
    const auto pld = *table.column("pld");
    const auto company = *table.column("company");
    const auto category = *table.column("category");
    const auto country = *table.column("country");
    const auto tracker = *table.column("is_tracker");
    std::vector<ThirdPartyLabel> rows;
    rows.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        auto flag = parse_bool(row[tracker]);
        if (!flag) throw Error("labels: row " + std::to_string(r + 2) + ": bad is_tracker value '" + row[tracker] + "'");
        auto name = normalize_pld(row[pld]);
        if (name.empty()) throw Error("labels: row " + std::to_string(r + 2) + ": empty pld");
        rows.push_back(ThirdPartyLabel{PayLevelDomain(std::move(name)), row[company], row[category], row[country], *flag});
    }
    return LabelTable(std::move(rows));
}

LabelTable LabelTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open labels file: " + path.string());
    return read_csv(in);
}

const ThirdPartyLabel* LabelTable::find(const PayLevelDomain& pld) const {
    auto it = std::lower_bound(rows_.begin(), rows_.end(), pld, [](const auto& row, const auto& key) { return row.pld < key; });
    return it != rows_.end() && it->pld == pld ? &*it : nullptr;
}

std::vector<std::string> LabelTable::tracker_companies() const {
    std::set<std::string> companies;
    for (const auto& row : rows_) {
        if (row.is_tracker && !row.company.empty()) companies.insert(row.company);
    }
    return {companies.begin(), companies.end()};
}

std::vector<PayLevelDomain> LabelTable::tracker_plds_of(std::string_view company) const {
    std::vector<PayLevelDomain> out;
    for (const auto& row : rows_) {
        if (row.is_tracker && row.company == company) out.push_back(row.pld);
    }
    return out;
}

}  // namespace tracknet
