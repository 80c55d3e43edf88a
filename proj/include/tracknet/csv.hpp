#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tracknet {

// RFC 4180 reader: quoted fields, doubled quotes, embedded line breaks.
// A UTF-8 byte-order mark at the start is skipped.
std::vector<std::vector<std::string>> parse_csv(std::istream& in);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::optional<std::size_t> column(std::string_view name) const;
};

// First row is the header; every `required` column must be present and
// every row must have the header's width. Throws Error otherwise, naming
// `what` in the message.
CsvTable read_csv_table(std::istream& in, std::span<const std::string_view> required, std::string_view what);

// Quotes a field when it contains a comma, quote or line break.
std::string csv_field(std::string_view value);

void write_csv_row(std::ostream& out, std::span<const std::string> fields);

// Shortest representation that round-trips a double ("%.17g" trimmed).
std::string format_double(double value);

// Fixed 17 significant digits, as used in rank vector files.
std::string format_double17(double value);

}  // namespace tracknet
