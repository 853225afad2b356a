#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace groupmark::csv {

/// Six significant digits, the precision of every report file.
std::string format(double value);

/// Round-trip precision, used when exporting data meant to be re-ingested.
std::string format_exact(double value);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws ErrorKind::Input when absent.
    std::size_t column(std::string_view name) const;
};

/// Comma-separated, no quoting, surrounding whitespace trimmed, blank lines
/// skipped. Every row must have as many fields as the header.
Table read(std::istream& in, std::string_view source);
Table read_file(const std::string& path);

double parse_number(std::string_view field, std::string_view context);

} // namespace groupmark::csv
