#include "groupmark/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>

#include "groupmark/error.hpp"

namespace groupmark::csv {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.emplace_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return fields;
}

} // namespace

std::string format(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", value == 0.0 ? 0.0 : value);
    return buf;
}

std::string format_exact(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::size_t Table::column(std::string_view name) const {
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == name) {
            return c;
        }
    }
    throw Error(ErrorKind::Input, "missing column '" + std::string(name) + "'");
}

Table read(std::istream& in, std::string_view source) {
    Table table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        auto fields = split(line);
        if (table.header.empty()) {
            table.header = std::move(fields);
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw Error(ErrorKind::Input, std::string(source) + ":" + std::to_string(line_no) + ": expected " +
                                              std::to_string(table.header.size()) + " fields, found " +
                                              std::to_string(fields.size()));
        }
        table.rows.push_back(std::move(fields));
    }
    if (table.header.empty()) {
        throw Error(ErrorKind::Input, std::string(source) + ": missing header row");
    }
    return table;
}

Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Input, "cannot open " + path);
    }
    return read(in, path);
}

double parse_number(std::string_view field, std::string_view context) {
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw Error(ErrorKind::Input, std::string(context) + ": '" + std::string(field) + "' is not a number");
    }
    return value;
}

} // namespace groupmark::csv
