#pragma once

// Minimal CSV helpers shared by signal, node-data and report I/O.
// All floats are written with 17 significant digits so they round-trip.

#include "error.hpp"

#include <cstdio>
#include <fstream>
#include <locale>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace kantomm::csv {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::vector<std::string> split_row(std::string_view line) {
    std::vector<std::string> out;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell.push_back(c);
        }
    }
    out.push_back(cell);
    for (auto& s : out) {
        const auto first = s.find_first_not_of(" \t");
        const auto last = s.find_last_not_of(" \t");
        s = first == std::string::npos ? std::string{} : s.substr(first, last - first + 1);
    }
    return out;
}

/// Parses the whole cell as a double; nothing else may follow the number.
inline bool try_parse_double(const std::string& cell, double& out) {
    if (cell.empty()) return false;
    std::istringstream in(cell);
    in.imbue(std::locale::classic());
    in >> out;
    return !in.fail() && in.peek() == std::char_traits<char>::eof();
}

struct Table {
    std::vector<std::string> header; // empty when the file has no header row
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers; // 1-based source line of each row
};

/// Reads a CSV file. The first row counts as a header when any of its cells is
/// not a number. Blank lines and lines starting with '#' are skipped.
inline Table read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) detail::fail(ErrorKind::Io, "cannot open '" + path + "'");
    Table t;
    std::string line;
    std::size_t line_no = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r" || line[0] == '#') continue;
        auto cells = split_row(line);
        if (first) {
            first = false;
            bool numeric = true;
            double dummy = 0.0;
            for (const auto& c : cells) numeric = numeric && try_parse_double(c, dummy);
            if (!numeric) {
                t.header = std::move(cells);
                continue;
            }
        }
        t.rows.push_back(std::move(cells));
        t.line_numbers.push_back(line_no);
    }
    if (in.bad()) detail::fail(ErrorKind::Io, "read error on '" + path + "'");
    return t;
}

/// Column selector: a header name, or a 0-based index given as digits.
inline std::size_t resolve_column(const Table& t, const std::string& column) {
    for (std::size_t i = 0; i < t.header.size(); ++i)
        if (t.header[i] == column) return i;
    if (!column.empty() && column.find_first_not_of("0123456789") == std::string::npos)
        return static_cast<std::size_t>(std::stoul(column));
    detail::fail(ErrorKind::Parse, "column '" + column + "' not found");
}

/// Extracts one numeric column; the error names the offending line and column.
inline std::vector<double> numeric_column(const Table& t, std::size_t col) {
    std::vector<double> out;
    out.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        double v = 0.0;
        if (col >= row.size() || !try_parse_double(row[col], v))
            detail::fail(ErrorKind::Parse, "row " + std::to_string(t.line_numbers[r]) +
                                               ", column " + std::to_string(col) +
                                               ": not a number");
        out.push_back(v);
    }
    return out;
}

} // namespace kantomm::csv
