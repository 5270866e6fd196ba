#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "zonogini/errors.hpp"

namespace zonogini {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

}  // namespace detail

/// Reads numeric rows from a CSV stream: one point per line, comma-separated,
/// '.' decimal separator. When has_header is true the first physical line is
/// skipped. Row/column positions in errors are 1-based and count physical
/// lines, header included. Blank lines are ignored.
inline std::vector<std::vector<double>> read_csv_rows(std::istream& in, bool has_header = false) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    bool skip_next = has_header;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_next) {
            skip_next = false;
            continue;
        }
        std::string_view rest = detail::trim(line);
        if (rest.empty()) continue;
        rest = line;
        std::vector<double> row;
        std::size_t col = 0;
        while (true) {
            ++col;
            const std::size_t comma = rest.find(',');
            std::string_view cell =
                comma == std::string_view::npos ? rest : rest.substr(0, comma);
            cell = detail::trim(cell);
            if (cell.empty())
                throw CsvError(line_no, col,
                               "empty cell at row " + std::to_string(line_no) + ", column " +
                                   std::to_string(col));
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
            if (ec != std::errc() || ptr != cell.data() + cell.size())
                throw CsvError(line_no, col,
                               "cannot parse '" + std::string(cell) + "' as a number at row " +
                                   std::to_string(line_no) + ", column " + std::to_string(col));
            row.push_back(value);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw CsvError(line_no, row.size(),
                           "row " + std::to_string(line_no) + " has " +
                               std::to_string(row.size()) + " columns, expected " +
                               std::to_string(rows.front().size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw CsvError(line_no, 0, "no data rows");
    return rows;
}

inline std::vector<std::vector<double>> read_csv_file(const std::string& path,
                                                      bool has_header = false) {
    std::ifstream in(path);
    if (!in) fail(errc::invalid_argument, "cannot open file: " + path);
    return read_csv_rows(in, has_header);
}

}  // namespace zonogini
