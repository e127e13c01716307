#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hydro_cba::csv {

/// Minimal comma-separated table: one header row, no quoting. Blank lines and
/// lines starting with '#' are skipped. Cells are whitespace-trimmed.
struct Table {
    std::filesystem::path source;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    /// 1-based line number of each row in the source file, for error messages.
    std::vector<std::size_t> lines;

    std::optional<std::size_t> column(std::string_view name) const;
    /// Throws ParseError naming the file when the column is absent.
    std::size_t require_column(std::string_view name) const;

    /// "file:line" for diagnostics.
    std::string where(std::size_t row) const;
};

Table read(const std::filesystem::path& path);
Table parse(std::string_view text, std::filesystem::path source = "<memory>");

double to_double(std::string_view cell, const Table& table, std::size_t row);
long long to_integer(std::string_view cell, const Table& table, std::size_t row);

void write(const std::filesystem::path& path, const std::vector<std::string>& header,
           const std::vector<std::vector<std::string>>& rows);

/// Shortest representation that parses back to the same double.
std::string format_number(double value);

} // namespace hydro_cba::csv
