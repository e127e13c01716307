#include "hydro_cba/csv.hpp"

#include "hydro_cba/error.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>

namespace hydro_cba::csv {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.emplace_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return cells;
}

} // namespace

std::optional<std::size_t> Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return i;
    return std::nullopt;
}

std::size_t Table::require_column(std::string_view name) const {
    if (auto idx = column(name))
        return *idx;
    throw Error(ErrorCode::ParseError, fmt::format("{}: missing column '{}'", source.string(), name));
}

std::string Table::where(std::size_t row) const {
    return fmt::format("{}:{}", source.string(), row < lines.size() ? lines[row] : 0);
}

Table parse(std::string_view text, std::filesystem::path source) {
    Table table;
    table.source = std::move(source);
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = text.size();
        const auto line = trim(text.substr(pos, nl - pos));
        pos = nl + 1;
        ++line_no;
        if (line.empty() || line.front() == '#')
            continue;
        auto cells = split(line);
        if (table.header.empty()) {
            table.header = std::move(cells);
            continue;
        }
        if (cells.size() > table.header.size())
            throw Error(ErrorCode::ParseError,
                        fmt::format("{}:{}: {} cells, header has {}", table.source.string(), line_no,
                                    cells.size(), table.header.size()));
        cells.resize(table.header.size());
        table.rows.push_back(std::move(cells));
        table.lines.push_back(line_no);
    }
    if (table.header.empty())
        throw Error(ErrorCode::ParseError, fmt::format("{}: no header row", table.source.string()));
    return table;
}

Table read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoError, fmt::format("cannot open '{}'", path.string()));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path);
}

double to_double(std::string_view cell, const Table& table, std::size_t row) {
    double value = 0.0;
    const auto* end = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(cell.data(), end, value);
    if (cell.empty() || ec != std::errc{} || ptr != end)
        throw Error(ErrorCode::ParseError, fmt::format("{}: not a number: '{}'", table.where(row), cell));
    return value;
}

long long to_integer(std::string_view cell, const Table& table, std::size_t row) {
    long long value = 0;
    const auto* end = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(cell.data(), end, value);
    if (cell.empty() || ec != std::errc{} || ptr != end)
        throw Error(ErrorCode::ParseError, fmt::format("{}: not an integer: '{}'", table.where(row), cell));
    return value;
}

void write(const std::filesystem::path& path, const std::vector<std::string>& header,
           const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::IoError, fmt::format("cannot write '{}'", path.string()));
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf), "{}\n", fmt::join(header, ","));
    for (const auto& row : rows)
        fmt::format_to(std::back_inserter(buf), "{}\n", fmt::join(row, ","));
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

std::string format_number(double value) {
    // fmt's default formatting is the shortest round-trip representation.
    return fmt::format("{}", value);
}

} // namespace hydro_cba::csv
