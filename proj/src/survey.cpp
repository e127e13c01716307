#include "hydro_cba/survey.hpp"

#include "hydro_cba/csv.hpp"
#include "hydro_cba/error.hpp"
#include "hydro_cba/series.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace hydro_cba {

SurveySummary summarize_survey(std::span<const double> values) {
    if (values.empty())
        throw Error(ErrorCode::EmptyColumn, "cannot summarize an empty column");
    for (double v : values)
        if (!std::isfinite(v))
            throw Error(ErrorCode::InvalidArgument, "column contains a non-finite value");

    SurveySummary s;
    s.n = values.size();
    s.mean = compensated_sum(values) / static_cast<double>(s.n);
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.min = *lo;
    s.max = *hi;
    // Rounding can push the mean a hair outside [min, max] for constant columns.
    s.mean = std::clamp(s.mean, s.min, s.max);
    if (s.n == 1) {
        s.sd = 0.0;
        s.sd_defined = false;
        return s;
    }
    std::vector<double> squares;
    squares.reserve(s.n);
    for (double v : values)
        squares.push_back((v - s.mean) * (v - s.mean));
    s.sd = std::sqrt(compensated_sum(squares) / static_cast<double>(s.n - 1));
    return s;
}

std::vector<double> read_numeric_column(const std::filesystem::path& path, const std::string& column) {
    const auto table = csv::read(path);
    const auto col = table.require_column(column);
    std::vector<double> out;
    out.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r)
        out.push_back(csv::to_double(table.rows[r][col], table, r));
    if (out.empty())
        throw Error(ErrorCode::EmptyColumn, fmt::format("{}: column '{}' has no values", path.string(), column));
    return out;
}

} // namespace hydro_cba
