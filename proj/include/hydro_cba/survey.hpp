#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace hydro_cba {

struct SurveySummary {
    std::size_t n = 0;
    double mean = 0.0;
    /// Sample (n - 1) standard deviation; 0 with sd_defined = false when n == 1.
    double sd = 0.0;
    double min = 0.0;
    double max = 0.0;
    bool sd_defined = true;
};

/// Throws EmptyColumn for an empty column.
SurveySummary summarize_survey(std::span<const double> values);

/// Reads one numeric column of a CSV file by header name.
std::vector<double> read_numeric_column(const std::filesystem::path& path, const std::string& column);

} // namespace hydro_cba
