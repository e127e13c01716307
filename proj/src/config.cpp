#include "hydro_cba/config.hpp"

#include "hydro_cba/error.hpp"
#include "hydro_cba/series.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>

namespace hydro_cba {

namespace {

// Defaults reproduce the published parameterization.
const std::map<std::string, std::string>& defaults() {
    static const std::map<std::string, std::string> table{
        {"inputs.cpi", "cpi.csv"},
        {"inputs.fisheries", "fisheries.csv"},
        {"inputs.survey", "tourist_survey.csv"},
        {"inputs.zones", "zones.csv"},
        {"inputs.households", "household_losses.csv"},
        {"inputs.life_expectancy", "life_expectancy.csv"},
        {"inputs.regression_fit", "regression_fit.json"},

        {"series.cpi_backcast_window", "5"},

        {"electricity.capacity_mw", "180"},
        {"electricity.hours_per_day", "24"},
        {"electricity.days_per_year", "365"},
        {"electricity.unit_price", "7.78"},
        {"electricity.unit_cost", "4.20"},
        {"electricity.price_year", "2020"},
        {"electricity.start_year", "1962"},
        {"electricity.end_year", "2020"},
        {"electricity.mode", "discount"},
        {"electricity.discount_rate", "0.07"},

        {"fisheries.avg_price", "126.23"},
        {"fisheries.avg_price_year", "2016"},
        {"fisheries.price_anchor", "latest_actual"},
        {"fisheries.unit_cost", "15"},
        {"fisheries.unit_cost_year", "2019"},
        {"fisheries.discount_rate", "0.10"},
        {"fisheries.start_year", "1986"},
        {"fisheries.base_year", "2019"},
        {"fisheries.accumulation", "compound"},
        {"fisheries.catch_backfill_growth", "0.035"},

        {"tourism.fee_step", "1"},
        {"tourism.max_steps", "1000000"},
        {"tourism.cost_regressor", "travel_cost"},
        {"tourism.survey_year", "2018"},
        {"tourism.start_year", "1962"},
        {"tourism.end_year", "2020"},
        {"tourism.annual_value_mbdt", ""},

        {"costs.families", "18000"},
        {"costs.land_value_per_family", "17678"},
        {"costs.land_value_year", "1957"},
        {"costs.land_target_year", "2019"},
        {"costs.land_deflator", "ratio"},
        {"costs.land_deflator_ratio", "40.0873"},
        {"costs.establishment_mrs", "2402.5"},
        {"costs.compensation_mbdt", "37.8"},
        {"costs.compensation_rate", "700"},
        {"costs.acres", "54000"},
        {"costs.rs_to_bdt", "1"},
        {"costs.construction_year", "1957"},
        {"costs.construction_target_year", "2019"},
        {"costs.construction_deflator", "ratio"},
        // 404882.6 / 2440.3 at full precision.
        {"costs.construction_deflator_ratio", "165.91509240667132"},
        {"costs.value_per_life", "366654"},
        {"costs.life_age_at_death", "35"},
        {"costs.life_death_year", "1987"},
        {"costs.life_annual_income", ""},
        {"costs.deaths", "1180"},
        {"costs.survey_year", "2019"},
        {"costs.environmental_population", "18000"},

        {"report.base_year", "2020"},
        {"report.rebase", "cpi"},
        {"report.include_construction", "false"},
        {"report.include_environmental", "false"},
    };
    return table;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

} // namespace

RunConfig::RunConfig() : values_(defaults()) {}

std::vector<std::string> RunConfig::known_keys() {
    std::vector<std::string> keys;
    for (const auto& [k, v] : defaults())
        keys.push_back(k);
    return keys;
}

bool RunConfig::known(const std::string& key) const noexcept { return defaults().contains(key); }

void RunConfig::set(const std::string& key, const std::string& value) {
    if (!known(key))
        throw Error(ErrorCode::UnknownParameter, fmt::format("'{}'", key));
    values_[key] = value;
}

RunConfig RunConfig::parse(std::string_view text, const std::filesystem::path& base_dir) {
    RunConfig config;
    config.base_dir_ = base_dir;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto line = trim(raw);
        if (const auto hash = line.find_first_of("#;"); hash != std::string::npos)
            line = trim(line.substr(0, hash));
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw Error(ErrorCode::ParseError, fmt::format("line {}: unterminated section header", line_no));
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::ParseError, fmt::format("line {}: expected key = value", line_no));
        const auto key = trim(std::string_view(line).substr(0, eq));
        const auto value = trim(std::string_view(line).substr(eq + 1));
        const auto full = section.empty() ? key : section + "." + key;
        try {
            config.set(full, value);
        } catch (const Error& e) {
            throw Error(e.code(), fmt::format("line {}: {}", line_no, e.what()));
        }
    }
    return config;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoError, fmt::format("cannot open config '{}'", path.string()));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse(buffer.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
    } catch (const Error& e) {
        throw Error(e.code(), fmt::format("{}: {}", path.string(), e.what()));
    }
}

const std::string& RunConfig::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end())
        throw Error(ErrorCode::UnknownParameter, fmt::format("'{}'", key));
    return it->second;
}

double RunConfig::get_double(const std::string& key) const {
    const auto& text = get(key);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw Error(ErrorCode::ParseError, fmt::format("{} = '{}' is not a number", key, text));
    return value;
}

int RunConfig::get_int(const std::string& key) const {
    const auto& text = get(key);
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw Error(ErrorCode::ParseError, fmt::format("{} = '{}' is not an integer", key, text));
    return value;
}

bool RunConfig::get_bool(const std::string& key) const {
    const auto& text = get(key);
    if (text == "true" || text == "yes" || text == "1")
        return true;
    if (text == "false" || text == "no" || text == "0")
        return false;
    throw Error(ErrorCode::ParseError, fmt::format("{} = '{}' is not a boolean", key, text));
}

std::optional<double> RunConfig::get_optional_double(const std::string& key) const {
    const auto& text = get(key);
    if (text.empty() || text == "none")
        return std::nullopt;
    return get_double(key);
}

std::filesystem::path RunConfig::get_path(const std::string& key) const {
    std::filesystem::path p = get(key);
    if (p.is_relative())
        p = base_dir_ / p;
    return p;
}

void RunConfig::validate() const {
    for (const auto* key : {"electricity.discount_rate", "fisheries.discount_rate"}) {
        const double r = get_double(key);
        if (r < 0.0 || r > 1.0)
            throw Error(ErrorCode::InvalidArgument, fmt::format("{} = {} must lie in [0, 1]", key, r));
    }
    if (const auto g = get_optional_double("fisheries.catch_backfill_growth"); g && (*g < 0.0 || *g > 1.0))
        throw Error(ErrorCode::InvalidArgument,
                    fmt::format("fisheries.catch_backfill_growth = {} must lie in [0, 1]", *g));

    for (const auto& [key, value] : values_) {
        const bool year_key = key.ends_with("_year") && !key.ends_with("_per_year");
        if (!year_key || value.empty())
            continue;
        const int y = get_int(key);
        if (y < kMinYear || y > kMaxYear)
            throw Error(ErrorCode::InvalidArgument,
                        fmt::format("{} = {} outside [{}, {}]", key, y, kMinYear, kMaxYear));
    }
    for (const auto* section : {"electricity", "tourism"}) {
        const auto s = std::string(section);
        if (get_int(s + ".start_year") > get_int(s + ".end_year"))
            throw Error(ErrorCode::InvalidArgument, fmt::format("{}.start_year is after {}.end_year", s, s));
    }
    if (get_int("fisheries.start_year") > get_int("fisheries.base_year"))
        throw Error(ErrorCode::InvalidArgument, "fisheries.start_year is after fisheries.base_year");
    if (get_int("series.cpi_backcast_window") < 1)
        throw Error(ErrorCode::InvalidArgument, "series.cpi_backcast_window must be >= 1");
    if (!(get_double("tourism.fee_step") > 0.0))
        throw Error(ErrorCode::InvalidStep, "tourism.fee_step must be positive");
    for (const auto* key : {"costs.land_deflator", "costs.construction_deflator"})
        if (get(key) != "ratio" && get(key) != "cpi")
            throw Error(ErrorCode::InvalidArgument, fmt::format("{} must be 'ratio' or 'cpi'", key));
    if (get("report.rebase") != "cpi" && get("report.rebase") != "relabel")
        throw Error(ErrorCode::InvalidArgument, "report.rebase must be 'cpi' or 'relabel'");
}

} // namespace hydro_cba
