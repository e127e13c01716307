#include "hydro_cba/series.hpp"

#include "hydro_cba/csv.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace hydro_cba {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::MissingIndexYear: return "MissingIndexYear";
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::IncompatibleAmounts: return "IncompatibleAmounts";
    case ErrorCode::SingularDesign: return "SingularDesign";
    case ErrorCode::InsufficientObservations: return "InsufficientObservations";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::MissingRegressor: return "MissingRegressor";
    case ErrorCode::UpwardSlopingDemand: return "UpwardSlopingDemand";
    case ErrorCode::InvalidStep: return "InvalidStep";
    case ErrorCode::ChokeNotFound: return "ChokeNotFound";
    case ErrorCode::MissingDataYear: return "MissingDataYear";
    case ErrorCode::UnknownUnit: return "UnknownUnit";
    case ErrorCode::EmptyFrame: return "EmptyFrame";
    case ErrorCode::IncompatibleComponents: return "IncompatibleComponents";
    case ErrorCode::MissingComponent: return "MissingComponent";
    case ErrorCode::UnknownParameter: return "UnknownParameter";
    case ErrorCode::EmptyColumn: return "EmptyColumn";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

// --- MoneyAmount -----------------------------------------------------------

MoneyAmount::MoneyAmount(double value, std::string currency, int base_year)
    : value_(value), currency_(std::move(currency)), base_year_(base_year) {
    if (!std::isfinite(value_))
        throw Error(ErrorCode::InvalidArgument, "money amount must be finite");
    if (base_year_ < kMinYear || base_year_ > kMaxYear)
        throw Error(ErrorCode::InvalidArgument,
                    fmt::format("base year {} outside [{}, {}]", base_year_, kMinYear, kMaxYear));
    if (currency_.empty())
        throw Error(ErrorCode::InvalidArgument, "currency code must not be empty");
}

namespace {

void require_same_denomination(const MoneyAmount& a, const MoneyAmount& b) {
    if (!a.same_denomination(b))
        throw Error(ErrorCode::IncompatibleAmounts,
                    fmt::format("{}@{} vs {}@{}", a.currency(), a.base_year(), b.currency(), b.base_year()));
}

} // namespace

MoneyAmount operator+(const MoneyAmount& a, const MoneyAmount& b) {
    require_same_denomination(a, b);
    return {a.value_ + b.value_, a.currency_, a.base_year_};
}

MoneyAmount operator-(const MoneyAmount& a, const MoneyAmount& b) {
    require_same_denomination(a, b);
    return {a.value_ - b.value_, a.currency_, a.base_year_};
}

MoneyAmount convert_currency(const MoneyAmount& amount, const std::string& to_currency, double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate))
        throw Error(ErrorCode::InvalidArgument, fmt::format("exchange rate must be positive, got {}", rate));
    return {amount.value() * rate, to_currency, amount.base_year()};
}

// --- AnnualSeries ----------------------------------------------------------

std::string_view to_string(Provenance p) noexcept {
    return p == Provenance::Actual ? "actual" : "imputed";
}

Provenance provenance_from_string(std::string_view text) {
    if (text.empty() || text == "actual" || text == "Actual")
        return Provenance::Actual;
    if (text == "imputed" || text == "Imputed")
        return Provenance::Imputed;
    throw Error(ErrorCode::ParseError, fmt::format("unknown provenance '{}'", text));
}

AnnualSeries::AnnualSeries(std::string label, std::vector<SeriesPoint> points)
    : label_(std::move(label)), points_(std::move(points)) {
    std::sort(points_.begin(), points_.end(),
              [](const SeriesPoint& a, const SeriesPoint& b) { return a.year < b.year; });
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (!std::isfinite(p.value))
            throw Error(ErrorCode::InvalidArgument, fmt::format("{}: non-finite value in {}", label_, p.year));
        if (i > 0 && p.year == points_[i - 1].year)
            throw Error(ErrorCode::InvalidArgument, fmt::format("{}: year {} appears twice", label_, p.year));
        if (i > 0 && p.year != points_[i - 1].year + 1)
            throw Error(ErrorCode::MissingDataYear,
                        fmt::format("{}: years not contiguous between {} and {}", label_, points_[i - 1].year,
                                    p.year));
    }
}

int AnnualSeries::first_year() const {
    if (points_.empty())
        throw Error(ErrorCode::EmptyRange, label_ + ": empty series");
    return points_.front().year;
}

int AnnualSeries::last_year() const {
    if (points_.empty())
        throw Error(ErrorCode::EmptyRange, label_ + ": empty series");
    return points_.back().year;
}

YearRange AnnualSeries::range() const {
    if (points_.empty())
        return {0, -1};
    return {points_.front().year, points_.back().year};
}

bool AnnualSeries::contains(int year) const noexcept {
    return !points_.empty() && year >= points_.front().year && year <= points_.back().year;
}

const SeriesPoint& AnnualSeries::point(int year) const {
    if (!contains(year))
        throw Error(ErrorCode::MissingDataYear, fmt::format("{}: no value for {}", label_, year));
    return points_[static_cast<std::size_t>(year - points_.front().year)];
}

double AnnualSeries::at(int year) const { return point(year).value; }

Provenance AnnualSeries::provenance(int year) const { return point(year).provenance; }

std::size_t AnnualSeries::imputed_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(points_.begin(), points_.end(), [](const SeriesPoint& p) {
        return p.provenance == Provenance::Imputed;
    }));
}

double AnnualSeries::imputed_fraction() const noexcept {
    if (points_.empty())
        return 0.0;
    return static_cast<double>(imputed_count()) / static_cast<double>(points_.size());
}

AnnualSeries AnnualSeries::relabeled(std::string label) const {
    AnnualSeries copy = *this;
    copy.label_ = std::move(label);
    return copy;
}

// --- CpiIndexTable ---------------------------------------------------------

CpiIndexTable::CpiIndexTable(AnnualSeries series) : series_(std::move(series)) {
    for (const auto& p : series_.points())
        if (!(p.value > 0.0))
            throw Error(ErrorCode::InvalidIndex, fmt::format("CPI for {} is {}, must be positive", p.year, p.value));
    if (series_.contains(kCpiBaseYear) && std::abs(series_.at(kCpiBaseYear) - 100.0) > 1e-9)
        throw Error(ErrorCode::InvalidIndex,
                    fmt::format("CPI for base year {} is {}, expected 100", kCpiBaseYear, series_.at(kCpiBaseYear)));
}

CpiIndexTable CpiIndexTable::from_anchor_ratio(int from_year, int to_year, double ratio) {
    if (!(ratio > 0.0) || !std::isfinite(ratio))
        throw Error(ErrorCode::InvalidIndex, fmt::format("deflator ratio must be positive, got {}", ratio));
    if (from_year == to_year) {
        if (ratio != 1.0)
            throw Error(ErrorCode::InvalidArgument, "a single-year deflator must have ratio 1");
        return CpiIndexTable(AnnualSeries("cpi", {{from_year, 100.0, Provenance::Actual}}));
    }
    const int lo = std::min(from_year, to_year);
    const int hi = std::max(from_year, to_year);
    // Per-year log growth such that cpi[to]/cpi[from] == ratio.
    const double log_step = std::log(ratio) / static_cast<double>(to_year - from_year);
    // Anchor the level at 2010 = 100 so the base-year invariant holds whenever
    // 2010 falls inside the path.
    std::vector<SeriesPoint> points;
    points.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (int y = lo; y <= hi; ++y) {
        const bool anchor = (y == from_year || y == to_year);
        const double value = (y == kCpiBaseYear) ? 100.0 : 100.0 * std::exp(log_step * (y - kCpiBaseYear));
        points.push_back({y, value, anchor ? Provenance::Actual : Provenance::Imputed});
    }
    return CpiIndexTable(AnnualSeries("cpi", std::move(points)));
}

double CpiIndexTable::at(int year) const {
    if (!series_.contains(year))
        throw Error(ErrorCode::MissingIndexYear, fmt::format("CPI has no value for {}", year));
    return series_.at(year);
}

double CpiIndexTable::ratio(int from_year, int to_year) const { return at(to_year) / at(from_year); }

// --- operations ------------------------------------------------------------

MoneyAmount deflate(const MoneyAmount& amount, int target_year, const CpiIndexTable& cpi) {
    if (target_year == amount.base_year())
        return amount;
    const double from = cpi.at(amount.base_year());
    const double to = cpi.at(target_year);
    return MoneyAmount(amount.value() * to / from, amount.currency(), target_year);
}

CpiIndexTable backcast_cpi(const CpiIndexTable& cpi, int earliest_year, GeometricTrend method) {
    const auto& known = cpi.series();
    if (known.empty())
        throw Error(ErrorCode::InsufficientData, "cannot backcast an empty CPI table");
    const int first = known.first_year();
    if (earliest_year >= first)
        return cpi;
    if (method.window < 1)
        throw Error(ErrorCode::InvalidArgument, fmt::format("backcast window must be >= 1, got {}", method.window));
    if (static_cast<std::size_t>(method.window) + 1 > known.size())
        throw Error(ErrorCode::InsufficientData,
                    fmt::format("backcast window {} needs {} known years, table has {}", method.window,
                                method.window + 1, known.size()));

    const double growth =
        std::pow(known.at(first + method.window) / known.at(first), 1.0 / static_cast<double>(method.window)) - 1.0;

    std::vector<SeriesPoint> points(known.points().begin(), known.points().end());
    double value = known.at(first);
    for (int year = first - 1; year >= earliest_year; --year) {
        value /= (1.0 + growth);
        points.push_back({year, value, Provenance::Imputed});
    }
    return CpiIndexTable(AnnualSeries(known.label(), std::move(points)));
}

AnnualSeries impute_series_by_cpi(int anchor_year, double anchor_value, YearRange target_years,
                                  const CpiIndexTable& cpi, std::string label) {
    if (target_years.empty())
        throw Error(ErrorCode::EmptyRange,
                    fmt::format("{}: empty target range [{}, {}]", label, target_years.first, target_years.last));
    const double anchor_index = cpi.at(anchor_year);
    std::vector<SeriesPoint> points;
    points.reserve(target_years.size());
    for (int year = target_years.first; year <= target_years.last; ++year) {
        if (year == anchor_year) {
            points.push_back({year, anchor_value, Provenance::Actual});
            continue;
        }
        points.push_back({year, anchor_value * cpi.at(year) / anchor_index, Provenance::Imputed});
    }
    return AnnualSeries(std::move(label), std::move(points));
}

double compensated_sum(std::span<const double> values) noexcept {
    double sum = 0.0;
    double compensation = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            compensation += (sum - t) + v;
        else
            compensation += (v - t) + sum;
        sum = t;
    }
    return sum + compensation;
}

SeriesTotal series_sum(const AnnualSeries& series) {
    std::vector<double> values;
    values.reserve(series.size());
    for (const auto& p : series.points())
        values.push_back(p.value);
    return {compensated_sum(values), series.size(), series.imputed_count()};
}

AnnualSeries read_series_csv(const std::filesystem::path& path, std::string label) {
    const auto table = csv::read(path);
    const auto year_col = table.require_column("year");
    const auto value_col = table.require_column("value");
    const auto prov_col = table.column("provenance");
    std::vector<SeriesPoint> points;
    points.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        SeriesPoint p;
        p.year = static_cast<int>(csv::to_integer(row[year_col], table, r));
        p.value = csv::to_double(row[value_col], table, r);
        if (prov_col) {
            try {
                p.provenance = provenance_from_string(row[*prov_col]);
            } catch (const Error& e) {
                throw Error(ErrorCode::ParseError, fmt::format("{}: {}", table.where(r), e.what()));
            }
        }
        points.push_back(p);
    }
    try {
        return AnnualSeries(std::move(label), std::move(points));
    } catch (const Error& e) {
        throw Error(e.code(), fmt::format("{}: {}", path.string(), e.what()));
    }
}

void write_series_csv(const std::filesystem::path& path, const AnnualSeries& series) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(series.size());
    for (const auto& p : series.points())
        rows.push_back({std::to_string(p.year), csv::format_number(p.value), std::string(to_string(p.provenance))});
    csv::write(path, {"year", "value", "provenance"}, rows);
}

} // namespace hydro_cba
