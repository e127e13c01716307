#pragma once

#include "hydro_cba/error.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace hydro_cba {

inline constexpr int kMinYear = 1950;
inline constexpr int kMaxYear = 2030;
inline constexpr int kCpiBaseYear = 2010;

/// A monetary magnitude pinned to a currency and to the price level of one year.
///
/// Addition and subtraction are only defined between amounts that agree on both
/// currency and base year. Moving between price levels is an explicit
/// operation (see deflate()); moving between currencies likewise
/// (see convert_currency()).
class MoneyAmount {
public:
    MoneyAmount(double value, std::string currency, int base_year);

    static MoneyAmount bdt(double value, int base_year) { return {value, "BDT", base_year}; }

    double value() const noexcept { return value_; }
    const std::string& currency() const noexcept { return currency_; }
    int base_year() const noexcept { return base_year_; }

    /// Value in millions, the unit every report uses.
    double millions() const noexcept { return value_ / 1e6; }

    bool same_denomination(const MoneyAmount& other) const noexcept {
        return currency_ == other.currency_ && base_year_ == other.base_year_;
    }

    MoneyAmount scaled(double factor) const { return {value_ * factor, currency_, base_year_}; }
    MoneyAmount with_value(double value) const { return {value, currency_, base_year_}; }

    /// Same magnitude and currency, relabeled to another price year. Only the
    /// pipeline's explicit "relabel" rebase mode uses this.
    MoneyAmount relabeled(int base_year) const { return {value_, currency_, base_year}; }

    friend MoneyAmount operator+(const MoneyAmount& a, const MoneyAmount& b);
    friend MoneyAmount operator-(const MoneyAmount& a, const MoneyAmount& b);
    friend bool operator==(const MoneyAmount&, const MoneyAmount&) = default;

private:
    double value_;
    std::string currency_;
    int base_year_;
};

/// Plain ratio conversion: `rate` units of `to_currency` per unit of the
/// amount's currency.
MoneyAmount convert_currency(const MoneyAmount& amount, const std::string& to_currency, double rate);

enum class Provenance { Actual, Imputed };

std::string_view to_string(Provenance p) noexcept;
Provenance provenance_from_string(std::string_view text);

struct YearRange {
    int first;
    int last;

    bool empty() const noexcept { return last < first; }
    std::size_t size() const noexcept { return empty() ? 0 : static_cast<std::size_t>(last - first + 1); }
    bool contains(int year) const noexcept { return year >= first && year <= last; }
};

struct SeriesPoint {
    int year;
    double value;
    Provenance provenance = Provenance::Actual;
};

/// Contiguous year -> value series where each point records whether it was
/// observed or synthesized.
class AnnualSeries {
public:
    AnnualSeries() = default;
    /// Points may arrive in any order; the years must form one gap-free run and
    /// appear once each.
    AnnualSeries(std::string label, std::vector<SeriesPoint> points);

    const std::string& label() const noexcept { return label_; }
    bool empty() const noexcept { return points_.empty(); }
    std::size_t size() const noexcept { return points_.size(); }
    int first_year() const;
    int last_year() const;
    YearRange range() const;

    bool contains(int year) const noexcept;
    double at(int year) const;
    Provenance provenance(int year) const;
    const SeriesPoint& point(int year) const;

    /// Ascending year order.
    std::span<const SeriesPoint> points() const noexcept { return points_; }

    std::size_t imputed_count() const noexcept;
    /// Share of points tagged Imputed; 0 for an empty series.
    double imputed_fraction() const noexcept;

    AnnualSeries relabeled(std::string label) const;

private:
    std::string label_;
    std::vector<SeriesPoint> points_;
};

/// Consumer price index keyed by year, expressed relative to 2010 = 100.
class CpiIndexTable {
public:
    explicit CpiIndexTable(AnnualSeries series);

    /// Geometric path between two anchor years whose index ratio is `ratio`
    /// (cpi[to] / cpi[from]). Endpoints are Actual, interior years Imputed.
    /// Used for the published two-year deflators that do not come with a full
    /// index.
    static CpiIndexTable from_anchor_ratio(int from_year, int to_year, double ratio);

    const AnnualSeries& series() const noexcept { return series_; }
    int base_year() const noexcept { return kCpiBaseYear; }
    bool contains(int year) const noexcept { return series_.contains(year); }
    double at(int year) const;
    /// cpi[to] / cpi[from].
    double ratio(int from_year, int to_year) const;

private:
    AnnualSeries series_;
};

MoneyAmount deflate(const MoneyAmount& amount, int target_year, const CpiIndexTable& cpi);

struct GeometricTrend {
    int window = 5;
};

/// Extends `cpi` backwards to `earliest_year` using the average annual growth
/// of its earliest `method.window` known years. Existing points are kept
/// untouched.
CpiIndexTable backcast_cpi(const CpiIndexTable& cpi, int earliest_year, GeometricTrend method = {});

/// series[t] = anchor_value * cpi[t] / cpi[anchor_year] across `target_years`.
/// The anchor year (if inside the range) is tagged Actual, everything else
/// Imputed.
AnnualSeries impute_series_by_cpi(int anchor_year, double anchor_value, YearRange target_years,
                                  const CpiIndexTable& cpi, std::string label = "imputed");

struct SeriesTotal {
    double value = 0.0;
    std::size_t points = 0;
    std::size_t imputed_points = 0;
};

SeriesTotal series_sum(const AnnualSeries& series);

/// Neumaier-compensated sum in the order given.
double compensated_sum(std::span<const double> values) noexcept;

/// CSV with header `year,value[,provenance]`.
AnnualSeries read_series_csv(const std::filesystem::path& path, std::string label);
void write_series_csv(const std::filesystem::path& path, const AnnualSeries& series);

} // namespace hydro_cba
