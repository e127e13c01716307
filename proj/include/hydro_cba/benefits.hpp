#pragma once

#include "hydro_cba/component.hpp"
#include "hydro_cba/series.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hydro_cba {

// --- electricity -------------------------------------------------------------

enum class BackcastMode { CpiScale, Discount };

std::string_view to_string(BackcastMode mode) noexcept;
BackcastMode backcast_mode_from_string(std::string_view text);

struct ElectricityParams {
    double avg_capacity_mw = 180.0;
    double hours_per_day = 24.0;
    double days_per_year = 365.0;
    /// BDT per kWh.
    double unit_price = 7.78;
    /// BDT per kWh; 0.05 USD at 84 BDT/USD.
    double unit_cost = 4.20;
    YearRange years{1962, 2020};
    /// Price level of unit_price / unit_cost.
    int price_year = 2020;
    BackcastMode mode = BackcastMode::Discount;
    double discount_rate = 0.07;

    void validate() const;
};

/// Q * (P - C) for one year at the params' price level.
MoneyAmount electricity_annual_net(const ElectricityParams& params);

/// Spreads the price-year net benefit over the year range and sums it. Every
/// yearly figure is derived rather than observed, so all are tagged Imputed.
ValuationComponent electricity_npv(const ElectricityParams& params, const CpiIndexTable& cpi);

// --- fisheries ---------------------------------------------------------------

/// One row of the fisheries table; fiscal year keyed by its starting year.
struct FisheriesRecord {
    int year;
    double production_tons;
    std::optional<double> revenue_mbdt;
};

/// Parses "2006-07" (or a plain "2006") to its starting calendar year.
int fiscal_year_start(std::string_view label);

std::vector<FisheriesRecord> read_fisheries_csv(const std::filesystem::path& path);

/// BDT per kg implied by a production (tons) and revenue (million BDT) pair.
double fisheries_implied_price(double production_tons, double revenue_mbdt);

enum class Accumulation { CompoundToBase, DiscountToBase };
enum class PriceAnchor { LatestActual, AveragePrice };

std::string_view to_string(Accumulation a) noexcept;
Accumulation accumulation_from_string(std::string_view text);
std::string_view to_string(PriceAnchor a) noexcept;
PriceAnchor price_anchor_from_string(std::string_view text);

struct FisheriesParams {
    /// Tons per year.
    AnnualSeries catch_series;
    /// Million BDT per year; may be empty or cover only part of the range.
    AnnualSeries revenue_series;
    /// BDT/kg.
    double avg_price = 126.23;
    int avg_price_year = 2016;
    PriceAnchor price_anchor = PriceAnchor::LatestActual;
    /// BDT/kg at unit_cost_year.
    double unit_cost = 15.0;
    int unit_cost_year = 2019;
    double discount_rate = 0.10;
    int start_year = 1986;
    int base_year = 2019;
    Accumulation accumulation = Accumulation::CompoundToBase;
};

struct CatchFill {
    /// Annual growth used to walk the catch backwards from the first observed
    /// year. Unset: years before the first observation stay missing.
    std::optional<double> backfill_growth;
};

struct FisheriesSeries {
    AnnualSeries catch_tons;
    AnnualSeries revenue_mbdt;
};

/// Splits fisheries records into catch and revenue series, and fills catch
/// years outside the observed span: forward by CPI from the latest observed
/// year, backward by `fill.backfill_growth`. Filled points are Imputed.
FisheriesSeries prepare_fisheries_series(const std::vector<FisheriesRecord>& records, YearRange years,
                                         const CpiIndexTable& cpi, const CatchFill& fill = {});

ValuationComponent fisheries_npv(const FisheriesParams& params, const CpiIndexTable& cpi);

// --- tourism -----------------------------------------------------------------

/// CPI-scales one year's consumer surplus across `years` and sums it.
ValuationComponent tourism_npv(const MoneyAmount& annual_cs, YearRange years, const CpiIndexTable& cpi);

} // namespace hydro_cba
