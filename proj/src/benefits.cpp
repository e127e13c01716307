#include "hydro_cba/benefits.hpp"

#include "hydro_cba/csv.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>

namespace hydro_cba {

namespace {

constexpr double kKwPerMw = 1000.0;
constexpr double kKgPerTon = 1000.0;
constexpr double kBdtPerMillion = 1e6;

void require_rate(double rate, const char* what) {
    if (!(rate >= 0.0 && rate <= 1.0))
        throw Error(ErrorCode::InvalidArgument, fmt::format("{} must lie in [0, 1], got {}", what, rate));
}

} // namespace

// --- electricity -------------------------------------------------------------

std::string_view to_string(BackcastMode mode) noexcept {
    return mode == BackcastMode::CpiScale ? "cpi" : "discount";
}

BackcastMode backcast_mode_from_string(std::string_view text) {
    if (text == "cpi" || text == "cpi_scale")
        return BackcastMode::CpiScale;
    if (text == "discount")
        return BackcastMode::Discount;
    throw Error(ErrorCode::ParseError, fmt::format("unknown backcast mode '{}' (cpi|discount)", text));
}

void ElectricityParams::validate() const {
    if (!(avg_capacity_mw > 0.0))
        throw Error(ErrorCode::InvalidArgument, "electricity capacity must be positive");
    if (!(hours_per_day > 0.0) || !(days_per_year > 0.0))
        throw Error(ErrorCode::InvalidArgument, "hours per day and days per year must be positive");
    if (unit_price < 0.0 || unit_cost < 0.0)
        throw Error(ErrorCode::InvalidArgument, "electricity price and cost must be non-negative");
    if (years.empty())
        throw Error(ErrorCode::EmptyRange, fmt::format("electricity years [{}, {}]", years.first, years.last));
    require_rate(discount_rate, "electricity discount rate");
}

MoneyAmount electricity_annual_net(const ElectricityParams& params) {
    params.validate();
    const double kwh = params.avg_capacity_mw * kKwPerMw * params.hours_per_day * params.days_per_year;
    return MoneyAmount::bdt(kwh * (params.unit_price - params.unit_cost), params.price_year);
}

ValuationComponent electricity_npv(const ElectricityParams& params, const CpiIndexTable& cpi) {
    const auto annual = electricity_annual_net(params);
    std::vector<SeriesPoint> yearly;
    yearly.reserve(params.years.size());
    for (int year = params.years.first; year <= params.years.last; ++year) {
        double factor = 1.0;
        if (params.mode == BackcastMode::CpiScale)
            factor = cpi.ratio(params.price_year, year);
        else
            factor = std::pow(1.0 + params.discount_rate, -static_cast<double>(params.price_year - year));
        yearly.push_back({year, annual.value() * factor, Provenance::Imputed});
    }
    AnnualSeries series("electricity.net_benefit", std::move(yearly));

    ValuationComponent c{ComponentKind::Electricity, "Net value of electricity",
                         annual.with_value(series_sum(series).value)};
    c.years = params.years;
    c.method = params.mode == BackcastMode::CpiScale
                   ? fmt::format("Q*(P-C) at {} scaled by CPI ratio", params.price_year)
                   : fmt::format("Q*(P-C) at {} discounted at {}", params.price_year, params.discount_rate);
    c.imputed_fraction = series.imputed_fraction();
    c.series.push_back(std::move(series));
    return c;
}

// --- fisheries ---------------------------------------------------------------

int fiscal_year_start(std::string_view label) {
    const auto dash = label.find('-');
    const auto head = label.substr(0, dash);
    int year = 0;
    auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), year);
    if (head.size() != 4 || ec != std::errc{} || ptr != head.data() + head.size())
        throw Error(ErrorCode::ParseError, fmt::format("not a fiscal year label: '{}'", label));
    if (dash != std::string_view::npos) {
        const auto tail = label.substr(dash + 1);
        int next = 0;
        auto [tp, tec] = std::from_chars(tail.data(), tail.data() + tail.size(), next);
        const bool ok = tec == std::errc{} && tp == tail.data() + tail.size() &&
                        ((tail.size() == 2 && next == (year + 1) % 100) || (tail.size() == 4 && next == year + 1));
        if (!ok)
            throw Error(ErrorCode::ParseError, fmt::format("fiscal year label '{}' does not span consecutive years", label));
    }
    return year;
}

std::vector<FisheriesRecord> read_fisheries_csv(const std::filesystem::path& path) {
    const auto table = csv::read(path);
    const auto fy = table.require_column("fiscal_year");
    const auto prod = table.require_column("production_tons");
    const auto rev = table.require_column("revenue_mbdt");
    std::vector<FisheriesRecord> out;
    out.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        FisheriesRecord rec{};
        try {
            rec.year = fiscal_year_start(row[fy]);
        } catch (const Error& e) {
            throw Error(ErrorCode::ParseError, fmt::format("{}: {}", table.where(r), e.what()));
        }
        rec.production_tons = csv::to_double(row[prod], table, r);
        if (rec.production_tons < 0.0)
            throw Error(ErrorCode::ParseError, fmt::format("{}: negative production", table.where(r)));
        if (!row[rev].empty())
            rec.revenue_mbdt = csv::to_double(row[rev], table, r);
        out.push_back(rec);
    }
    if (out.empty())
        throw Error(ErrorCode::MissingDataYear, fmt::format("{}: no fisheries rows", path.string()));
    return out;
}

double fisheries_implied_price(double production_tons, double revenue_mbdt) {
    if (production_tons == 0.0)
        throw Error(ErrorCode::DivisionByZero, "implied fish price needs non-zero production");
    return revenue_mbdt * kBdtPerMillion / (production_tons * kKgPerTon);
}

std::string_view to_string(Accumulation a) noexcept {
    return a == Accumulation::CompoundToBase ? "compound" : "discount";
}

Accumulation accumulation_from_string(std::string_view text) {
    if (text == "compound")
        return Accumulation::CompoundToBase;
    if (text == "discount")
        return Accumulation::DiscountToBase;
    throw Error(ErrorCode::ParseError, fmt::format("unknown accumulation mode '{}' (compound|discount)", text));
}

std::string_view to_string(PriceAnchor a) noexcept {
    return a == PriceAnchor::LatestActual ? "latest_actual" : "average";
}

PriceAnchor price_anchor_from_string(std::string_view text) {
    if (text == "latest_actual")
        return PriceAnchor::LatestActual;
    if (text == "average")
        return PriceAnchor::AveragePrice;
    throw Error(ErrorCode::ParseError, fmt::format("unknown price anchor '{}' (latest_actual|average)", text));
}

FisheriesSeries prepare_fisheries_series(const std::vector<FisheriesRecord>& records, YearRange years,
                                         const CpiIndexTable& cpi, const CatchFill& fill) {
    if (records.empty())
        throw Error(ErrorCode::MissingDataYear, "no fisheries records");
    std::vector<SeriesPoint> catch_points;
    std::vector<SeriesPoint> revenue_points;
    for (const auto& r : records) {
        catch_points.push_back({r.year, r.production_tons, Provenance::Actual});
        if (r.revenue_mbdt)
            revenue_points.push_back({r.year, *r.revenue_mbdt, Provenance::Actual});
    }
    const AnnualSeries observed("fisheries.catch_tons", catch_points);
    const int first = observed.first_year();
    const int last = observed.last_year();

    for (int year = last + 1; year <= years.last; ++year)
        catch_points.push_back({year, observed.at(last) * cpi.ratio(last, year), Provenance::Imputed});
    if (fill.backfill_growth) {
        const double g = *fill.backfill_growth;
        if (!(g > -1.0))
            throw Error(ErrorCode::InvalidArgument, fmt::format("catch backfill growth {} must exceed -1", g));
        for (int year = first - 1; year >= years.first; --year)
            catch_points.push_back(
                {year, observed.at(first) / std::pow(1.0 + g, static_cast<double>(first - year)), Provenance::Imputed});
    }
    return {AnnualSeries("fisheries.catch_tons", std::move(catch_points)),
            AnnualSeries("fisheries.revenue_mbdt", std::move(revenue_points))};
}

ValuationComponent fisheries_npv(const FisheriesParams& params, const CpiIndexTable& cpi) {
    require_rate(params.discount_rate, "fisheries discount rate");
    if (params.start_year > params.base_year)
        throw Error(ErrorCode::EmptyRange,
                    fmt::format("fisheries years [{}, {}]", params.start_year, params.base_year));
    if (params.unit_cost < 0.0 || params.avg_price < 0.0)
        throw Error(ErrorCode::InvalidArgument, "fish price and cost must be non-negative");

    const auto& catches = params.catch_series;
    const auto& revenue = params.revenue_series;
    for (int year = params.start_year; year <= params.base_year; ++year)
        if (!catches.contains(year))
            throw Error(ErrorCode::MissingDataYear, fmt::format("no fisheries catch for {}", year));

    auto has_actual_revenue = [&](int year) {
        return revenue.contains(year) && revenue.provenance(year) == Provenance::Actual;
    };

    double anchor_price = params.avg_price;
    int anchor_year = params.avg_price_year;
    if (params.price_anchor == PriceAnchor::LatestActual) {
        const auto pts = revenue.points();
        const auto it = std::find_if(pts.rbegin(), pts.rend(),
                                     [](const SeriesPoint& p) { return p.provenance == Provenance::Actual; });
        if (it == pts.rend())
            throw Error(ErrorCode::InsufficientData, "price anchor 'latest_actual' needs at least one revenue year");
        anchor_year = it->year;
        anchor_price = fisheries_implied_price(catches.at(anchor_year), it->value);
    }

    std::vector<SeriesPoint> price_points, cost_points, catch_points;
    std::vector<double> accumulated;
    std::size_t imputed_years = 0;
    for (int year = params.start_year; year <= params.base_year; ++year) {
        const auto& c = catches.point(year);
        SeriesPoint price{year, 0.0, Provenance::Actual};
        if (has_actual_revenue(year)) {
            price.value = fisheries_implied_price(c.value, revenue.at(year));
        } else {
            price.value = anchor_price * cpi.ratio(anchor_year, year);
            price.provenance = Provenance::Imputed;
        }
        SeriesPoint cost{year, params.unit_cost * cpi.ratio(params.unit_cost_year, year),
                         year == params.unit_cost_year ? Provenance::Actual : Provenance::Imputed};

        const double kg = c.value * kKgPerTon;
        const double net = kg * (price.value - cost.value);
        const double years_to_base = static_cast<double>(params.base_year - year);
        const double factor = params.accumulation == Accumulation::CompoundToBase
                                  ? std::pow(1.0 + params.discount_rate, years_to_base)
                                  : std::pow(1.0 + params.discount_rate, -years_to_base);
        const bool imputed = c.provenance == Provenance::Imputed || price.provenance == Provenance::Imputed;
        if (imputed)
            ++imputed_years;

        accumulated.push_back(net * factor);
        price_points.push_back(price);
        cost_points.push_back(cost);
        catch_points.push_back(c);
    }

    ValuationComponent comp{ComponentKind::Fisheries, "Net value of fisheries",
                            MoneyAmount::bdt(compensated_sum(accumulated), params.base_year)};
    comp.years = {params.start_year, params.base_year};
    comp.method = fmt::format("sum (R-C) {} to {} at r = {}; price anchored at {} ({} BDT/kg)",
                              params.accumulation == Accumulation::CompoundToBase ? "compounded" : "discounted",
                              params.base_year, params.discount_rate, anchor_year, anchor_price);
    comp.imputed_fraction = static_cast<double>(imputed_years) / static_cast<double>(comp.years.size());
    if (params.unit_cost >= params.avg_price)
        comp.warnings.push_back(fmt::format("unit cost {} BDT/kg is not below the average price {} BDT/kg",
                                            params.unit_cost, params.avg_price));
    comp.series.emplace_back("fisheries.catch_tons", std::move(catch_points));
    comp.series.emplace_back("fisheries.price_bdt_per_kg", std::move(price_points));
    comp.series.emplace_back("fisheries.unit_cost_bdt_per_kg", std::move(cost_points));
    return comp;
}

// --- tourism -----------------------------------------------------------------

ValuationComponent tourism_npv(const MoneyAmount& annual_cs, YearRange years, const CpiIndexTable& cpi) {
    auto series = impute_series_by_cpi(annual_cs.base_year(), annual_cs.value(), years, cpi, "tourism.value");
    ValuationComponent c{ComponentKind::Tourism, "Net benefit of tourism",
                         MoneyAmount(series_sum(series).value, annual_cs.currency(), years.last)};
    c.years = years;
    c.method = fmt::format("annual consumer surplus at {} scaled by CPI", annual_cs.base_year());
    c.imputed_fraction = series.imputed_fraction();
    c.series.push_back(std::move(series));
    return c;
}

} // namespace hydro_cba
