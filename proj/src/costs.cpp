#include "hydro_cba/costs.hpp"

#include "hydro_cba/csv.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace hydro_cba {

namespace {

// Printed totals are whole taka.
constexpr double kReportedTotalTolerance = 0.5;

} // namespace

void ConstructionCostSheet::validate() const {
    if (establishment.base_year() != compensation.base_year())
        throw Error(ErrorCode::IncompatibleAmounts, "establishment and compensation must share a price year");
    const double expected = compensation_rate * acres;
    if (std::abs(compensation.value() - expected) > 1e-6 * std::max(1.0, std::abs(expected)))
        throw Error(ErrorCode::InvalidArgument,
                    fmt::format("compensation {} != {} BDT/acre x {} acres", compensation.value(), compensation_rate,
                                acres));
    if (!(rs_to_bdt > 0.0))
        throw Error(ErrorCode::InvalidArgument, "Rs to BDT rate must be positive");
}

MoneyAmount construction_nominal_total(const ConstructionCostSheet& sheet) {
    sheet.validate();
    auto to_bdt = [&](const MoneyAmount& m) {
        if (m.currency() == "BDT")
            return m;
        if (m.currency() == "Rs")
            return convert_currency(m, "BDT", sheet.rs_to_bdt);
        throw Error(ErrorCode::IncompatibleAmounts, fmt::format("unsupported construction currency '{}'", m.currency()));
    };
    return to_bdt(sheet.establishment) + to_bdt(sheet.compensation);
}

MoneyAmount construction_pv(const ConstructionCostSheet& sheet, int target_year, const CpiIndexTable& cpi) {
    return deflate(construction_nominal_total(sheet), target_year, cpi);
}

// --- household losses --------------------------------------------------------

LossUnit parse_loss_unit(std::string_view text) {
    if (text == "kg")
        return LossUnit::Kilogram;
    if (text == "mound" || text == "maund")
        return LossUnit::Mound;
    if (text == "decimal")
        return LossUnit::Decimal;
    if (text == "count")
        return LossUnit::Count;
    throw Error(ErrorCode::UnknownUnit, fmt::format("'{}' (expected kg, mound, decimal or count)", text));
}

std::string_view to_string(LossUnit unit) noexcept {
    switch (unit) {
    case LossUnit::Kilogram: return "kg";
    case LossUnit::Mound: return "mound";
    case LossUnit::Decimal: return "decimal";
    case LossUnit::Count: return "count";
    }
    return "unknown";
}

double to_kilograms(double quantity, LossUnit unit) {
    switch (unit) {
    case LossUnit::Kilogram: return quantity;
    case LossUnit::Mound: return quantity * kKgPerMound;
    default: break;
    }
    throw Error(ErrorCode::InvalidArgument, fmt::format("'{}' is not a mass unit", to_string(unit)));
}

LossValuation household_loss_value(const HouseholdLossRecord& record) {
    LossValuation out{MoneyAmount::bdt(0.0, record.price_year), {}, {}};
    std::vector<double> values;
    for (const auto& item : record.items) {
        parse_loss_unit(item.unit);
        if (item.quantity < 0.0 || item.unit_price < 0.0)
            throw Error(ErrorCode::InvalidArgument,
                        fmt::format("{}: negative quantity or price for '{}'", record.respondent_id, item.name));
        LineItemValue line{item.name, item.quantity * item.unit_price, item.reported_total};
        if (item.reported_total && std::abs(*item.reported_total - line.value) > kReportedTotalTolerance) {
            line.mismatch = true;
            out.warnings.push_back(fmt::format("{}: '{}' computes to {} ({} {} x {}) but the source prints {}",
                                               record.respondent_id, item.name, csv::format_number(line.value),
                                               csv::format_number(item.quantity), item.unit,
                                               csv::format_number(item.unit_price),
                                               csv::format_number(*item.reported_total)));
        }
        values.push_back(line.value);
        out.lines.push_back(std::move(line));
    }
    out.total = out.total.with_value(compensated_sum(values));
    return out;
}

std::vector<HouseholdLossRecord> read_household_losses_csv(const std::filesystem::path& path, int price_year) {
    const auto table = csv::read(path);
    const auto id = table.require_column("respondent_id");
    const auto item = table.require_column("item");
    const auto qty = table.require_column("quantity");
    const auto unit = table.require_column("unit");
    const auto price = table.require_column("unit_price");
    const auto reported = table.column("reported_total");

    std::vector<HouseholdLossRecord> records;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        LossItem li{row[item], csv::to_double(row[qty], table, r), row[unit], csv::to_double(row[price], table, r)};
        try {
            parse_loss_unit(li.unit);
        } catch (const Error& e) {
            throw Error(ErrorCode::UnknownUnit, fmt::format("{}: {}", table.where(r), e.what()));
        }
        if (reported && !row[*reported].empty())
            li.reported_total = csv::to_double(row[*reported], table, r);

        auto it = std::find_if(records.begin(), records.end(),
                               [&](const HouseholdLossRecord& rec) { return rec.respondent_id == row[id]; });
        if (it == records.end()) {
            records.push_back(HouseholdLossRecord{row[id], {}, 0.0, true, price_year});
            it = std::prev(records.end());
        }
        if (li.unit == "decimal")
            it->land_lost_decimal += li.quantity;
        it->items.push_back(std::move(li));
    }
    return records;
}

EnvironmentalCost environmental_cost_cvm(const std::vector<HouseholdLossRecord>& records,
                                         std::optional<double> scale_to_population, int price_year) {
    if (records.empty() && scale_to_population)
        throw Error(ErrorCode::EmptyFrame, "cannot scale an empty set of household records");
    EnvironmentalCost out{MoneyAmount::bdt(0.0, price_year), records.size(), {}};
    std::vector<double> values;
    for (const auto& rec : records) {
        auto v = household_loss_value(rec);
        if (!v.total.same_denomination(out.total))
            throw Error(ErrorCode::IncompatibleAmounts,
                        fmt::format("record '{}' is priced at {}, expected {}", rec.respondent_id,
                                    v.total.base_year(), price_year));
        values.push_back(v.total.value());
        out.warnings.insert(out.warnings.end(), v.warnings.begin(), v.warnings.end());
    }
    double total = compensated_sum(values);
    if (scale_to_population) {
        if (*scale_to_population < 0.0)
            throw Error(ErrorCode::InvalidArgument, "population must be non-negative");
        total = total / static_cast<double>(records.size()) * *scale_to_population;
    }
    out.total = out.total.with_value(total);
    return out;
}

// --- displacement and lives ---------------------------------------------------

MoneyAmount displacement_cost(const MoneyAmount& per_family_loss, double families) {
    if (families < 0.0)
        throw Error(ErrorCode::InvalidArgument, "family count must be non-negative");
    return per_family_loss.scaled(families);
}

MoneyAmount value_of_life(const LifeLossParams& params) {
    if (params.age_at_death < 0.0 || params.annual_income < 0.0 || params.death_count < 0.0)
        throw Error(ErrorCode::InvalidArgument, "age, income and death count must be non-negative");
    const double years_lost = std::max(params.life_expectancy - params.age_at_death, 0.0);
    return MoneyAmount::bdt(years_lost * params.annual_income, params.price_year);
}

MoneyAmount lives_lost_total(const MoneyAmount& per_life, double deaths) {
    if (deaths < 0.0)
        throw Error(ErrorCode::InvalidArgument, "death count must be non-negative");
    return per_life.scaled(deaths);
}

LifeExpectancyTable::LifeExpectancyTable() : table_{{1987, 56.0}, {1994, 61.0}} {}

LifeExpectancyTable::LifeExpectancyTable(std::map<int, double> table) : table_(std::move(table)) {}

LifeExpectancyTable LifeExpectancyTable::read_csv(const std::filesystem::path& path) {
    const auto table = csv::read(path);
    const auto year = table.require_column("year");
    const auto years = table.require_column("expectancy_years");
    std::map<int, double> out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto y = static_cast<int>(csv::to_integer(table.rows[r][year], table, r));
        out[y] = csv::to_double(table.rows[r][years], table, r);
    }
    return LifeExpectancyTable(std::move(out));
}

double LifeExpectancyTable::at(int year) const {
    const auto it = table_.find(year);
    if (it == table_.end())
        throw Error(ErrorCode::MissingDataYear, fmt::format("no life expectancy for {}", year));
    return it->second;
}

} // namespace hydro_cba
