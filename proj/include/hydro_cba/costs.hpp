#pragma once

#include "hydro_cba/series.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hydro_cba {

// --- construction ------------------------------------------------------------

struct ConstructionCostSheet {
    /// Printed rounded to 2403 M; 2402.5 M reconciles with the printed total of
    /// 2440.3 M.
    MoneyAmount establishment{2402.5e6, "Rs", 1957};
    MoneyAmount compensation{37.8e6, "BDT", 1957};
    /// BDT per acre.
    double compensation_rate = 700.0;
    double acres = 54'000.0;
    /// BDT per Rs for the pre-1971 amounts.
    double rs_to_bdt = 1.0;

    void validate() const;
};

/// Establishment plus compensation, in BDT at the sheet's price year.
MoneyAmount construction_nominal_total(const ConstructionCostSheet& sheet);
MoneyAmount construction_pv(const ConstructionCostSheet& sheet, int target_year, const CpiIndexTable& cpi);

// --- household losses --------------------------------------------------------

enum class LossUnit { Kilogram, Mound, Decimal, Count };

inline constexpr double kKgPerMound = 37.3242;

/// Throws UnknownUnit.
LossUnit parse_loss_unit(std::string_view text);
std::string_view to_string(LossUnit unit) noexcept;
/// Mass conversion for kg and mound quantities; throws InvalidArgument for
/// area or count units.
double to_kilograms(double quantity, LossUnit unit);

struct LossItem {
    std::string name;
    double quantity = 0.0;
    std::string unit;
    /// BDT per unit.
    double unit_price = 0.0;
    /// Line total as printed by the source, when one is known.
    std::optional<double> reported_total;
};

struct HouseholdLossRecord {
    std::string respondent_id;
    std::vector<LossItem> items;
    double land_lost_decimal = 0.0;
    bool displaced = true;
    int price_year = 2019;
};

struct LineItemValue {
    std::string name;
    double value;
    std::optional<double> reported_total;
    bool mismatch = false;
};

struct LossValuation {
    MoneyAmount total;
    std::vector<LineItemValue> lines;
    /// One entry per line whose computed total disagrees with its reported one.
    std::vector<std::string> warnings;
};

LossValuation household_loss_value(const HouseholdLossRecord& record);

/// Columns `respondent_id,item,quantity,unit,unit_price[,reported_total]`.
/// Rows sharing a respondent id form one record, in order of first appearance.
std::vector<HouseholdLossRecord> read_household_losses_csv(const std::filesystem::path& path, int price_year);

struct EnvironmentalCost {
    MoneyAmount total;
    std::size_t records = 0;
    std::vector<std::string> warnings;
};

/// Sum of household loss values, or their mean scaled to a population when
/// `scale_to_population` is given.
EnvironmentalCost environmental_cost_cvm(const std::vector<HouseholdLossRecord>& records,
                                         std::optional<double> scale_to_population, int price_year = 2019);

// --- displacement and lives ---------------------------------------------------

MoneyAmount displacement_cost(const MoneyAmount& per_family_loss, double families);

struct LifeLossParams {
    double age_at_death = 0.0;
    double life_expectancy = 0.0;
    /// BDT per year.
    double annual_income = 0.0;
    double death_count = 1.0;
    int price_year = 2019;
};

/// Forgone income (T - X) * W, clamped at zero when X >= T.
MoneyAmount value_of_life(const LifeLossParams& params);
MoneyAmount lives_lost_total(const MoneyAmount& per_life, double deaths);

/// Year -> life expectancy at birth.
class LifeExpectancyTable {
public:
    LifeExpectancyTable();
    explicit LifeExpectancyTable(std::map<int, double> table);
    static LifeExpectancyTable read_csv(const std::filesystem::path& path);

    double at(int year) const;
    const std::map<int, double>& entries() const noexcept { return table_; }

private:
    std::map<int, double> table_;
};

} // namespace hydro_cba
