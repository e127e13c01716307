#include "hydro_cba/costs.hpp"
#include "hydro_cba/error.hpp"

#include <doctest.h>

#include <cmath>

using namespace hydro_cba;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidArgument;
}

HouseholdLossRecord household_record() {
    return read_household_losses_csv(HYDRO_CBA_DATA_DIR "/household_losses.csv", 2019).at(0);
}

double line(const LossValuation& v, const std::string& name) {
    for (const auto& l : v.lines)
        if (l.name == name)
            return l.value;
    FAIL("missing line " << name);
    return 0.0;
}

} // namespace

TEST_CASE("construction sheet") {
    ConstructionCostSheet sheet;
    const auto nominal = construction_nominal_total(sheet);
    CHECK(nominal.currency() == "BDT");
    CHECK(nominal.base_year() == 1957);
    CHECK(nominal.value() == 2'440.3e6);

    const auto identity = CpiIndexTable::from_anchor_ratio(1957, 2019, 1.0);
    CHECK(construction_pv(sheet, 2019, identity).value() == nominal.value());

    const auto backed_out = CpiIndexTable::from_anchor_ratio(1957, 2019, 404'882.6 / 2'440.3);
    CHECK(std::abs(construction_pv(sheet, 2019, backed_out).millions() - 404'882.6) <= 0.1);

    sheet.compensation = MoneyAmount::bdt(40e6, 1957);
    CHECK(code_of([&] { (void)construction_nominal_total(sheet); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("construction with a non-par rupee rate") {
    ConstructionCostSheet sheet;
    sheet.rs_to_bdt = 2.0;
    CHECK(construction_nominal_total(sheet).value() == doctest::Approx(2 * 2'402.5e6 + 37.8e6).epsilon(1e-15));
}

TEST_CASE("household loss line items") {
    const auto v = household_loss_value(household_record());
    CHECK(line(v, "rice") == 342'300.0);
    CHECK(line(v, "fruits") == 473'820.0);
    CHECK(line(v, "fishes") == 228'900.0);
    CHECK(line(v, "wood") == 86'802'840.0);
    CHECK(line(v, "medicinal_plant") == 1'800.0);
    CHECK(line(v, "acquired_land") == 18'360'648.0);
    CHECK(line(v, "crops") == 1'046'375.0);
    REQUIRE(v.warnings.size() == 1);
    CHECK(v.warnings.front().find("crops") != std::string::npos);
    CHECK(v.warnings.front().find("10046375") != std::string::npos);
}

TEST_CASE("unit parsing") {
    CHECK(parse_loss_unit("maund") == LossUnit::Mound);
    CHECK(to_kilograms(2.0, LossUnit::Mound) == doctest::Approx(74.6484));
    CHECK(code_of([] { (void)parse_loss_unit("bushel"); }) == ErrorCode::UnknownUnit);
    HouseholdLossRecord r{"x", {{"oats", 1.0, "bushel", 1.0}}};
    CHECK(code_of([&] { (void)household_loss_value(r); }) == ErrorCode::UnknownUnit);
}

TEST_CASE("household loss value is additive over concatenation") {
    HouseholdLossRecord a{"a", {{"rice", 3, "mound", 1050}, {"fish", 2.5, "kg", 350}}};
    HouseholdLossRecord b{"b", {{"wood", 1, "mound", 482238}}};
    HouseholdLossRecord ab{"ab", a.items};
    ab.items.insert(ab.items.end(), b.items.begin(), b.items.end());
    CHECK(household_loss_value(ab).total.value() ==
          household_loss_value(a).total.value() + household_loss_value(b).total.value());
}

TEST_CASE("environmental cost") {
    const auto rec = household_record();
    const double one = household_loss_value(rec).total.value();
    CHECK(environmental_cost_cvm({rec}, std::nullopt).total.value() == one);
    CHECK(environmental_cost_cvm({rec, rec}, std::nullopt).total.value() == 2 * one);
    CHECK(code_of([] { (void)environmental_cost_cvm({}, 18000.0); }) == ErrorCode::EmptyFrame);
    CHECK(environmental_cost_cvm({}, std::nullopt).total.value() == 0.0);

    // Oracle: published line totals with the crops row recomputed, times 18,000.
    const double lines = 342'300.0 + 1375.0 * 761.0 + 473'820.0 + 228'900.0 + 86'802'840.0 + 1'800.0 + 18'360'648.0;
    CHECK(environmental_cost_cvm({rec}, 18'000.0).total.value() == doctest::Approx(lines * 18'000.0).epsilon(1e-14));
}

TEST_CASE("displacement") {
    const auto cpi = CpiIndexTable::from_anchor_ratio(1957, 2019, 40.0873);
    const auto per_family = deflate(MoneyAmount::bdt(17'678.0, 1957), 2019, cpi);
    const auto total = displacement_cost(per_family, 18'000);
    CHECK(std::abs(total.millions() - 12'756.0) <= 0.5);
    CHECK(displacement_cost(per_family, 0).value() == 0.0);
    CHECK(displacement_cost(MoneyAmount::bdt(708'663.0, 2019), 1).value() == 708'663.0);
    CHECK(displacement_cost(MoneyAmount::bdt(708'663.0, 2019), 18'000).millions() ==
          doctest::Approx(12'755.934).epsilon(1e-12));
    for (double n : {1.0, 7.0, 18'000.0})
        CHECK(displacement_cost(per_family, 2 * n).value() == 2 * displacement_cost(per_family, n).value());
}

TEST_CASE("value of life") {
    CHECK(value_of_life({35, 35, 10'000}).value() == 0.0);
    CHECK(value_of_life({40, 35, 10'000}).value() == 0.0);
    CHECK(value_of_life({35, 56, 10'000}).value() == 210'000.0);
    double previous = INFINITY;
    for (double x = 0; x <= 70; x += 5) {
        const double v = value_of_life({x, 56, 10'000}).value();
        CHECK(v >= 0.0);
        CHECK(v <= previous);
        previous = v;
    }
    CHECK(value_of_life({35, 56, 20'000}).value() == 2 * value_of_life({35, 56, 10'000}).value());
    CHECK(code_of([] { (void)value_of_life({-1, 56, 1}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("lives lost") {
    const auto total = lives_lost_total(MoneyAmount::bdt(366'654.0, 2019), 1'180);
    CHECK(total.value() == 432'651'720.0);
    CHECK(std::abs(total.millions() - 432.65) <= 0.01);
    CHECK(lives_lost_total(MoneyAmount::bdt(366'654.0, 2019), 0).value() == 0.0);
    CHECK(lives_lost_total(MoneyAmount::bdt(366'654.0, 2019), 1).value() == 366'654.0);
}

TEST_CASE("life expectancy table") {
    const LifeExpectancyTable builtin;
    CHECK(builtin.at(1987) == 56.0);
    CHECK(builtin.at(1994) == 61.0);
    CHECK(code_of([&] { (void)builtin.at(2000); }) == ErrorCode::MissingDataYear);
    const auto bundled = LifeExpectancyTable::read_csv(HYDRO_CBA_DATA_DIR "/life_expectancy.csv");
    CHECK(bundled.at(1994) == 61.0);
}
