#include "hydro_cba/benefits.hpp"
#include "hydro_cba/error.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace hydro_cba;

namespace {

CpiIndexTable flat_cpi(int first, int last) {
    std::vector<SeriesPoint> pts;
    for (int y = first; y <= last; ++y)
        pts.push_back({y, 100.0, Provenance::Actual});
    return CpiIndexTable(AnnualSeries("cpi", pts));
}

CpiIndexTable cpi_from(std::initializer_list<std::pair<int, double>> values) {
    std::vector<SeriesPoint> pts;
    for (const auto& [y, v] : values)
        pts.push_back({y, v, Provenance::Actual});
    return CpiIndexTable(AnnualSeries("cpi", pts));
}

AnnualSeries series(std::initializer_list<std::pair<int, double>> values) {
    std::vector<SeriesPoint> pts;
    for (const auto& [y, v] : values)
        pts.push_back({y, v, Provenance::Actual});
    return AnnualSeries("s", pts);
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidArgument;
}

struct PublishedPriceRow {
    const char* fiscal_year;
    double tons;
    double revenue_mbdt;
    double price;
};

constexpr PublishedPriceRow kPublishedPrices[] = {
    {"2006-07", 5389, 288.87, 53.60364},       {"2007-08", 7633, 423.63, 55.4998},
    {"2008-09", 5495, 314.49, 57.23203},       {"2009-10", 7115, 494.99, 69.56992},
    {"2010-11", 8974, 626.96, 69.86405},       {"2011-12", 8421.75, 694.33, 82.44486},
    {"2012-13", 8813.56, 766.58, 86.97734},    {"2013-14", 7725.55, 668.99, 86.59448},
    {"2014-15", 8644.85, 867.75, 100.3777},    {"2015-16", 9589.6, 996.34, 103.898},
    {"2016-17", 9974.44, 1203.32, 120.6404},   {"2017-18", 10140.78, 1242.5, 122.5251},
};

} // namespace

TEST_CASE("electricity annual net") {
    ElectricityParams p;
    const auto net = electricity_annual_net(p);
    CHECK(net.base_year() == 2020);
    // 180 MW * 1000 * 24 * 365 = 1,576,800,000 kWh at 3.58 BDT margin.
    CHECK(std::abs(net.value() - 5'644'944'000.0) < 1.0);

    p.unit_cost = p.unit_price;
    CHECK(electricity_annual_net(p).value() == 0.0);

    ElectricityParams peak;
    peak.avg_capacity_mw = 230.0;
    CHECK(electricity_annual_net(peak).value() == doctest::Approx(230.0 / 180.0 * net.value()).epsilon(1e-14));
}

TEST_CASE("electricity npv modes") {
    const auto cpi = cpi_from({{2019, 95.0}, {2020, 100.0}});
    ElectricityParams p;
    p.years = {2020, 2020};
    const double annual = electricity_annual_net(p).value();
    CHECK(electricity_npv(p, cpi).npv->value() == annual);

    p.years = {2019, 2020};
    p.mode = BackcastMode::Discount;
    const auto d = electricity_npv(p, cpi);
    CHECK(d.npv->value() == doctest::Approx(annual * (1.0 + 1.0 / 1.07)).epsilon(1e-14));
    CHECK(d.imputed_fraction == 1.0);

    p.mode = BackcastMode::CpiScale;
    CHECK(electricity_npv(p, cpi).npv->value() == doctest::Approx(annual * 1.95).epsilon(1e-14));

    p.years = {2018, 2020};
    CHECK(code_of([&] { (void)electricity_npv(p, cpi); }) == ErrorCode::MissingIndexYear);
}

TEST_CASE("electricity npv is linear in the margin") {
    const auto cpi = flat_cpi(1962, 2020);
    ElectricityParams p;
    p.unit_cost = 0.0;
    const double base = electricity_npv(p, cpi).npv->value();
    p.unit_price *= 2.0;
    CHECK(electricity_npv(p, cpi).npv->value() == 2.0 * base);
}

TEST_CASE("fisheries implied price reproduces every published row") {
    for (const auto& row : kPublishedPrices)
        CHECK(std::abs(fisheries_implied_price(row.tons, row.revenue_mbdt) - row.price) <= 0.01);
    CHECK(fisheries_implied_price(1234.0, 1.234) == 1.0);
    CHECK(code_of([] { (void)fisheries_implied_price(0.0, 1.0); }) == ErrorCode::DivisionByZero);
}

TEST_CASE("fiscal year labels") {
    CHECK(fiscal_year_start("2006-07") == 2006);
    CHECK(fiscal_year_start("2017-18") == 2017);
    CHECK(fiscal_year_start("1999") == 1999);
    CHECK(fiscal_year_start("1999-00") == 1999);
    CHECK(code_of([] { (void)fiscal_year_start("07-08"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { (void)fiscal_year_start("2006-08"); }) == ErrorCode::ParseError);
}

TEST_CASE("fisheries npv arithmetic") {
    const auto cpi = flat_cpi(2000, 2020);
    FisheriesParams p{series({{2019, 1000.0}}), series({{2019, 75.0}})};
    p.start_year = 2019;
    p.base_year = 2019;
    p.unit_cost = 15.0;
    const auto one = fisheries_npv(p, cpi);
    CHECK(one.npv->value() == doctest::Approx(60e6).epsilon(1e-14));

    FisheriesParams two{series({{2018, 1000.0}, {2019, 1000.0}}), series({{2018, 75.0}, {2019, 75.0}})};
    two.start_year = 2018;
    two.base_year = 2019;
    two.discount_rate = 0.10;
    CHECK(fisheries_npv(two, cpi).npv->value() == doctest::Approx(60e6 * (1.0 + 1.10)).epsilon(1e-14));
    two.accumulation = Accumulation::DiscountToBase;
    CHECK(fisheries_npv(two, cpi).npv->value() == doctest::Approx(60e6 * (1.0 + 1.0 / 1.10)).epsilon(1e-14));

    two.discount_rate = 0.0;
    two.accumulation = Accumulation::CompoundToBase;
    CHECK(fisheries_npv(two, cpi).npv->value() == 120e6);
    CHECK(fisheries_npv(two, cpi).imputed_fraction == 0.0);

    two.start_year = 2017;
    CHECK(code_of([&] { (void)fisheries_npv(two, cpi); }) == ErrorCode::MissingDataYear);
}

TEST_CASE("fisheries cost warning") {
    const auto cpi = flat_cpi(2000, 2020);
    FisheriesParams p{series({{2019, 1000.0}}), series({{2019, 75.0}})};
    p.start_year = p.base_year = 2019;
    p.unit_cost = 200.0;
    CHECK_FALSE(fisheries_npv(p, cpi).warnings.empty());
}

TEST_CASE("fisheries series preparation from the bundled table") {
    const auto records = read_fisheries_csv(HYDRO_CBA_DATA_DIR "/fisheries.csv");
    REQUIRE(records.size() == 12);
    CHECK(records.front().year == 2006);
    const auto cpi = cpi_from({{2017, 100.0}, {2018, 105.0}, {2019, 110.0}});
    const auto s = prepare_fisheries_series(records, {2000, 2019}, cpi, CatchFill{0.05});
    CHECK(s.catch_tons.at(2018) == doctest::Approx(10140.78 * 1.05).epsilon(1e-14));
    CHECK(s.catch_tons.provenance(2018) == Provenance::Imputed);
    CHECK(s.catch_tons.at(2005) == doctest::Approx(5389.0 / 1.05).epsilon(1e-14));
    CHECK(s.catch_tons.provenance(2010) == Provenance::Actual);
    CHECK(s.revenue_mbdt.size() == 12);

    const auto no_fill = prepare_fisheries_series(records, {2000, 2019}, cpi, CatchFill{});
    CHECK_FALSE(no_fill.catch_tons.contains(2005));
}

TEST_CASE("empty fisheries file names the file") {
    const auto path = std::filesystem::temp_directory_path() / "hydro_cba_empty_fisheries.csv";
    std::ofstream(path) << "fiscal_year,production_tons,revenue_mbdt\n";
    try {
        (void)read_fisheries_csv(path);
        FAIL("expected MissingDataYear");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingDataYear);
        CHECK(std::string(e.what()).find(path.filename().string()) != std::string::npos);
    }
}

TEST_CASE("tourism npv") {
    const auto flat = flat_cpi(2000, 2020);
    const auto annual = MoneyAmount::bdt(289.71e6, 2018);
    const auto ten = tourism_npv(annual, {2009, 2018}, flat);
    CHECK(ten.npv->millions() == doctest::Approx(2897.1).epsilon(1e-12));
    const auto single = tourism_npv(annual, {2018, 2018}, flat);
    CHECK(single.npv->value() == annual.value());
    CHECK(single.imputed_fraction == 0.0);
}

TEST_CASE("benefit npvs are non-negative for non-negative margins") {
    const auto cpi = flat_cpi(1962, 2020);
    for (double price : {4.2, 5.0, 7.78, 12.0}) {
        ElectricityParams p;
        p.unit_price = price;
        for (auto mode : {BackcastMode::Discount, BackcastMode::CpiScale}) {
            p.mode = mode;
            CHECK(electricity_npv(p, cpi).npv->value() >= 0.0);
        }
    }
}
