#include "hydro_cba/csv.hpp"
#include "hydro_cba/error.hpp"
#include "hydro_cba/series.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>

using namespace hydro_cba;

namespace {

AnnualSeries series_of(std::initializer_list<std::pair<int, double>> values, Provenance p = Provenance::Actual) {
    std::vector<SeriesPoint> points;
    for (const auto& [y, v] : values)
        points.push_back({y, v, p});
    return AnnualSeries("test", points);
}

CpiIndexTable flat_cpi(int first, int last) {
    std::vector<SeriesPoint> pts;
    for (int y = first; y <= last; ++y)
        pts.push_back({y, 100.0, Provenance::Actual});
    return CpiIndexTable(AnnualSeries("cpi", pts));
}

CpiIndexTable growing_cpi(int first, int last, double g) {
    std::vector<SeriesPoint> pts;
    for (int y = first; y <= last; ++y)
        pts.push_back({y, 100.0 * std::pow(1.0 + g, y - 2010), Provenance::Actual});
    return CpiIndexTable(AnnualSeries("cpi", pts));
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

} // namespace

TEST_CASE("money amounts refuse mixed denominations") {
    const auto a = MoneyAmount::bdt(10.0, 2019);
    const auto b = MoneyAmount::bdt(5.0, 2019);
    CHECK((a + b).value() == 15.0);
    CHECK((a - b).value() == 5.0);
    CHECK(code_of([&] { (void)(a + MoneyAmount::bdt(1.0, 2020)); }) == ErrorCode::IncompatibleAmounts);
    CHECK(code_of([&] { (void)(a + MoneyAmount(1.0, "USD", 2019)); }) == ErrorCode::IncompatibleAmounts);
    CHECK(code_of([] { MoneyAmount(1.0, "BDT", 1949); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { MoneyAmount(NAN, "BDT", 2000); }) == ErrorCode::InvalidArgument);
    CHECK(convert_currency(MoneyAmount(0.05, "USD", 2020), "BDT", 84.0).value() == doctest::Approx(4.20));
}

TEST_CASE("annual series validates contiguity and duplicates") {
    CHECK(code_of([] { series_of({{2000, 1}, {2002, 2}}); }) == ErrorCode::MissingDataYear);
    CHECK(code_of([] { series_of({{2000, 1}, {2000, 2}}); }) == ErrorCode::InvalidArgument);
    const auto s = series_of({{2001, 2}, {2000, 1}});
    CHECK(s.first_year() == 2000);
    CHECK(s.at(2001) == 2.0);
    CHECK(code_of([&] { (void)s.at(1999); }) == ErrorCode::MissingDataYear);
}

TEST_CASE("cpi table invariants") {
    CHECK(code_of([] { CpiIndexTable(series_of({{2009, 90}, {2010, 0}})); }) == ErrorCode::InvalidIndex);
    CHECK(code_of([] { CpiIndexTable(series_of({{2009, 90}, {2010, 99}})); }) == ErrorCode::InvalidIndex);
    const CpiIndexTable cpi(series_of({{2009, 90}, {2010, 100}}));
    CHECK(code_of([&] { (void)cpi.at(2011); }) == ErrorCode::MissingIndexYear);
}

TEST_CASE("deflate: land value example and identities") {
    const auto cpi = CpiIndexTable::from_anchor_ratio(1957, 2019, 40.0873);
    const auto out = deflate(MoneyAmount::bdt(17'678.0, 1957), 2019, cpi);
    CHECK(out.base_year() == 2019);
    CHECK(std::abs(out.value() - 708'663.0) < 0.5);
    CHECK(out.value() == doctest::Approx(17'678.0 * 40.0873).epsilon(1e-12));

    const auto same = deflate(MoneyAmount::bdt(123.45, 1990), 1990, cpi);
    CHECK(same.value() == 123.45);

    const auto back = deflate(out, 1957, cpi);
    CHECK(std::abs(back.value() - 17'678.0) / 17'678.0 < 1e-9);

    CHECK(code_of([&] { (void)deflate(MoneyAmount::bdt(1.0, 1950), 2019, cpi); }) == ErrorCode::MissingIndexYear);
}

TEST_CASE("deflation is transitive") {
    const auto cpi = growing_cpi(1960, 2020, 0.061);
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> year(1960, 2020);
    for (int i = 0; i < 200; ++i) {
        const auto x = MoneyAmount::bdt(1000.0 + i, year(rng));
        const int a = year(rng), b = year(rng);
        const double direct = deflate(x, b, cpi).value();
        const double via = deflate(deflate(x, a, cpi), b, cpi).value();
        CHECK(std::abs(direct - via) / std::abs(direct) < 1e-9);
    }
}

TEST_CASE("backcast: hand arithmetic") {
    const CpiIndexTable known(series_of({{1986, 10.0}, {1987, 11.0}}));
    const auto out = backcast_cpi(known, 1985, GeometricTrend{1});
    CHECK(out.at(1985) == doctest::Approx(10.0 / 1.1).epsilon(1e-14));
    CHECK(out.series().provenance(1985) == Provenance::Imputed);
    CHECK(out.at(1986) == 10.0);
    CHECK(out.at(1987) == 11.0);

    const auto unchanged = backcast_cpi(known, 1986, GeometricTrend{1});
    CHECK(unchanged.series().size() == 2);
    CHECK(code_of([&] { (void)backcast_cpi(known, 1980, GeometricTrend{2}); }) == ErrorCode::InsufficientData);
}

TEST_CASE("backcast to 1962 imputes 40 percent of 1962-2020") {
    const auto cpi = backcast_cpi(growing_cpi(1986, 2020, 0.06), 1962);
    CHECK(cpi.series().size() == 59);
    CHECK(cpi.series().imputed_count() == 24);
    CHECK(std::round(100.0 * cpi.series().imputed_fraction()) == 41.0);
    // Actual points are preserved bit for bit.
    const auto original = growing_cpi(1986, 2020, 0.06);
    for (int y = 1986; y <= 2020; ++y) {
        CHECK(cpi.at(y) == original.at(y));
        CHECK(cpi.series().provenance(y) == Provenance::Actual);
    }
}

TEST_CASE("impute_series_by_cpi") {
    const auto flat = impute_series_by_cpi(2020, 100.0, {2010, 2020}, flat_cpi(2000, 2020));
    for (const auto& p : flat.points())
        CHECK(p.value == 100.0);
    CHECK(flat.provenance(2020) == Provenance::Actual);
    CHECK(flat.imputed_count() == 10);

    const CpiIndexTable cpi(series_of({{2019, 95.0}, {2020, 100.0}}));
    const auto s = impute_series_by_cpi(2020, 5644.94, {2019, 2020}, cpi);
    CHECK(s.at(2019) == doctest::Approx(5644.94 * 0.95).epsilon(1e-14));
    CHECK(std::abs(s.at(2019) - 5362.69) < 0.01);
    CHECK(s.at(2020) == 5644.94);

    CHECK(code_of([&] { (void)impute_series_by_cpi(2020, 1.0, {2020, 2019}, cpi); }) == ErrorCode::EmptyRange);
}

TEST_CASE("series_sum and compensated summation") {
    CHECK(series_sum(AnnualSeries("e", {})).value == 0.0);
    CHECK(series_sum(series_of({{1, 2}, {2, 3}})).value == 5.0);

    const std::vector<double> production{5389,    7633,    5495,   7115,   8974,    8421.75,
                                         8813.56, 7725.55, 8644.85, 9589.6, 9974.44, 10140.78};
    // Oracle: integer arithmetic in hundredths.
    long long cents = 0;
    for (double v : production)
        cents += std::llround(v * 100);
    CHECK(cents == 9'791'653);
    CHECK(compensated_sum(production) == doctest::Approx(97'916.53).epsilon(1e-15));

    std::vector<double> shuffled = production;
    std::mt19937 rng(3);
    for (int i = 0; i < 20; ++i) {
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(compensated_sum(shuffled) == compensated_sum(production));
    }
    const std::vector<double> hard{1e16, 1.0, -1e16};
    CHECK(compensated_sum(hard) == 1.0);
}

TEST_CASE("series csv round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "hydro_cba_series_test";
    std::filesystem::create_directories(dir);
    std::vector<SeriesPoint> pts{{2000, 1.5, Provenance::Actual}, {2001, 0.1 + 0.2, Provenance::Imputed}};
    const AnnualSeries s("x", pts);
    write_series_csv(dir / "s.csv", s);
    const auto back = read_series_csv(dir / "s.csv", "x");
    REQUIRE(back.size() == 2);
    CHECK(back.at(2001) == s.at(2001));
    CHECK(back.provenance(2001) == Provenance::Imputed);

    const auto bundled = read_series_csv(HYDRO_CBA_DATA_DIR "/cpi.csv", "cpi");
    write_series_csv(dir / "cpi.csv", bundled);
    const auto again = read_series_csv(dir / "cpi.csv", "cpi");
    for (const auto& p : bundled.points()) {
        CHECK(again.at(p.year) == p.value);
        CHECK(again.provenance(p.year) == p.provenance);
    }
}

TEST_CASE("csv parser reports file and line") {
    const auto t = csv::parse("# comment\na,b\n1,2\n\nx,3\n", "mem.csv");
    CHECK(t.rows.size() == 2);
    CHECK(t.where(1) == "mem.csv:5");
    try {
        (void)csv::to_double(t.rows[1][0], t, 1);
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(std::string(e.what()).find("mem.csv:5") != std::string::npos);
    }
}
