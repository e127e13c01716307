#include "hydro_cba/aggregator.hpp"
#include "hydro_cba/error.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

using namespace hydro_cba;

namespace {

ValuationComponent make(ComponentKind kind, double mbdt, int year = 2020) {
    return ValuationComponent{kind, std::string(to_string(kind)), MoneyAmount::bdt(mbdt * 1e6, year)};
}

std::vector<ValuationComponent> published_components() {
    return {make(ComponentKind::Electricity, published::kElectricityMbdt),
            make(ComponentKind::Tourism, published::kTourismMbdt),
            make(ComponentKind::Fisheries, published::kFisheriesMbdt),
            make(ComponentKind::Displacement, published::kDisplacementMbdt),
            make(ComponentKind::LivesLost, published::kLivesLostMbdt)};
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

TEST_CASE("published components") {
    const auto report = aggregate(published_components());
    CHECK(std::abs(report.net_benefit.millions() - published::kNetBenefitMbdt) <= 1.0);
    // Exact arithmetic on the printed parts.
    CHECK(report.gross_benefit.millions() == doctest::Approx(191'778.52).epsilon(1e-12));
    CHECK(report.gross_cost.millions() == doctest::Approx(13'188.65).epsilon(1e-12));
    CHECK(report.net_benefit.millions() == doctest::Approx(178'589.87).epsilon(1e-12));
    CHECK(published::gross_benefit_slack() == doctest::Approx(0.51).epsilon(1e-6));
    CHECK(report.net_benefit.value() == (report.gross_benefit - report.gross_cost).value());
}

TEST_CASE("security is never silently dropped") {
    const auto report = aggregate(published_components());
    const auto* security = report.find(ComponentKind::Security);
    REQUIRE(security != nullptr);
    CHECK_FALSE(security->available());
    const auto j = report_to_json(report);
    bool found = false;
    for (const auto& c : j.at("components"))
        if (c.at("component") == "security") {
            found = true;
            CHECK(c.at("status") == "Unavailable");
            CHECK(c.at("value_mbdt").is_null());
        }
    CHECK(found);
}

TEST_CASE("trivial identities") {
    std::vector<ValuationComponent> zero;
    for (auto kind : {ComponentKind::Electricity, ComponentKind::Fisheries, ComponentKind::Tourism,
                      ComponentKind::Displacement, ComponentKind::LivesLost})
        zero.push_back(make(kind, 0.0));
    CHECK(aggregate(zero).net_benefit.value() == 0.0);

    auto balanced = published_components();
    balanced[3] = make(ComponentKind::Displacement, published::kElectricityMbdt + published::kTourismMbdt);
    balanced[4] = make(ComponentKind::LivesLost, published::kFisheriesMbdt);
    CHECK(std::abs(aggregate(balanced).net_benefit.value()) < 1e-3);
}

TEST_CASE("permutation invariance") {
    auto components = published_components();
    components.push_back(make(ComponentKind::Construction, 404'882.6));
    const auto reference = aggregate(components).net_benefit.value();
    std::mt19937 rng(11);
    for (int i = 0; i < 50; ++i) {
        std::shuffle(components.begin(), components.end(), rng);
        CHECK(aggregate(components).net_benefit.value() == reference);
    }
}

TEST_CASE("monotone in each benefit") {
    const auto base = aggregate(published_components()).net_benefit.value();
    for (std::size_t i = 0; i < 3; ++i) {
        auto bumped = published_components();
        const double delta = 1'234.5e6;
        bumped[i].npv = bumped[i].npv->with_value(bumped[i].npv->value() + delta);
        CHECK(aggregate(bumped).net_benefit.value() - base == doctest::Approx(delta).epsilon(1e-12));
    }
}

TEST_CASE("construction and environmental are opt-in") {
    auto components = published_components();
    components.push_back(make(ComponentKind::Construction, 404'882.6));
    components.push_back(make(ComponentKind::Environmental, 100.0));
    const auto excluded = aggregate(components);
    CHECK(excluded.net_benefit.millions() == doctest::Approx(178'589.87).epsilon(1e-12));
    const auto included = aggregate(components, {true, false});
    CHECK(included.net_benefit.millions() == doctest::Approx(178'589.87 - 404'882.6).epsilon(1e-12));
    CHECK(included.net_benefit.value() < 0.0);
    const auto both = aggregate(components, {true, true});
    CHECK(both.net_benefit.millions() == doctest::Approx(178'589.87 - 404'882.6 - 100.0).epsilon(1e-12));
}

TEST_CASE("aggregation errors") {
    auto missing = published_components();
    missing.pop_back();
    CHECK(code_of([&] { (void)aggregate(missing); }) == ErrorCode::MissingComponent);

    auto mixed = published_components();
    mixed[4] = make(ComponentKind::LivesLost, 432.65, 2019);
    try {
        (void)aggregate(mixed);
        FAIL("expected IncompatibleComponents");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IncompatibleComponents);
        CHECK(std::string(e.what()).find("lives_lost") != std::string::npos);
    }

    auto twice = published_components();
    twice.push_back(make(ComponentKind::Tourism, 1.0));
    CHECK(code_of([&] { (void)aggregate(twice); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("reference bands") {
    CHECK(compare_to_reference("x", 100.5, 100.0).band == Band::Pass);
    CHECK(compare_to_reference("x", 105.0, 100.0).band == Band::Warn);
    CHECK(compare_to_reference("x", 89.0, 100.0).band == Band::Fail);
    CHECK(compare_to_reference("x", 89.0, 100.0).deviation_pct == doctest::Approx(-11.0));
}

TEST_CASE("report csv round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "hydro_cba_agg_test";
    std::filesystem::create_directories(dir);
    auto components = published_components();
    components.push_back(make(ComponentKind::Construction, 404'882.6));
    const auto report = aggregate(components);
    write_report_csv(dir / "report.csv", report);
    const auto back = read_components_csv(dir / "report.csv");
    CHECK(back.size() == 7);
    const auto again = aggregate(back);
    CHECK(again.net_benefit.value() == report.net_benefit.value());
    CHECK_FALSE(again.find(ComponentKind::Security)->available());
}

TEST_CASE("report json carries schema version") {
    const auto j = report_to_json(aggregate(published_components()));
    CHECK(j.at("schema_version") == kReportSchemaVersion);
    CHECK(j.at("base_year") == 2020);
}
