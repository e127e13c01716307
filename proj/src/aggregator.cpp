#include "hydro_cba/aggregator.hpp"

#include "hydro_cba/csv.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace hydro_cba {

const ValuationComponent* NetBenefitReport::find(ComponentKind kind) const noexcept {
    for (const auto* list : {&benefits, &costs, &excluded})
        for (const auto& c : *list)
            if (c.kind == kind)
                return &c;
    return nullptr;
}

NetBenefitReport aggregate(std::vector<ValuationComponent> components, const AggregateOptions& options) {
    std::sort(components.begin(), components.end(),
              [](const ValuationComponent& a, const ValuationComponent& b) { return a.kind < b.kind; });
    for (std::size_t i = 1; i < components.size(); ++i)
        if (components[i].kind == components[i - 1].kind)
            throw Error(ErrorCode::InvalidArgument,
                        fmt::format("component '{}' supplied twice", to_string(components[i].kind)));

    auto present = [&](ComponentKind kind) {
        return std::any_of(components.begin(), components.end(),
                           [&](const ValuationComponent& c) { return c.kind == kind && c.available(); });
    };
    for (auto kind : {ComponentKind::Electricity, ComponentKind::Fisheries, ComponentKind::Tourism,
                      ComponentKind::Displacement, ComponentKind::LivesLost})
        if (!present(kind))
            throw Error(ErrorCode::MissingComponent, fmt::format("'{}' is required", to_string(kind)));

    if (std::none_of(components.begin(), components.end(),
                     [](const ValuationComponent& c) { return c.kind == ComponentKind::Security; })) {
        components.push_back(unavailable_component(ComponentKind::Security, "security cost data not available"));
        std::sort(components.begin(), components.end(),
                  [](const ValuationComponent& a, const ValuationComponent& b) { return a.kind < b.kind; });
    }

    const ValuationComponent* reference = nullptr;
    for (const auto& c : components) {
        if (!c.available())
            continue;
        if (!reference) {
            reference = &c;
        } else if (!c.npv->same_denomination(*reference->npv)) {
            throw Error(ErrorCode::IncompatibleComponents,
                        fmt::format("'{}' is {}@{} but '{}' is {}@{}", to_string(c.kind), c.npv->currency(),
                                    c.npv->base_year(), to_string(reference->kind), reference->npv->currency(),
                                    reference->npv->base_year()));
        }
    }

    NetBenefitReport report;
    std::vector<double> benefit_values, cost_values;
    for (auto& c : components) {
        const bool counted = c.available() && (c.kind != ComponentKind::Construction || options.include_construction) &&
                             (c.kind != ComponentKind::Environmental || options.include_environmental);
        if (!counted) {
            if (c.kind == ComponentKind::Security && !c.available())
                report.notes.push_back("security cost is Unavailable and not counted");
            report.excluded.push_back(std::move(c));
            continue;
        }
        if (is_benefit(c.kind)) {
            benefit_values.push_back(c.npv->value());
            report.benefits.push_back(std::move(c));
        } else {
            cost_values.push_back(c.npv->value());
            report.costs.push_back(std::move(c));
        }
    }

    const auto& unit = report.benefits.front().npv.value();
    report.gross_benefit = unit.with_value(compensated_sum(benefit_values));
    report.gross_cost = unit.with_value(compensated_sum(cost_values));
    report.net_benefit = report.gross_benefit - report.gross_cost;
    return report;
}

std::string_view to_string(Band band) noexcept {
    switch (band) {
    case Band::Pass: return "pass";
    case Band::Warn: return "warn";
    case Band::Fail: return "fail";
    }
    return "fail";
}

ReferenceCheck compare_to_reference(std::string label, double engine_mbdt, double reference_mbdt, std::string note) {
    ReferenceCheck check{std::move(label), engine_mbdt, reference_mbdt};
    check.deviation_mbdt = engine_mbdt - reference_mbdt;
    check.deviation_pct = reference_mbdt != 0.0 ? 100.0 * check.deviation_mbdt / reference_mbdt : 0.0;
    const double magnitude = std::abs(check.deviation_pct);
    check.band = magnitude <= kPassBandPct ? Band::Pass : magnitude <= kWarnBandPct ? Band::Warn : Band::Fail;
    check.note = std::move(note);
    return check;
}

nlohmann::json component_to_json(const ValuationComponent& c, std::string_view role) {
    nlohmann::json j = {{"component", std::string(to_string(c.kind))},
                        {"label", c.label},
                        {"role", std::string(role)},
                        {"available", c.available()},
                        {"method", c.method},
                        {"imputed_fraction", c.imputed_fraction},
                        {"warnings", c.warnings}};
    if (c.available()) {
        j["value_mbdt"] = c.npv->millions();
        j["currency"] = c.npv->currency();
        j["base_year"] = c.npv->base_year();
    } else {
        j["value_mbdt"] = nullptr;
        j["status"] = "Unavailable";
    }
    if (!c.years.empty())
        j["years"] = {c.years.first, c.years.last};
    return j;
}

nlohmann::json report_to_json(const NetBenefitReport& report) {
    auto components = nlohmann::json::array();
    for (const auto& c : report.benefits)
        components.push_back(component_to_json(c, "benefit"));
    for (const auto& c : report.costs)
        components.push_back(component_to_json(c, "cost"));
    for (const auto& c : report.excluded)
        components.push_back(component_to_json(c, "excluded"));
    return {{"schema_version", kReportSchemaVersion},
            {"currency", report.net_benefit.currency()},
            {"base_year", report.net_benefit.base_year()},
            {"components", components},
            {"gross_benefit_mbdt", report.gross_benefit.millions()},
            {"gross_cost_mbdt", report.gross_cost.millions()},
            {"net_benefit_mbdt", report.net_benefit.millions()},
            {"notes", report.notes}};
}

void write_report_csv(const std::filesystem::path& path, const NetBenefitReport& report) {
    std::vector<std::vector<std::string>> rows;
    auto add = [&](const ValuationComponent& c) {
        rows.push_back({std::string(to_string(c.kind)), c.label,
                        c.available() ? csv::format_number(c.npv->millions()) : std::string{},
                        c.available() ? std::to_string(c.npv->base_year()) : std::string{},
                        csv::format_number(c.imputed_fraction)});
    };
    for (const auto* list : {&report.benefits, &report.costs, &report.excluded})
        for (const auto& c : *list)
            add(c);
    const auto year = std::to_string(report.net_benefit.base_year());
    rows.push_back({"gross_benefit", "Gross benefit", csv::format_number(report.gross_benefit.millions()), year, ""});
    rows.push_back({"gross_cost", "Gross cost", csv::format_number(report.gross_cost.millions()), year, ""});
    rows.push_back({"net_benefit", "Net benefit", csv::format_number(report.net_benefit.millions()), year, ""});
    csv::write(path, {"component", "label", "value_mbdt", "base_year", "imputed_fraction"}, rows);
}

std::vector<ValuationComponent> read_components_csv(const std::filesystem::path& path) {
    static const std::set<std::string> kSummaryRows{"gross_benefit", "gross_cost", "net_benefit"};
    const auto table = csv::read(path);
    const auto comp = table.require_column("component");
    const auto label = table.require_column("label");
    const auto value = table.require_column("value_mbdt");
    const auto year = table.require_column("base_year");
    const auto imputed = table.column("imputed_fraction");
    std::vector<ValuationComponent> out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (kSummaryRows.contains(row[comp]))
            continue;
        ComponentKind kind;
        try {
            kind = component_kind_from_string(row[comp]);
        } catch (const Error& e) {
            throw Error(ErrorCode::ParseError, fmt::format("{}: {}", table.where(r), e.what()));
        }
        ValuationComponent c{kind, row[label].empty() ? std::string(to_string(kind)) : row[label], std::nullopt};
        if (!row[value].empty()) {
            const auto y = static_cast<int>(csv::to_integer(row[year], table, r));
            c.npv = MoneyAmount::bdt(csv::to_double(row[value], table, r) * 1e6, y);
            c.method = "supplied";
        } else {
            c.method = "unavailable";
        }
        if (imputed && !row[*imputed].empty()) {
            c.imputed_fraction = csv::to_double(row[*imputed], table, r);
            if (c.imputed_fraction < 0.0 || c.imputed_fraction > 1.0)
                throw Error(ErrorCode::ParseError, fmt::format("{}: imputed_fraction outside [0, 1]", table.where(r)));
        }
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace hydro_cba
