#pragma once

#include "hydro_cba/component.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace hydro_cba {

/// Published component totals, in million BDT, used as reference points.
namespace published {
inline constexpr double kElectricityMbdt = 138'341.7;
inline constexpr double kTourismMbdt = 20'070.0;
inline constexpr double kTourismAnnualMbdt = 289.71;
inline constexpr double kFisheriesMbdt = 33'366.82;
inline constexpr double kDisplacementMbdt = 12'756.0;
inline constexpr double kLivesLostMbdt = 432.65;
inline constexpr double kConstructionNominalMbdt = 2'440.3;
inline constexpr double kConstructionMbdt = 404'882.6;
inline constexpr double kGrossBenefitMbdt = 191'779.03;
inline constexpr double kGrossCostMbdt = 13'188.65;
inline constexpr double kNetBenefitMbdt = 178'590.38;

/// Printed gross benefit minus the sum of the three printed benefit totals.
inline constexpr double gross_benefit_slack() {
    return kGrossBenefitMbdt - (kElectricityMbdt + kTourismMbdt + kFisheriesMbdt);
}
} // namespace published

struct AggregateOptions {
    /// Counts the construction cost against the benefits. Off by default: the
    /// published net-benefit identity leaves it out.
    bool include_construction = false;
    bool include_environmental = false;
};

struct NetBenefitReport {
    std::vector<ValuationComponent> benefits;
    std::vector<ValuationComponent> costs;
    /// Valued but not part of the net (construction/environmental when not
    /// opted in) plus every Unavailable component.
    std::vector<ValuationComponent> excluded;
    MoneyAmount gross_benefit{0.0, "BDT", 2020};
    MoneyAmount gross_cost{0.0, "BDT", 2020};
    MoneyAmount net_benefit{0.0, "BDT", 2020};
    std::vector<std::string> notes;

    const ValuationComponent* find(ComponentKind kind) const noexcept;
};

/// Requires electricity, fisheries, tourism, displacement and lives lost, all
/// valued in one currency and base year. Security is reported as Unavailable
/// when not supplied. Result does not depend on the order of `components`.
NetBenefitReport aggregate(std::vector<ValuationComponent> components, const AggregateOptions& options = {});

enum class Band { Pass, Warn, Fail };
std::string_view to_string(Band band) noexcept;

/// |deviation| <= 1% passes, <= 10% warns, anything larger fails.
inline constexpr double kPassBandPct = 1.0;
inline constexpr double kWarnBandPct = 10.0;

struct ReferenceCheck {
    std::string label;
    double engine_mbdt = 0.0;
    double reference_mbdt = 0.0;
    double deviation_mbdt = 0.0;
    double deviation_pct = 0.0;
    Band band = Band::Fail;
    std::string note;
};

ReferenceCheck compare_to_reference(std::string label, double engine_mbdt, double reference_mbdt,
                                    std::string note = {});

inline constexpr int kReportSchemaVersion = 1;

nlohmann::json component_to_json(const ValuationComponent& c, std::string_view role);
nlohmann::json report_to_json(const NetBenefitReport& report);

/// Header `component,label,value_mbdt,base_year,imputed_fraction`; gross and
/// net rows follow the components.
void write_report_csv(const std::filesystem::path& path, const NetBenefitReport& report);
/// Reads the component rows of a report CSV (summary rows are skipped). A
/// blank value means Unavailable.
std::vector<ValuationComponent> read_components_csv(const std::filesystem::path& path);

} // namespace hydro_cba
