#pragma once

#include "hydro_cba/series.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hydro_cba {

enum class ComponentKind {
    Electricity,
    Fisheries,
    Tourism,
    Displacement,
    LivesLost,
    LandUseChange,
    Security,
    Construction,
    Environmental,
};

std::string_view to_string(ComponentKind kind) noexcept;
/// Accepts the names produced by to_string(). Throws ParseError otherwise.
ComponentKind component_kind_from_string(std::string_view text);
bool is_benefit(ComponentKind kind) noexcept;

/// One labelled line item of the net-benefit identity.
struct ValuationComponent {
    ComponentKind kind;
    std::string label;
    /// Absent when the component could not be valued (reported as Unavailable).
    std::optional<MoneyAmount> npv;
    YearRange years{0, -1};
    std::string method;
    double imputed_fraction = 0.0;
    std::vector<std::string> warnings;
    /// Year-by-year contributions and any series synthesized along the way.
    std::vector<AnnualSeries> series;

    bool available() const noexcept { return npv.has_value(); }
};

ValuationComponent unavailable_component(ComponentKind kind, std::string reason);

} // namespace hydro_cba
