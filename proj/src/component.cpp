#include "hydro_cba/component.hpp"

#include <fmt/format.h>

#include <array>

namespace hydro_cba {

namespace {

constexpr std::array kKindNames{
    std::pair{ComponentKind::Electricity, std::string_view("electricity")},
    std::pair{ComponentKind::Fisheries, std::string_view("fisheries")},
    std::pair{ComponentKind::Tourism, std::string_view("tourism")},
    std::pair{ComponentKind::Displacement, std::string_view("displacement")},
    std::pair{ComponentKind::LivesLost, std::string_view("lives_lost")},
    std::pair{ComponentKind::LandUseChange, std::string_view("land_use_change")},
    std::pair{ComponentKind::Security, std::string_view("security")},
    std::pair{ComponentKind::Construction, std::string_view("construction")},
    std::pair{ComponentKind::Environmental, std::string_view("environmental")},
};

} // namespace

std::string_view to_string(ComponentKind kind) noexcept {
    for (const auto& [k, name] : kKindNames)
        if (k == kind)
            return name;
    return "unknown";
}

ComponentKind component_kind_from_string(std::string_view text) {
    for (const auto& [k, name] : kKindNames)
        if (name == text)
            return k;
    throw Error(ErrorCode::ParseError, fmt::format("unknown component '{}'", text));
}

bool is_benefit(ComponentKind kind) noexcept {
    return kind == ComponentKind::Electricity || kind == ComponentKind::Fisheries || kind == ComponentKind::Tourism;
}

ValuationComponent unavailable_component(ComponentKind kind, std::string reason) {
    ValuationComponent c{kind, std::string(to_string(kind)), std::nullopt};
    c.method = "unavailable";
    c.warnings.push_back(std::move(reason));
    return c;
}

} // namespace hydro_cba
