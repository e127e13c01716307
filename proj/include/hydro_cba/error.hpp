#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hydro_cba {

enum class ErrorCode {
    // series-core
    MissingIndexYear,
    InvalidIndex,
    InsufficientData,
    EmptyRange,
    IncompatibleAmounts,
    // econometrics
    SingularDesign,
    InsufficientObservations,
    DivisionByZero,
    MissingRegressor,
    UpwardSlopingDemand,
    InvalidStep,
    ChokeNotFound,
    // valuation
    MissingDataYear,
    UnknownUnit,
    EmptyFrame,
    // aggregator
    IncompatibleComponents,
    MissingComponent,
    UnknownParameter,
    // cli-io
    EmptyColumn,
    InvalidArgument,
    ParseError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace hydro_cba
