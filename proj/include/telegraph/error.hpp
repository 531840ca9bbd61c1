#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace telegraph {

enum class ErrorCode {
    NonFiniteInput,
    SignViolation,
    ZeroRateInStrictMode,
    InvalidInitialCondition,
    PositionOutOfDomain,
    StartOutOfDomain,
    EmptyGrid,
    ZeroPaths,
    HorizonTooShort,
    CflViolation,
    NonMonotoneInput,
    OutOfAsymptoticRegime,
    EvaluatorFailure,
    PrecisionInsufficient,
    DegenerateSystem,
    IltFailure,
    TOutsideGrid,
    SeriesMissing,
    BranchTrackingFailure,
    GridMismatch,
    GridTooCoarse,
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure in the library surfaces as this exception. `field` names the
/// offending parameter or key when there is one.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string field, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) +
                             (field.empty() ? "" : "(" + field + ")") +
                             (detail.empty() ? "" : ": " + detail)),
          code_(code),
          field_(std::move(field)) {}

    Error(ErrorCode code, const std::string& detail) : Error(code, {}, detail) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& field() const noexcept { return field_; }

private:
    ErrorCode code_;
    std::string field_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::SignViolation: return "SignViolation";
    case ErrorCode::ZeroRateInStrictMode: return "ZeroRateInStrictMode";
    case ErrorCode::InvalidInitialCondition: return "InvalidInitialCondition";
    case ErrorCode::PositionOutOfDomain: return "PositionOutOfDomain";
    case ErrorCode::StartOutOfDomain: return "StartOutOfDomain";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::ZeroPaths: return "ZeroPaths";
    case ErrorCode::HorizonTooShort: return "HorizonTooShort";
    case ErrorCode::CflViolation: return "CflViolation";
    case ErrorCode::NonMonotoneInput: return "NonMonotoneInput";
    case ErrorCode::OutOfAsymptoticRegime: return "OutOfAsymptoticRegime";
    case ErrorCode::EvaluatorFailure: return "EvaluatorFailure";
    case ErrorCode::PrecisionInsufficient: return "PrecisionInsufficient";
    case ErrorCode::DegenerateSystem: return "DegenerateSystem";
    case ErrorCode::IltFailure: return "IltFailure";
    case ErrorCode::TOutsideGrid: return "TOutsideGrid";
    case ErrorCode::SeriesMissing: return "SeriesMissing";
    case ErrorCode::BranchTrackingFailure: return "BranchTrackingFailure";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace telegraph
