#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace brody {

/// Stable, machine-readable failure categories. The names returned by
/// `error_name` are part of the CLI contract and must not change.
enum class ErrorCode {
    InvalidArgument,
    ParseError,
    SyntaxError,
    DegreeOverflow,
    IndeterminateAtPoint,
    ZeroFunction,
    NumericOverflow,
    LambdaOne,
    OutOfCase,
    ConstantMap,
    EmptyDivisor,
    ZeroInSupport,
    MultiplicityNotOne,
    TolUnreachable,
    LambdaNotGreaterOne,
    SeparationViolated,
    NotUnitModulus,
    PreconditionFailed,
    ZeroAtOrigin,
    ZeroOnCircle,
    DivisorMismatch,
    InsufficientSamples,
    UnknownExperiment,
};

constexpr std::string_view error_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::DegreeOverflow: return "DegreeOverflow";
        case ErrorCode::IndeterminateAtPoint: return "IndeterminateAtPoint";
        case ErrorCode::ZeroFunction: return "ZeroFunction";
        case ErrorCode::NumericOverflow: return "NumericOverflow";
        case ErrorCode::LambdaOne: return "LambdaOne";
        case ErrorCode::OutOfCase: return "OutOfCase";
        case ErrorCode::ConstantMap: return "ConstantMap";
        case ErrorCode::EmptyDivisor: return "EmptyDivisor";
        case ErrorCode::ZeroInSupport: return "ZeroInSupport";
        case ErrorCode::MultiplicityNotOne: return "MultiplicityNotOne";
        case ErrorCode::TolUnreachable: return "TolUnreachable";
        case ErrorCode::LambdaNotGreaterOne: return "LambdaNotGreaterOne";
        case ErrorCode::SeparationViolated: return "SeparationViolated";
        case ErrorCode::NotUnitModulus: return "NotUnitModulus";
        case ErrorCode::PreconditionFailed: return "PreconditionFailed";
        case ErrorCode::ZeroAtOrigin: return "ZeroAtOrigin";
        case ErrorCode::ZeroOnCircle: return "ZeroOnCircle";
        case ErrorCode::DivisorMismatch: return "DivisorMismatch";
        case ErrorCode::InsufficientSamples: return "InsufficientSamples";
        case ErrorCode::UnknownExperiment: return "UnknownExperiment";
    }
    return "Unknown";
}

/// True for failures of the numerics themselves, as opposed to bad input.
constexpr bool is_numeric_failure(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::IndeterminateAtPoint:
        case ErrorCode::NumericOverflow:
        case ErrorCode::TolUnreachable:
        case ErrorCode::ZeroOnCircle:
        case ErrorCode::DivisorMismatch:
        case ErrorCode::InsufficientSamples:
            return true;
        default:
            return false;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    std::string_view name() const noexcept { return error_name(code_); }

private:
    ErrorCode code_;
};

}  // namespace brody
