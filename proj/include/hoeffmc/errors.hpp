#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hoeffmc {

enum class ErrorKind {
    NotStochastic,
    DegenerateStationary,
    InvalidInput,
    PoleHit,
    BracketFailure,
    GapExhausted,
    InvalidP,
    HorizonTooLarge,
    PerturbationTooLarge,
    SampleTooSmall,
    SingularSigma,
    BracketEmpty,
    ModelViolation,
    Disconnected,
    CTooSmall,
    ParseError,
};

inline constexpr std::string_view error_name(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::NotStochastic: return "NotStochastic";
        case ErrorKind::DegenerateStationary: return "DegenerateStationary";
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::PoleHit: return "PoleHit";
        case ErrorKind::BracketFailure: return "BracketFailure";
        case ErrorKind::GapExhausted: return "GapExhausted";
        case ErrorKind::InvalidP: return "InvalidP";
        case ErrorKind::HorizonTooLarge: return "HorizonTooLarge";
        case ErrorKind::PerturbationTooLarge: return "PerturbationTooLarge";
        case ErrorKind::SampleTooSmall: return "SampleTooSmall";
        case ErrorKind::SingularSigma: return "SingularSigma";
        case ErrorKind::BracketEmpty: return "BracketEmpty";
        case ErrorKind::ModelViolation: return "ModelViolation";
        case ErrorKind::Disconnected: return "Disconnected";
        case ErrorKind::CTooSmall: return "CTooSmall";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// True for failures of a theorem's hypothesis (as opposed to malformed input).
inline constexpr bool is_precondition_failure(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::GapExhausted:
        case ErrorKind::PerturbationTooLarge:
        case ErrorKind::SampleTooSmall:
        case ErrorKind::SingularSigma:
        case ErrorKind::BracketEmpty:
        case ErrorKind::ModelViolation:
        case ErrorKind::CTooSmall:
        case ErrorKind::BracketFailure:
            return true;
        default:
            return false;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::string_view name() const noexcept { return error_name(kind_); }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace hoeffmc
