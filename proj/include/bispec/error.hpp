#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bispec {

enum class ErrorCode {
    InvalidArgument,
    DimensionMismatch,
    NonSquare,
    SingularMatrix,
    NoConvergence,
    ExactBackendUnsupported,
    NotRankOne,
    DegenerateSpectrum,
    NonSemisimpleQ,
    PoleInZ,
    PoleInX,
    SingularQ,
    SingularRho,
    SingularSystem,
    InvalidRho,
    Io,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ExactBackendUnsupported: return "ExactBackendUnsupported";
    case ErrorCode::NotRankOne: return "NotRankOne";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::NonSemisimpleQ: return "NonSemisimpleQ";
    case ErrorCode::PoleInZ: return "PoleInZ";
    case ErrorCode::PoleInX: return "PoleInX";
    case ErrorCode::SingularQ: return "SingularQ";
    case ErrorCode::SingularRho: return "SingularRho";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::InvalidRho: return "InvalidRho";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace bispec
