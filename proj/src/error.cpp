#include "qtraj/error.hpp"

namespace qtraj {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NonHermitianInput: return "NonHermitianInput";
        case ErrorKind::NonUnitaryInput: return "NonUnitaryInput";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::InvalidDensity: return "InvalidDensity";
        case ErrorKind::NonpositiveTemperature: return "NonpositiveTemperature";
        case ErrorKind::NegativeTime: return "NegativeTime";
        case ErrorKind::MixingOutOfRange: return "MixingOutOfRange";
        case ErrorKind::ThetaOutOfRange: return "ThetaOutOfRange";
        case ErrorKind::AlphaOutOfRange: return "AlphaOutOfRange";
        case ErrorKind::DimensionError: return "DimensionError";
        case ErrorKind::InfiniteNonthermality: return "InfiniteNonthermality";
        case ErrorKind::BlochNormExceeded: return "BlochNormExceeded";
        case ErrorKind::RankDeficientState: return "RankDeficientState";
        case ErrorKind::InfeasibleTerminal: return "InfeasibleTerminal";
        case ErrorKind::EnsembleTooLarge: return "EnsembleTooLarge";
        case ErrorKind::ZeroProbabilityRecord: return "ZeroProbabilityRecord";
        case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace qtraj
