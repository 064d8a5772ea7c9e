#pragma once

#include <stdexcept>
#include <string>

namespace qtraj {

enum class ErrorKind {
    InvalidArgument,
    DimensionMismatch,
    NonHermitianInput,
    NonUnitaryInput,
    DomainError,
    InvalidDensity,
    NonpositiveTemperature,
    NegativeTime,
    MixingOutOfRange,
    ThetaOutOfRange,
    AlphaOutOfRange,
    DimensionError,
    InfiniteNonthermality,
    BlochNormExceeded,
    RankDeficientState,
    InfeasibleTerminal,
    EnsembleTooLarge,
    ZeroProbabilityRecord,
    DimensionTooLarge,
};

const char* to_string(ErrorKind kind) noexcept;

// All library failures are reported through this exception; kind() lets callers
// (and tests) distinguish the contract that was violated.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool condition, ErrorKind kind, const std::string& what) {
    if (!condition) fail(kind, what);
}

}  // namespace qtraj
