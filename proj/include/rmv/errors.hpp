#pragma once

#include <stdexcept>

namespace rmv {

// Base for every library error. Config parsing/validation failures get their
// own branch so the CLI can map them to a distinct exit code.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};
struct InvalidParameter : Error {
    using Error::Error;
};

// ambiguity
struct ThetaOutOfDomain : Error {
    using Error::Error;
};
struct NotPositiveDefinite : Error {
    using Error::Error;
};
struct NumericNonConvergence : Error {
    using Error::Error;
};

// hamiltonian
struct NonpositiveM : Error {
    using Error::Error;
};

// strategy
struct TimeOutOfRange : Error {
    using Error::Error;
};
struct EmptyMeasure : Error {
    using Error::Error;
};

// frontier
struct NonpositiveVariance : Error {
    using Error::Error;
};
struct TargetBelowInitial : Error {
    using Error::Error;
};
struct ZeroRiskPremium : Error {
    using Error::Error;
};

// simulation
struct ZeroVariance : Error {
    using Error::Error;
};
struct TooFewSamples : Error {
    using Error::Error;
};
struct NonFiniteWealth : Error {
    using Error::Error;
};

}  // namespace rmv
