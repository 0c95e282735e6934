#pragma once

#include <stdexcept>
#include <string>

namespace biwave {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridMismatch : Error {
    using Error::Error;
};
struct TimeMismatch : Error {
    using Error::Error;
};
struct UnresolvedWidth : Error {
    using Error::Error;
};
struct NonPeriodicGrid : Error {
    using Error::Error;
};
struct SingularSolve : Error {
    using Error::Error;
};
struct UnreachableTime : Error {
    using Error::Error;
};
struct AmplitudeNearZero : Error {
    using Error::Error;
};
struct NotAnEigenvector : Error {
    using Error::Error;
};
struct SymmetryModeMismatch : Error {
    using Error::Error;
};
struct TimeOrderViolation : Error {
    using Error::Error;
};
struct MissingSnapshots : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

} // namespace biwave
