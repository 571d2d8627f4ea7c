#pragma once

#include <stdexcept>
#include <string>

namespace dipkit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (unsorted sample, NaN, bad flag value...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A request the chosen back-end cannot serve, e.g. a sample size beyond the
/// largest row of a look-up table.
class OutOfRange : public Error {
public:
    using Error::Error;
};

/// Curve fitting did not reach an acceptable optimum.
class FitFailure : public Error {
public:
    using Error::Error;
};

/// The dip has no modal triangle, so no gradient is defined.
class NoGradient : public Error {
public:
    using Error::Error;
};

/// All projected values coincide on the triangle support.
class DegenerateProjection : public Error {
public:
    using Error::Error;
};

}  // namespace dipkit
