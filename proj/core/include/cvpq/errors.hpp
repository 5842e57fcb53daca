#pragma once

#include <stdexcept>
#include <string>

namespace cvpq {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied argument violates a documented precondition.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// Density requested for a measure that contains a point mass.
class UndefinedDensity : public Error {
public:
    using Error::Error;
};

/// Covariance matrix requested for a behavior whose marginals depend on remote settings.
class IllDefinedCovariance : public Error {
public:
    using Error::Error;
};

/// Two independent computation routes disagree. Always a library bug.
class OracleMismatch : public Error {
public:
    using Error::Error;
};

}  // namespace cvpq
