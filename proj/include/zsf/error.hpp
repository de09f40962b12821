#pragma once

#include <stdexcept>
#include <string>

namespace zsf {

/// Base class for every error raised by the library. The CLI maps the
/// concrete subclass onto a process exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or argument (bad grid size, index out of range, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent input data (zeros file, CSV artifacts).
class DataError : public Error {
public:
    using Error::Error;
};

/// Mathematical domain violation, e.g. log of a non-positive energy.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iterative method failed to converge or produced an unusable result.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace zsf
