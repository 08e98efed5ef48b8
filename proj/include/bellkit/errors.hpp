#pragma once

#include <stdexcept>
#include <string>

namespace bellkit {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or inconsistent input (bad probabilities, counts, parameters).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// A required setting combination has no data.
class InsufficientDataError : public ValidationError {
public:
    explicit InsufficientDataError(const std::string& msg) : ValidationError(msg) {}
};

/// The requested experiment or search cannot succeed (e.g. J <= eps_AB,
/// or no efficiency in [0,1] yields a violation).
class InfeasibleError : public Error {
public:
    explicit InfeasibleError(const std::string& msg) : Error(msg) {}
};

/// File or stream problems.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace bellkit
