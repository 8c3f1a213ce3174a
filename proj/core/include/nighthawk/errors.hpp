#pragma once

#include <stdexcept>
#include <string>

namespace nh {

/// Base class for all nighthawk errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A precondition on an operation's input was violated.
class InvalidInputError : public Error {
public:
    explicit InvalidInputError(const std::string& what) : Error(what) {}
};

/// Rank correlation is undefined (zero rank variance in a sequence).
class UndefinedCorrelationError : public Error {
public:
    explicit UndefinedCorrelationError(const std::string& what) : Error(what) {}
};

/// The Gram matrix could not be factorized even after jitter escalation.
class NotPositiveDefiniteError : public Error {
public:
    explicit NotPositiveDefiniteError(const std::string& what) : Error(what) {}
};

/// An operation was called in a state that does not permit it.
class InvalidStateError : public Error {
public:
    explicit InvalidStateError(const std::string& what) : Error(what) {}
};

/// A config file could not be parsed or contained invalid settings.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

} // namespace nh
