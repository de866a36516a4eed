#pragma once

#include <stdexcept>
#include <string>

namespace einsel {

/// A quantity violated a numerical invariant (normalization, Hermiticity,
/// positivity, ...) beyond the documented tolerance.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// An experiment configuration failed validation.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace einsel
