#pragma once

#include <stdexcept>
#include <string>

namespace ofr {

// Base class for everything the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input: config schema, unit tags, argument validation.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Solver failures, convergence problems, size limits.
class NumericalError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace ofr
