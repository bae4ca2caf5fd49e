#pragma once

#include <stdexcept>
#include <string>

namespace magnoblock {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Occupation triple outside the two-excitation truncation.
class BasisError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// A linear system in the steady-state hierarchy is singular.
class SingularSystemError : public Error {
public:
    SingularSystemError(const std::string& what, double determinant)
        : Error(what), determinant_(determinant) {}
    double determinant() const { return determinant_; }

private:
    double determinant_;
};

} // namespace magnoblock
