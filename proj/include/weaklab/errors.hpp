#pragma once

#include <stdexcept>
#include <string>

namespace weaklab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Out-of-range grid parameters, malformed options.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Requested operation is undefined for the given arguments (root has no
/// parent, non-positive height, vanishing weight, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// An integral table for an exponent that was not requested at realization.
class UncachedExponentError : public Error {
public:
    using Error::Error;
};

/// Malformed weight/function file. Carries the 1-based offending row (0 when
/// the problem is not tied to one row, e.g. a wrong row count).
class IngestError : public Error {
public:
    IngestError(const std::string& what, std::size_t row)
        : Error(what), row_(row) {}
    [[nodiscard]] std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// Malformed weight spec string or command line.
class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace weaklab
