#pragma once

#include <stdexcept>
#include <string>

namespace wfo {

/// Bad or inconsistent input data (files, series invariants).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input row. Carries the 1-based line number.
class ParseError : public DataError {
public:
    ParseError(std::size_t line, const std::string& what)
        : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A domain invariant does not hold (non-positive price, duplicate timestamp, ...).
class ValidationError : public DataError {
public:
    using DataError::DataError;
};

/// Invalid run configuration or command-line usage.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every EMA pair produced an undefined Sharpe on a training slice.
class SegmentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace wfo
