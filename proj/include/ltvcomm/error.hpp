#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ltvcomm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A coefficient expression was evaluated outside its domain (square root of a non-positive base).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Wrong number of coefficients for the declared system order.
class ArityError : public Error {
public:
    using Error::Error;
};

/// Leading coefficient drops below the positivity floor somewhere on the horizon.
class DegenerateLeadingCoefficient : public Error {
public:
    using Error::Error;
};

/// Raised by synthesis when the transformed leading coefficient is not positive.
class NonPositiveLeading : public DegenerateLeadingCoefficient {
public:
    using DegenerateLeadingCoefficient::DegenerateLeadingCoefficient;
};

/// A check was requested for parameters it is not defined for.
class NotApplicable : public Error {
public:
    using Error::Error;
};

/// Invalid solver configuration, signal parameters or switching schedule.
class ConfigError : public Error {
public:
    using Error::Error;
};

class SeriesTooShort : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

/// Syntax error in a scenario file or expression, with 1-based position and the set of expected tokens.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected, const std::string& found)
        : Error(format(line, column, expected, found)),
          line_(line),
          column_(column),
          expected_(std::move(expected)) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }
    [[nodiscard]] const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    static std::string format(std::size_t line, std::size_t column, const std::vector<std::string>& expected,
                              const std::string& found) {
        std::string msg = "line " + std::to_string(line) + ", column " + std::to_string(column) + ": expected ";
        if (expected.size() == 1) {
            msg += expected.front();
        } else {
            msg += "one of {";
            for (std::size_t i = 0; i < expected.size(); ++i) {
                if (i != 0) msg += ", ";
                msg += expected[i];
            }
            msg += "}";
        }
        msg += ", found " + found;
        return msg;
    }

    std::size_t line_;
    std::size_t column_;
    std::vector<std::string> expected_;
};

/// Well-formed input that violates a scenario invariant (unsupported order, missing key, ...).
class SemanticError : public Error {
public:
    using Error::Error;
};

}  // namespace ltvcomm
