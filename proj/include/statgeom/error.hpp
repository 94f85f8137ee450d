// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace statgeom {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression source. Offsets are byte offsets into the source text;
/// line/column are 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset, std::size_t line, std::size_t column)
        : Error(message + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
          offset_(offset), line_(line), column_(column) {}

    std::size_t offset() const noexcept { return offset_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t offset_;
    std::size_t line_;
    std::size_t column_;
};

/// An expression was evaluated outside its domain (division by zero, log of a
/// non-positive value, ...).
class DomainError : public Error {
public:
    DomainError(const std::string& message, std::string subexpression)
        : Error(message + " in '" + subexpression + "'"), subexpression_(std::move(subexpression)) {}

    const std::string& subexpression() const noexcept { return subexpression_; }

private:
    std::string subexpression_;
};

/// Variance or shape mismatch in tensor algebra.
class TensorError : public Error {
public:
    using Error::Error;
};

/// Metric failed the positive-definiteness test.
class MetricError : public Error {
public:
    using Error::Error;
};

/// Input data (spec files, builtin parameters, cubic forms) failed validation.
class ValidationError : public Error {
public:
    using Error::Error;
};

}  // namespace statgeom
