#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace bijclique {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand moduli disagree, e.g. taking the difference of f : Z_5 -> Z_5 and g : Z_7 -> Z_7.
class modulus_mismatch : public error {
public:
    modulus_mismatch(std::uint64_t a, std::uint64_t b)
        : error("modulus mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

/// A value violates a documented precondition.
class invalid_argument : public error {
public:
    using error::error;
};

/// Certificate text could not be parsed. Line and column are 1-based.
class parse_error : public error {
public:
    parse_error(std::size_t line, std::size_t column, const std::string& message, const std::string& source = {})
        : error((source.empty() ? "" : source + ": ") + "line " + std::to_string(line) + ", column " +
                std::to_string(column) + ": " + message),
          line_(line), column_(column), message_(message) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

} // namespace bijclique
