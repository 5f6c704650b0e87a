#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gridmark {

enum class ErrorCode {
    MalformedFile,
    DimensionError,
    NonFiniteValue,
    IoError,
    NotSquare,
    SyntaxError,
    UnknownIdentifier,
    EmptyAggregate,
    DegenerateModel,
    InsufficientCapacity,
    BadParameter,
    DimensionMismatch,
    DegenerateInput,
};

std::string_view error_name(ErrorCode code) noexcept;

// Every failure surfaced by the library. The CLI prints name() on stderr.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    std::string_view name() const noexcept { return error_name(code_); }

private:
    ErrorCode code_;
};

// Rule DSL errors carry the 1-based source line.
class ParseError : public Error {
public:
    ParseError(ErrorCode code, int line, const std::string& message)
        : Error(code, "line " + std::to_string(line) + ": " + message), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

} // namespace gridmark
