#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nnwave {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value lies outside the domain of a chart or an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Division by the arithmetic zero of a chart.
class DivisionError : public Error {
public:
    using Error::Error;
};

/// Non-finite intermediate or a math-library domain failure.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Requested output would not fit in memory.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Malformed textual input; `offset` is the byte position of the problem.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace nnwave
