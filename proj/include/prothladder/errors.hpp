#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prothladder {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A stated precondition does not hold (bad parameters, unmet contract).
struct PreconditionError : Error {
    using Error::Error;
};

/// No prime exists in the (N0, N0 + delta) search window; the configuration
/// cannot make progress.
struct GapExceededError : Error {
    using Error::Error;
};

/// Two adjacent ladder parts are further apart than the allowed gap.
struct SpliceGapError : Error {
    explicit SpliceGapError(std::size_t boundary_index, const std::string& what)
        : Error(what), boundary(boundary_index) {}
    std::size_t boundary;
};

/// Certificate text does not match the file grammar.
struct ParseError : Error {
    explicit ParseError(std::size_t line_number, const std::string& what)
        : Error(what), line(line_number) {}
    std::size_t line;
};

/// Argument outside the domain an operation covers.
struct OutOfRangeError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace prothladder
