#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace muxrule {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the 1-based line number (0 when not line-bound).
class ParseError : public Error {
public:
    ParseError(const std::string& file, std::size_t line, const std::string& what)
        : Error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// An input violates a structural invariant (e.g. a coupled multigraph edge with no layer).
class StructuralError : public Error {
public:
    using Error::Error;
};

/// Embedding enumeration exceeded its partial-state budget.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Bad arguments to a library call or the command line.
class UsageError : public Error {
public:
    using Error::Error;
};

/// No positives or no negatives to rank.
class EvaluationError : public Error {
public:
    using Error::Error;
};

} // namespace muxrule
