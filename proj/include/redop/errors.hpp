#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace redop {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller violated a precondition (bad flags, degenerate constants, ...).
class UsageError : public Error {
public:
    using Error::Error;
};

class ParseError : public UsageError {
public:
    enum class Kind { Syntax, UnknownIdentifier };

    ParseError(Kind kind, std::size_t offset, const std::string& what)
        : UsageError(what + " at byte " + std::to_string(offset)), kind_(kind), offset_(offset)
    {
    }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    Kind kind_;
    std::size_t offset_;
};

/// Input is well-formed but mathematically unusable (v == 0, Phi_u == 0, ...).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// A triple of functions whose Wronskian-type determinant vanishes identically.
class LinearDependenceError : public Error {
public:
    using Error::Error;
};

/// Denominator of the zeta/omega integrals vanishes for the given solution.
class GenericityError : public Error {
public:
    using Error::Error;
};

/// An internal identity that must hold did not (e.g. a bracket left the algebra).
class ConsistencyError : public Error {
public:
    using Error::Error;
};

} // namespace redop
