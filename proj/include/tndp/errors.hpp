#pragma once

#include <stdexcept>
#include <string>

namespace tndp {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: unreadable row, missing field, unparsable number.
class ParseError : public Error {
public:
    using Error::Error;
    ParseError(const std::string& file, int line, const std::string& what)
        : Error(file + ":" + std::to_string(line) + ": " + what) {}
};

/// Structurally readable input that violates a model invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Vector length does not match the object it indexes.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A demanded destination cannot be reached from its origin.
class UnreachableDestination : public Error {
public:
    using Error::Error;
};

/// Overflow or NaN encountered; signals pathological instance data.
class NonFiniteValue : public Error {
public:
    using Error::Error;
};

/// Integer argument outside its admissible range.
class OutOfRange : public Error {
public:
    using Error::Error;
};

/// Feasible-swarm rejection sampling exceeded its draw cap.
class InitializationStall : public Error {
public:
    using Error::Error;
};

/// A region partition came out one-sided, so no comparison is possible.
class EmptyRegion : public Error {
public:
    using Error::Error;
};

}  // namespace tndp
