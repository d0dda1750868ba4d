#pragma once

#include <stdexcept>
#include <string>

namespace qcluster {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A label outside the index set of the object it was used with.
class IndexError : public Error {
public:
    using Error::Error;
};

/// Operands that do not live over the same index set or parameter set.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// Exact division left a nonzero remainder (or did not terminate in bound).
class NotLeftDivisible : public Error {
public:
    using Error::Error;
};

class DivisionByZero : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A homomorphism image that does not exist (negative power of a
/// non-invertible scalar).
class NotDefined : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace qcluster
