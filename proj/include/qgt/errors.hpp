#pragma once

#include <stdexcept>
#include <string>

namespace qgt {

/// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input is malformed or violates a declared precondition; the CLI maps
/// these to exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// The computation itself broke down at a specific point (degeneracies,
/// rank loss, ...); the CLI maps these to exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

class NotHermitian : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class TraceNotOne : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NotFullRank : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConvergenceFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class AmbiguousMatching : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateSpectrum : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class LevelCrossing : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DomainExceeded : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class TruncationTooSmall : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DimensionMismatch : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NotPure : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class AxisOutOfRange : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NotTwoParameter : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
public:
    ParseError(const std::string& msg, int line, int column)
        : ValidationError(msg + " (line " + std::to_string(line) + ", column " +
                          std::to_string(column) + ")"),
          line(line),
          column(column) {}
    int line;
    int column;
};

class UnknownModel : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class IncompatibleTaskRegion : public ValidationError {
public:
    using ValidationError::ValidationError;
};

}  // namespace qgt
