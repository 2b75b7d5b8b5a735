#pragma once

#include <stdexcept>
#include <string>

namespace koszulkit {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Validation failures (CLI exit status 2).
class ValidationError : public Error {
public:
    using Error::Error;
};

class ModeMismatch : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ShapeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NonCommuting : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DegreeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class FormatError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InvarianceViolation : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Finite-section dimensions did not settle before the maximum window (exit status 3).
class NotStabilized : public Error {
public:
    using Error::Error;
};

// Caller-side preconditions (exit status 4).
class PreconditionError : public Error {
public:
    using Error::Error;
};

class IndexSignError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class IndexZeroError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class DeflationFailure : public Error {
public:
    using Error::Error;
};

} // namespace koszulkit
