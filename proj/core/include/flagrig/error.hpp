#pragma once

#include <stdexcept>
#include <string>

namespace flagrig {

/// Mathematical precondition violated (maps to CLI exit code 1).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input or bad command usage (maps to CLI exit code 2).
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

struct FieldMismatchError : DomainError {
    explicit FieldMismatchError(const std::string& msg) : DomainError(msg) {}
};

struct DivisionByZeroError : DomainError {
    explicit DivisionByZeroError(const std::string& msg) : DomainError(msg) {}
};

struct DimensionMismatchError : DomainError {
    explicit DimensionMismatchError(const std::string& msg) : DomainError(msg) {}
};

struct SingularMatrixError : DomainError {
    explicit SingularMatrixError(const std::string& msg) : DomainError(msg) {}
};

struct NotInChartError : DomainError {
    explicit NotInChartError(const std::string& msg) : DomainError(msg) {}
};

struct UndefinedBetaError : DomainError {
    explicit UndefinedBetaError(const std::string& msg) : DomainError(msg) {}
};

struct NotAutomorphismError : DomainError {
    explicit NotAutomorphismError(const std::string& msg) : DomainError(msg) {}
};

struct UnsupportedRangeError : DomainError {
    explicit UnsupportedRangeError(const std::string& msg) : DomainError(msg) {}
};

struct DegenerateMapError : DomainError {
    explicit DegenerateMapError(const std::string& msg) : DomainError(msg) {}
};

struct NotFibrationPreservingError : DomainError {
    explicit NotFibrationPreservingError(const std::string& msg) : DomainError(msg) {}
};

struct NoEscapeError : DomainError {
    explicit NoEscapeError(const std::string& msg) : DomainError(msg) {}
};

struct NotPansuDifferentiableError : DomainError {
    explicit NotPansuDifferentiableError(const std::string& msg) : DomainError(msg) {}
};

/// The symbolic limit exists but is not a graded homomorphism; per the module
/// contract this signals an internal inconsistency rather than a math outcome.
struct InternalConsistencyError : DomainError {
    explicit InternalConsistencyError(const std::string& msg) : DomainError(msg) {}
};

struct HypothesisError : DomainError {
    explicit HypothesisError(const std::string& msg) : DomainError(msg) {}
};

struct InsufficientSamplesError : DomainError {
    explicit InsufficientSamplesError(const std::string& msg) : DomainError(msg) {}
};

} // namespace flagrig
