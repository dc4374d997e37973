#pragma once

#include <stdexcept>
#include <string>

namespace moyal {

/// Base for errors caused by the mathematical request itself (CLI exit code 2).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The requested floor is below what the operand truncations can certify.
struct FloorTooDeep : DomainError {
    using DomainError::DomainError;
};

/// A coefficient that is needed lies below the tracked floor.
struct FloorTooShallow : DomainError {
    using DomainError::DomainError;
};

struct InconsistentFlow : DomainError {
    using DomainError::DomainError;
};

struct InsufficientCoefficients : DomainError {
    using DomainError::DomainError;
};

struct NotIntegrable : DomainError {
    using DomainError::DomainError;
};

struct InconsistentExpansion : DomainError {
    using DomainError::DomainError;
};

/// Violated precondition on an argument (e.g. a flow index that is a multiple of the Lax order).
struct InvalidRequest : DomainError {
    using DomainError::DomainError;
};

/// Division by kappa failed in a bracket. Commutator parity rules this out, so
/// reaching it means the product itself is wrong.
struct InexactKappaDivision : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace moyal
