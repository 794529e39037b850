#pragma once

#include <stdexcept>
#include <string>

namespace zerogap {

// One exception type per failure category so the CLI can map them to exit codes.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct PoleError : DomainError {
    using DomainError::DomainError;
};

struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CacheError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VerificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BranchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace zerogap
