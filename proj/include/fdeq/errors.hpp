#pragma once

#include <stdexcept>
#include <string>

namespace fdeq {

// Base class for every failure raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A tolerance could not be met within the allowed work budget.
struct NonConvergence : Error {
    using Error::Error;
};

// An argument violated a documented precondition.
struct DomainError : Error {
    using Error::Error;
};

struct InvalidDimension : DomainError {
    using DomainError::DomainError;
};

struct InvalidDecayHint : DomainError {
    using DomainError::DomainError;
};

struct DimensionMismatch : DomainError {
    using DomainError::DomainError;
};

// Geometric bracket expansion gave up: the target lies outside the range of g.
struct BracketFailure : Error {
    using Error::Error;
};

struct ZeroMass : Error {
    using Error::Error;
};

struct InvalidMass : DomainError {
    using DomainError::DomainError;
};

struct DegenerateProfile : Error {
    using Error::Error;
};

struct DegeneratePair : DomainError {
    using DomainError::DomainError;
};

// Moments below the admissible lower bound: no density with 0 <= f <= 1 has them.
struct InfeasibleMoments : Error {
    using Error::Error;
};

} // namespace fdeq
