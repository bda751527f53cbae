#pragma once

#include <stdexcept>
#include <string>

namespace fatdist {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two operands live in different ambient spaces or have inconsistent shapes.
struct DimensionMismatchError : Error {
    using Error::Error;
};

/// A matrix claimed to be a (skew, symmetric, ...) form fails the shape test.
struct InvalidFormError : Error {
    using Error::Error;
};

/// An eigensolver or factorization failed, or conditioning is hopeless.
struct NumericFailureError : Error {
    using Error::Error;
};

/// Caller violated a documented precondition.
struct PreconditionError : Error {
    using Error::Error;
};

/// Two independent computations of the same quantity disagree beyond
/// tolerance. Indicates tolerance miscalibration; always a hard failure.
struct InternalInconsistencyError : Error {
    using Error::Error;
};

/// A randomized picker has no admissible directions left.
struct NoRoomError : Error {
    using Error::Error;
};

/// A greedy builder exhausted its retry budget.
struct ConstructionFailureError : Error {
    using Error::Error;
};

/// A subspace or first-jet image required to be Omega-regular is not.
struct NotRegularError : Error {
    using Error::Error;
};

/// Problem too large for a dense oracle.
struct SizeError : Error {
    using Error::Error;
};

/// Input file or JSON payload violates the schema.
struct SchemaError : Error {
    using Error::Error;
};

/// Discrete exactness precondition of the lifting routine failed.
struct ExactnessError : Error {
    std::size_t worst_edge;
    double residual;
    ExactnessError(const std::string& msg, std::size_t edge, double res)
        : Error(msg), worst_edge(edge), residual(res) {}
};

}  // namespace fatdist
