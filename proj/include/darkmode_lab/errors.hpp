#pragma once

#include <stdexcept>
#include <string>

namespace dmlab {

// All library failures derive from Error so callers can catch one type.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidSpec : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct EigensolverFailure : Error { using Error::Error; };
struct PreconditionViolated : Error { using Error::Error; };
struct ZeroCouplingInGroup : Error { using Error::Error; };
struct UnstableSystem : Error { using Error::Error; };
struct SingularKroneckerSystem : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };

struct NoConvergence : Error {
    double last_residual;
    NoConvergence(const std::string& what, double residual)
        : Error(what), last_residual(residual) {}
};

}  // namespace dmlab
