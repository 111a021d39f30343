#ifndef ELLSPIN_ERRORS_HPP
#define ELLSPIN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ellspin {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation requested within the guard distance of a lattice point.
struct PoleProximity : Error {
    explicit PoleProximity(const std::string& msg) : Error(msg) {}
};

// A sigma factor in a denominator is below the guard.
struct DivisionNearZero : Error {
    explicit DivisionNearZero(const std::string& msg) : Error(msg) {}
};

// Exchange function evaluated at j == 0 (mod N).
struct InvalidSite : Error {
    explicit InvalidSite(const std::string& msg) : Error(msg) {}
};

// Magnon count out of range for the requested operation.
struct InvalidM : Error {
    explicit InvalidM(const std::string& msg) : Error(msg) {}
};

// Exhaustive enumeration would exceed the configured cap.
struct TooLarge : Error {
    explicit TooLarge(const std::string& msg) : Error(msg) {}
};

// Matrix dimension exceeds the diagonalization cap.
struct DimensionCap : Error {
    explicit DimensionCap(const std::string& msg) : Error(msg) {}
};

// A vector that must be nonzero is numerically zero.
struct ZeroVector : Error {
    explicit ZeroVector(const std::string& msg) : Error(msg) {}
};

// An energy that must be real came out with a large imaginary part.
struct NonRealEnergy : Error {
    explicit NonRealEnergy(const std::string& msg) : Error(msg) {}
};

// Phase unwinding along a shift path jumped by more than the safe bound.
struct BranchAmbiguity : Error {
    explicit BranchAmbiguity(const std::string& msg) : Error(msg) {}
};

// Newton iteration failed to converge.
struct NoConvergence : Error {
    explicit NoConvergence(const std::string& msg) : Error(msg) {}
};

// Two auxiliary parameters that must stay separated have collided.
struct DegenerateT : Error {
    explicit DegenerateT(const std::string& msg) : Error(msg) {}
};

// Command-line / run configuration rejected before any computation.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace ellspin

#endif
