#pragma once

#include <stdexcept>
#include <string>

namespace damctl {

// Base for everything thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Transform argument at or beyond the divergence boundary, bad index, etc.
struct DomainError : Error {
    using Error::Error;
};

// Operation requested in the wrong traffic regime (e.g. a supercritical
// root for a subcritical model).
struct RegimeError : Error {
    using Error::Error;
};

// An iterative scheme failed to bracket or settle (root search, Cesaro
// doubling check, finite-L proxy check).
struct ConvergenceError : Error {
    using Error::Error;
};

// The sought root does not exist inside the admissible bracket.
struct ExistenceError : Error {
    using Error::Error;
};

// Level index outside [1, L].
struct IndexError : Error {
    using Error::Error;
};

// Busy-period counts exceeded the floating range with log-scaling disabled.
struct OverflowError : Error {
    using Error::Error;
};

// Invalid run/simulation configuration.
struct ConfigError : Error {
    using Error::Error;
};

// No sign change on the scanned interval of a threshold search.
struct BracketError : Error {
    using Error::Error;
};

// Both regime functionals report interior minima of equal value.
struct AmbiguityError : Error {
    using Error::Error;
};

// File output failed; message carries the path.
struct IoError : Error {
    using Error::Error;
};

} // namespace damctl
