#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nds {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameter bundle contains a non-finite field or violates a structural
// invariant (tau < 1, non-binary train, mismatched lengths, ...).
struct InvalidParams : Error {
    using Error::Error;
};

// Operation called with an out-of-contract argument (n = 0, runs = 0, ...).
struct InvalidArgument : Error {
    using Error::Error;
};

// Fixed-point formulas divide by a (and need b, c, d nonzero for the map).
struct DegenerateParams : Error {
    using Error::Error;
};

// Quadratic for the fixed points has no real roots.
struct ComplexRoots : Error {
    using Error::Error;
};

// ts_bound requires a strictly positive |lambda|.
struct NonPositive : Error {
    using Error::Error;
};

struct TraceTooShort : Error {
    using Error::Error;
};

struct UnknownParameter : Error {
    using Error::Error;
};

// Eigenvalues sit on a stability boundary; classification is not guessed.
struct Unclassifiable : Error {
    using Error::Error;
};

}  // namespace nds
