#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace scalekit {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when an inverse square root (or similar spectral operation) meets an
// eigenvalue below the singularity threshold.
struct NearSingular : Error {
    using Error::Error;
};

struct DimensionTooLarge : Error {
    using Error::Error;
};

struct PreconditionViolated : Error {
    using Error::Error;
};

struct MarginalMismatch : Error {
    using Error::Error;
};

// A supplied witness (e.g. a slice decomposition) does not reconstruct the
// object it claims to describe.
struct BadWitness : Error {
    using Error::Error;
};

// A sampled potential-function witness evaluates to zero on the start object.
struct WitnessDegenerate : Error {
    using Error::Error;
};

struct IllConditioned : Error {
    using Error::Error;
};

struct NotGeneralPosition : Error {
    NotGeneralPosition(const std::string& msg, std::vector<int> degenerate)
        : Error(msg), subset(std::move(degenerate)) {}
    std::vector<int> subset;  // indices of a dependent n-subset
};

}  // namespace scalekit
