#pragma once

#include <stdexcept>
#include <string>

namespace m3s {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Level-set gradient is too close to null to normalize.
struct NullGradient : Error {
    using Error::Error;
};

// Rejection sampler gave up (too many consecutive rejected draws).
struct SamplingExhausted : Error {
    using Error::Error;
};

// Could not complete a pseudo-orthonormal frame from the available draws.
struct FrameConstructionFailure : Error {
    using Error::Error;
};

// Sectional curvature denominator g(X,X)g(Y,Y) - g(X,Y)^2 is numerically zero.
struct DegeneratePlane : Error {
    using Error::Error;
};

// A finite-difference stencil point left the domain of the curve.
struct ChartError : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

// Bad suite configuration (CLI maps this to exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

} // namespace m3s
