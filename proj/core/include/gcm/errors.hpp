#pragma once

#include <stdexcept>

namespace gcm {

/// Evaluation of a fractional-linear map at (or too close to) its pole.
struct PoleAtPoint : std::domain_error {
    using std::domain_error::domain_error;
};

/// A map/site parameter outside its admissible range.
struct ParamOutOfRange : std::domain_error {
    using std::domain_error::domain_error;
};

/// Feedback argument (field + noise) left the state interval.
struct FieldOutOfDomain : std::domain_error {
    using std::domain_error::domain_error;
};

/// Mismatched grid resolutions.
struct ShapeMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Bisection bracket for the self-consistency equation failed.
struct NoRootInRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Power iteration failed to settle.
struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or unknown experiment configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace gcm
