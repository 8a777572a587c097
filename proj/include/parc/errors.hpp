#pragma once

#include <stdexcept>
#include <string>

namespace parc {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A state or input value was non-finite where a finite one is required.
struct InvalidStateError : Error {
    using Error::Error;
};

/// Trajectory amplitude exceeded the configured blow-up bound.
struct DivergenceError : Error {
    explicit DivergenceError(const std::string& msg, double tau_at = 0.0)
        : Error(msg), tau(tau_at) {}
    double tau;
};

/// Adaptive step shrank below the hard floor without meeting tolerance.
struct StepUnderflowError : Error {
    using Error::Error;
};

/// Integrator blow-up while running the reservoir, tagged with the symbol
/// index that was being processed. Warm-up symbols carry negative indices
/// (-warmup .. -1); data symbols count from 0.
struct ReservoirDivergenceError : Error {
    ReservoirDivergenceError(const std::string& msg, long sym)
        : Error(msg), symbol(sym) {}
    long symbol;
};

/// Not enough data to perform the requested operation.
struct InsufficientDataError : Error {
    using Error::Error;
};

/// A normalization or standardization step hit a zero range/variance.
struct DegenerateError : Error {
    using Error::Error;
};

/// Every feature column had zero variance on the training set.
struct DegenerateFeaturesError : DegenerateError {
    using DegenerateError::DegenerateError;
};

/// Malformed configuration file or invalid option combination.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace parc
