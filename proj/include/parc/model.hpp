#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "parc/errors.hpp"

namespace parc {

using cplx = std::complex<double>;

/// Normalized parameters of the two-mode parametric oscillator.
///
/// delta1 is the detuning of the drive from mode 1, kappa the detuning from
/// the 2:1 frequency matching condition, gamma21 the damping ratio of mode 2
/// to mode 1. The mode-2 detuning is derived, never stored:
/// delta2 = delta1/2 + kappa.
struct ModelParams {
    double delta1 = 0.0;
    double kappa = 0.0;
    double gamma21 = 1.0;

    double delta2() const noexcept { return 0.5 * delta1 + kappa; }

    void validate() const {
        if (!(gamma21 > 0.0)) throw InvalidStateError("ModelParams: gamma21 must be > 0");
        if (!std::isfinite(delta1) || !std::isfinite(kappa) || !std::isfinite(gamma21))
            throw InvalidStateError("ModelParams: non-finite parameter");
    }
};

/// Complex modal amplitudes at normalized time tau = gamma_1 * t.
struct EnvelopeState {
    cplx psi1{0.0, 0.0};
    cplx psi2{0.0, 0.0};
    double tau = 0.0;

    bool finite() const noexcept {
        return std::isfinite(psi1.real()) && std::isfinite(psi1.imag()) &&
               std::isfinite(psi2.real()) && std::isfinite(psi2.imag()) &&
               std::isfinite(tau);
    }
};

struct Derivatives {
    cplx dpsi1;
    cplx dpsi2;
};

/// Right-hand side of the coupled envelope equations:
///   dpsi1/dtau = -i f - (1 + i delta1) psi1 + i psi2^2
///   dpsi2/dtau = -(gamma21 + i delta2) psi2 + 2 i psi1 conj(psi2)
Derivatives rhs(const EnvelopeState& state, const ModelParams& params, double f);

/// Closed-form fixed point of the trivial branch (psi2 = 0):
/// psi1 = -i f / (1 + i delta1).
EnvelopeState subthreshold_fixed_point(const ModelParams& params, double f);

struct IntegratorConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double initial_step = 1e-3;
    double max_step = std::numeric_limits<double>::infinity();
    double blow_up_bound = 1e6;
    /// When > 0, adaptivity is disabled and steps of exactly this size are
    /// taken (final step truncated to hit the interval end).
    double fixed_step = 0.0;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw InvalidStateError("IntegratorConfig: tolerances must be > 0");
        if (!(initial_step > 0.0) || initial_step > max_step)
            throw InvalidStateError("IntegratorConfig: need 0 < initial_step <= max_step");
        if (!(blow_up_bound > 0.0))
            throw InvalidStateError("IntegratorConfig: blow_up_bound must be > 0");
        if (fixed_step < 0.0)
            throw InvalidStateError("IntegratorConfig: fixed_step must be >= 0");
    }
};

struct Trajectory {
    std::vector<EnvelopeState> samples;
};

}  // namespace parc
