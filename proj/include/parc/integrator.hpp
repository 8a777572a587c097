#pragma once

#include <span>

#include "parc/model.hpp"

namespace parc {

/// One span of piecewise-constant drive.
struct DriveSegment {
    double duration;
    double amplitude;
};

/// Dormand-Prince 5(4) embedded Runge-Kutta integrator for the envelope
/// equations, with 4th-order dense output used to sample states at exact
/// caller-requested times independent of the accepted step sequence.
///
/// Instances are value objects; a single integration is sequential but many
/// may run concurrently with no shared state.
class Dopri5 {
  public:
    explicit Dopri5(IntegratorConfig cfg) : cfg_(cfg) { cfg_.validate(); }

    /// Advance `state` in place by `duration` under constant drive `f`.
    /// `sample_offsets` must be sorted ascending within (0, duration]; for
    /// each offset the dense-output state is written to `out`. An offset
    /// exactly at `duration` reproduces the final state bit-for-bit.
    ///
    /// Throws DivergenceError if an amplitude exceeds cfg.blow_up_bound and
    /// StepUnderflowError if the adaptive step falls below 1e-14.
    void advance(EnvelopeState& state, const ModelParams& params, double f, double duration,
                 std::span<const double> sample_offsets = {},
                 std::span<EnvelopeState> out = {}) const;

    const IntegratorConfig& config() const noexcept { return cfg_; }

  private:
    IntegratorConfig cfg_;
};

/// Integrate under a piecewise-constant drive and return `n_samples` states
/// equally spaced over the whole interval (endpoints included; n_samples == 1
/// samples the final state). The initial state's tau is used as the interval
/// start.
Trajectory integrate(const EnvelopeState& initial, const ModelParams& params,
                     std::span<const DriveSegment> drive, int n_samples,
                     const IntegratorConfig& cfg);

/// Convenience wrapper for a single constant-drive segment.
Trajectory integrate_const(const EnvelopeState& initial, const ModelParams& params, double f,
                           double duration, int n_samples, const IntegratorConfig& cfg);

}  // namespace parc
