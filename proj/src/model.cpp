#include "parc/model.hpp"

namespace parc {

Derivatives rhs(const EnvelopeState& state, const ModelParams& params, double f) {
    if (!state.finite() || !std::isfinite(f))
        throw InvalidStateError("rhs: non-finite state or drive");
    params.validate();

    const cplx i{0.0, 1.0};
    const cplx d1 = -i * f - (1.0 + i * params.delta1) * state.psi1 + i * state.psi2 * state.psi2;
    const cplx d2 = -(params.gamma21 + i * params.delta2()) * state.psi2 +
                    2.0 * i * state.psi1 * std::conj(state.psi2);
    return {d1, d2};
}

EnvelopeState subthreshold_fixed_point(const ModelParams& params, double f) {
    if (!std::isfinite(f)) throw InvalidStateError("subthreshold_fixed_point: non-finite drive");
    params.validate();

    const cplx i{0.0, 1.0};
    EnvelopeState s;
    s.psi1 = -i * f / (1.0 + i * params.delta1);
    s.psi2 = {0.0, 0.0};
    s.tau = 0.0;
    return s;
}

}  // namespace parc
