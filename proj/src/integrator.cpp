#include "parc/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace parc {

namespace {

// Dormand-Prince 5(4) tableau (Hairer, Norsett & Wanner, Solving ODEs I).
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;

// Embedded 4th-order error coefficients.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// Dense-output coefficients.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

// Step-size controller constants.
constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;   // max shrink factor per step
constexpr double kFacMax = 10.0;  // max growth factor per step
constexpr double kBeta = 0.04;    // PI stabilization
constexpr double kMinStep = 1e-14;

struct Y {
    cplx p1, p2;
};

inline Y operator+(Y a, Y b) { return {a.p1 + b.p1, a.p2 + b.p2}; }
inline Y operator-(Y a, Y b) { return {a.p1 - b.p1, a.p2 - b.p2}; }
inline Y operator*(double s, Y a) { return {s * a.p1, s * a.p2}; }

inline Y eval_rhs(const Y& y, double delta1, double delta2, double gamma21, double f) {
    const cplx i{0.0, 1.0};
    return {-i * f - (1.0 + i * delta1) * y.p1 + i * y.p2 * y.p2,
            -(gamma21 + i * delta2) * y.p2 + 2.0 * i * y.p1 * std::conj(y.p2)};
}

// Quartic dense-output polynomial over one accepted step.
struct DenseSegment {
    Y r1, r2, r3, r4, r5;
    double t0, h;

    Y eval(double t) const {
        const double theta = (t - t0) / h;
        const double theta1 = 1.0 - theta;
        return r1 + theta * (r2 + theta1 * (r3 + theta * (r4 + theta1 * r5)));
    }
};

inline double err_norm(const Y& e, const Y& y0, const Y& y1, double atol, double rtol) {
    auto comp = [&](double ev, double v0, double v1) {
        const double sc = atol + rtol * std::max(std::abs(v0), std::abs(v1));
        const double q = ev / sc;
        return q * q;
    };
    const double s = comp(e.p1.real(), y0.p1.real(), y1.p1.real()) +
                     comp(e.p1.imag(), y0.p1.imag(), y1.p1.imag()) +
                     comp(e.p2.real(), y0.p2.real(), y1.p2.real()) +
                     comp(e.p2.imag(), y0.p2.imag(), y1.p2.imag());
    return std::sqrt(s / 4.0);
}

inline bool amplitude_ok(const Y& y, double bound) {
    return std::isfinite(y.p1.real()) && std::isfinite(y.p1.imag()) &&
           std::isfinite(y.p2.real()) && std::isfinite(y.p2.imag()) &&
           std::abs(y.p1) <= bound && std::abs(y.p2) <= bound;
}

}  // namespace

void Dopri5::advance(EnvelopeState& state, const ModelParams& params, double f, double duration,
                     std::span<const double> sample_offsets, std::span<EnvelopeState> out) const {
    params.validate();
    if (!state.finite() || !std::isfinite(f))
        throw InvalidStateError("Dopri5::advance: non-finite state or drive");
    if (!(duration > 0.0)) throw InvalidStateError("Dopri5::advance: duration must be > 0");
    if (out.size() < sample_offsets.size())
        throw InvalidStateError("Dopri5::advance: output span too small");

    const double delta1 = params.delta1;
    const double delta2 = params.delta2();
    const double gamma21 = params.gamma21;
    const double tau0 = state.tau;

    Y y{state.psi1, state.psi2};
    Y k1 = eval_rhs(y, delta1, delta2, gamma21, f);

    const bool fixed = cfg_.fixed_step > 0.0;
    double t = 0.0;
    double h = fixed ? std::min(cfg_.fixed_step, duration)
                     : std::min({cfg_.initial_step, cfg_.max_step, duration});
    double facold = 1e-4;
    std::size_t next_sample = 0;

    while (t < duration) {
        bool last = false;
        if (h >= duration - t) {
            h = duration - t;
            last = true;
        }
        if (!fixed && h < kMinStep)
            throw StepUnderflowError("Dopri5: step size underflow at tau=" +
                                     std::to_string(tau0 + t));

        const Y k2 = eval_rhs(y + h * (a21 * k1), delta1, delta2, gamma21, f);
        const Y k3 = eval_rhs(y + h * (a31 * k1 + a32 * k2), delta1, delta2, gamma21, f);
        const Y k4 = eval_rhs(y + h * (a41 * k1 + a42 * k2 + a43 * k3), delta1, delta2, gamma21, f);
        const Y k5 = eval_rhs(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), delta1, delta2,
                              gamma21, f);
        const Y k6 = eval_rhs(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5),
                              delta1, delta2, gamma21, f);
        const Y ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        const Y k7 = eval_rhs(ynew, delta1, delta2, gamma21, f);

        double hnext;
        if (!fixed) {
            const Y ev = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            const double err = err_norm(ev, y, ynew, cfg_.abs_tol, cfg_.rel_tol);
            const double expo = 0.2 - kBeta * 0.75;
            const double fac11 = std::pow(std::max(err, 1e-32), expo);

            if (err > 1.0) {
                h /= std::min(1.0 / kFacMin, fac11 / kSafety);
                continue;
            }
            double fac = fac11 / std::pow(facold, kBeta);
            fac = std::max(1.0 / kFacMax, std::min(1.0 / kFacMin, fac / kSafety));
            facold = std::max(err, 1e-4);
            hnext = std::min(h / fac, cfg_.max_step);
        } else {
            hnext = cfg_.fixed_step;
        }

        const double tnew = last ? duration : t + h;
        if (!amplitude_ok(ynew, cfg_.blow_up_bound))
            throw DivergenceError(
                "Dopri5: amplitude exceeded blow-up bound at tau=" + std::to_string(tau0 + tnew),
                tau0 + tnew);

        if (next_sample < sample_offsets.size() && sample_offsets[next_sample] <= tnew) {
            DenseSegment seg;
            seg.t0 = t;
            seg.h = h;
            seg.r1 = y;
            const Y ydiff = ynew - y;
            seg.r2 = ydiff;
            seg.r3 = h * k1 - ydiff;
            seg.r4 = ydiff - h * k7 - seg.r3;
            seg.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
            while (next_sample < sample_offsets.size() && sample_offsets[next_sample] <= tnew) {
                const double ts = sample_offsets[next_sample];
                const Y ys = (ts == tnew) ? ynew : seg.eval(ts);
                out[next_sample] = EnvelopeState{ys.p1, ys.p2, tau0 + ts};
                ++next_sample;
            }
        }

        y = ynew;
        k1 = k7;  // FSAL
        t = tnew;
        h = hnext;
    }

    // Offsets at the interval end that survived rounding comparisons.
    while (next_sample < sample_offsets.size()) {
        out[next_sample] = EnvelopeState{y.p1, y.p2, tau0 + sample_offsets[next_sample]};
        ++next_sample;
    }

    state.psi1 = y.p1;
    state.psi2 = y.p2;
    state.tau = tau0 + duration;
}

Trajectory integrate(const EnvelopeState& initial, const ModelParams& params,
                     std::span<const DriveSegment> drive, int n_samples,
                     const IntegratorConfig& cfg) {
    if (n_samples < 1) throw InvalidStateError("integrate: n_samples must be >= 1");
    double total = 0.0;
    for (const auto& seg : drive) {
        if (!(seg.duration > 0.0) || !std::isfinite(seg.amplitude))
            throw InvalidStateError("integrate: invalid drive segment");
        total += seg.duration;
    }
    if (!(total > 0.0)) throw InvalidStateError("integrate: empty drive");

    std::vector<double> times(static_cast<std::size_t>(n_samples));
    if (n_samples == 1) {
        times[0] = total;
    } else {
        for (int i = 0; i < n_samples; ++i)
            times[static_cast<std::size_t>(i)] = total * static_cast<double>(i) / (n_samples - 1);
        times.back() = total;
    }

    Trajectory traj;
    traj.samples.resize(times.size());
    std::size_t idx = 0;
    if (times[0] == 0.0) {
        traj.samples[0] = initial;
        idx = 1;
    }

    Dopri5 stepper(cfg);
    EnvelopeState state = initial;
    double seg_start = 0.0;
    for (std::size_t s = 0; s < drive.size(); ++s) {
        const auto& seg = drive[s];
        const double seg_end = seg_start + seg.duration;
        const bool last_seg = (s + 1 == drive.size());
        const std::size_t first = idx;
        std::vector<double> local;
        while (idx < times.size() && (times[idx] <= seg_end || last_seg)) {
            local.push_back(std::clamp(times[idx] - seg_start, 0.0, seg.duration));
            ++idx;
        }
        stepper.advance(state, params, seg.amplitude, seg.duration, local,
                        std::span<EnvelopeState>(traj.samples.data() + first, local.size()));
        for (std::size_t k = 0; k < local.size(); ++k)
            traj.samples[first + k].tau = initial.tau + times[first + k];
        seg_start = seg_end;
    }
    return traj;
}

Trajectory integrate_const(const EnvelopeState& initial, const ModelParams& params, double f,
                           double duration, int n_samples, const IntegratorConfig& cfg) {
    const DriveSegment seg{duration, f};
    return integrate(initial, params, std::span<const DriveSegment>(&seg, 1), n_samples, cfg);
}

}  // namespace parc
