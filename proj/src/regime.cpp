#include "parc/regime.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "parc/fft.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace parc {

std::string to_string(RegimeLabel label) {
    switch (label) {
        case RegimeLabel::SubThreshold: return "ST";
        case RegimeLabel::Bistable: return "BST";
        case RegimeLabel::ParametricResonance: return "PR";
        case RegimeLabel::FrequencyComb: return "FC";
    }
    return "?";
}

std::string to_string(const Regime& regime) {
    std::string s = to_string(regime.label);
    if (regime.comb_character)
        s += (*regime.comb_character == CombCharacter::Coherent) ? ":coherent" : ":chaotic";
    return s;
}

Regime regime_from_string(const std::string& text) {
    Regime r;
    std::string head = text;
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        head = text.substr(0, colon);
        const std::string tail = text.substr(colon + 1);
        if (tail == "coherent") r.comb_character = CombCharacter::Coherent;
        else if (tail == "chaotic") r.comb_character = CombCharacter::Chaotic;
        else throw ConfigError("unknown comb character: " + tail);
    }
    if (head == "ST") r.label = RegimeLabel::SubThreshold;
    else if (head == "BST") r.label = RegimeLabel::Bistable;
    else if (head == "PR") r.label = RegimeLabel::ParametricResonance;
    else if (head == "FC") r.label = RegimeLabel::FrequencyComb;
    else throw ConfigError("unknown regime label: " + head);
    if (r.comb_character && r.label != RegimeLabel::FrequencyComb)
        throw ConfigError("comb character on non-comb label: " + text);
    return r;
}

double delta2(double delta1, double kappa) {
    if (!std::isfinite(delta1) || !std::isfinite(kappa))
        throw InvalidStateError("delta2: non-finite input");
    return 0.5 * delta1 + kappa;
}

double arnold_threshold(const ModelParams& params) {
    params.validate();
    return 0.5 * std::abs(params.gamma21 * params.delta1 + params.delta2());
}

double upper_boundary(const ModelParams& params) {
    params.validate();
    const double d1 = params.delta1;
    const double d2 = params.delta2();
    const double g = params.gamma21;
    return 0.5 * std::sqrt((1.0 + d1 * d1) * (g * g + d2 * d2));
}

bool comb_condition(const ModelParams& params) {
    params.validate();
    const double d1 = params.delta1;
    const double d2 = params.delta2();
    return 2.0 * d1 * d2 <= -(1.0 + d1 * d1 + 2.0 * params.gamma21);
}

Regime classify_regime(const ModelParams& params, double f) {
    if (!(f >= 0.0)) throw InvalidStateError("classify_regime: f must be >= 0");
    const double fa = arnold_threshold(params);
    const double fu = upper_boundary(params);
    Regime r;
    if (f < fa) {
        r.label = RegimeLabel::SubThreshold;
    } else if (f <= fu) {
        r.label = RegimeLabel::Bistable;
    } else {
        r.label = comb_condition(params) ? RegimeLabel::FrequencyComb
                                         : RegimeLabel::ParametricResonance;
    }
    return r;
}

CombCharacter classify_comb_dynamics(const Trajectory& traj, const CombDynamicsConfig& cfg) {
    const std::size_t n = traj.samples.size();
    if (n < 4096)
        throw InsufficientDataError("classify_comb_dynamics: need >= 4096 samples, got " +
                                    std::to_string(n));

    // Hann-windowed power spectrum of the mean-removed psi2 samples. The
    // window keeps an incommensurate line from leaking into the chaotic
    // verdict; peak energy is absorbed over +-peak_half_width bins.
    std::vector<cplx> x(n);
    cplx mean{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) mean += traj.samples[k].psi2;
    mean /= static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w =
            0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                                  static_cast<double>(n - 1)));
        x[k] = (traj.samples[k].psi2 - mean) * w;
    }
    const std::vector<cplx> bins = dft(x);
    std::vector<double> power(n);
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        power[k] = std::norm(bins[k]);
        total += power[k];
    }
    if (total <= 0.0) return CombCharacter::Coherent;  // constant envelope: a single DC line

    double absorbed = 0.0;
    const int hw = std::max(0, cfg.peak_half_width);
    for (int peak = 0; peak < cfg.top_k; ++peak) {
        const auto it = std::max_element(power.begin(), power.end());
        const auto idx = static_cast<long>(std::distance(power.begin(), it));
        if (*it <= 0.0) break;
        for (long b = idx - hw; b <= idx + hw; ++b) {
            const std::size_t wrapped = static_cast<std::size_t>((b % static_cast<long>(n) +
                                                                  static_cast<long>(n)) %
                                                                 static_cast<long>(n));
            absorbed += power[wrapped];
            power[wrapped] = 0.0;
        }
    }
    return (absorbed / total >= cfg.line_fraction_threshold) ? CombCharacter::Coherent
                                                             : CombCharacter::Chaotic;
}

Trajectory steady_state_window(const ModelParams& params, double f, const IntegratorConfig& cfg,
                               double transient, double window, int n_samples) {
    EnvelopeState state;
    state.psi1 = {0.0, 0.0};
    state.psi2 = {1e-3, 0.0};
    Dopri5 stepper(cfg);
    stepper.advance(state, params, f, transient);

    std::vector<double> offsets(static_cast<std::size_t>(n_samples));
    for (int k = 1; k <= n_samples; ++k)
        offsets[static_cast<std::size_t>(k - 1)] = window * static_cast<double>(k) / n_samples;
    Trajectory traj;
    traj.samples.resize(offsets.size());
    stepper.advance(state, params, f, window, offsets, traj.samples);
    return traj;
}

Regime classify_regime_dynamics(const ModelParams& params, double f, const IntegratorConfig& cfg,
                                const CombDynamicsConfig& comb_cfg) {
    Regime r = classify_regime(params, f);
    if (r.label == RegimeLabel::FrequencyComb)
        r.comb_character = classify_comb_dynamics(steady_state_window(params, f, cfg), comb_cfg);
    return r;
}

std::string to_string(ParamAxis axis) {
    switch (axis) {
        case ParamAxis::FAvg: return "f_avg";
        case ParamAxis::Delta1: return "delta1";
        case ParamAxis::DeltaF: return "delta_f";
        case ParamAxis::Kappa: return "kappa";
        case ParamAxis::Gamma21: return "gamma21";
        case ParamAxis::DataRate: return "data_rate";
    }
    return "?";
}

ParamAxis param_axis_from_string(const std::string& name) {
    if (name == "f_avg") return ParamAxis::FAvg;
    if (name == "delta1") return ParamAxis::Delta1;
    if (name == "delta_f") return ParamAxis::DeltaF;
    if (name == "kappa") return ParamAxis::Kappa;
    if (name == "gamma21") return ParamAxis::Gamma21;
    if (name == "data_rate") return ParamAxis::DataRate;
    throw ConfigError("unknown sweep axis: " + name);
}

std::vector<double> AxisSpec::values() const {
    validate();
    std::vector<double> v(static_cast<std::size_t>(steps));
    if (steps == 1) {
        v[0] = min;
        return v;
    }
    for (int i = 0; i < steps; ++i)
        v[static_cast<std::size_t>(i)] = min + (max - min) * static_cast<double>(i) / (steps - 1);
    v.back() = max;
    return v;
}

void AxisSpec::validate() const {
    if (steps < 1) throw ConfigError("axis steps must be >= 1");
    if (!(min <= max)) throw ConfigError("axis min must be <= max");
    if (!std::isfinite(min) || !std::isfinite(max)) throw ConfigError("axis bounds must be finite");
}

namespace {

ModelParams apply_axis_model(ModelParams p, ParamAxis axis, double value) {
    switch (axis) {
        case ParamAxis::Delta1: p.delta1 = value; break;
        case ParamAxis::Kappa: p.kappa = value; break;
        case ParamAxis::Gamma21: p.gamma21 = value; break;
        default: break;
    }
    return p;
}

}  // namespace

RegimeGrid regime_grid(const AxisSpec& axis1, const AxisSpec& axis2, const ModelParams& base,
                       double f_base, int num_threads) {
    axis1.validate();
    axis2.validate();
    for (ParamAxis a : {axis1.param, axis2.param})
        if (a == ParamAxis::DeltaF || a == ParamAxis::DataRate)
            throw ConfigError("regime_grid: axis " + to_string(a) + " does not affect the regime");

    RegimeGrid grid;
    grid.axis1 = axis1;
    grid.axis2 = axis2;
    const auto v1 = axis1.values();
    const auto v2 = axis2.values();
    grid.cells.resize(v1.size() * v2.size());

    const long total = static_cast<long>(grid.cells.size());
#ifdef _OPENMP
    const int nt = num_threads > 0 ? num_threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
#endif
    for (long idx = 0; idx < total; ++idx) {
        const std::size_t i = static_cast<std::size_t>(idx) / v2.size();
        const std::size_t j = static_cast<std::size_t>(idx) % v2.size();
        ModelParams p = apply_axis_model(base, axis1.param, v1[i]);
        p = apply_axis_model(p, axis2.param, v2[j]);
        double f = f_base;
        if (axis1.param == ParamAxis::FAvg) f = v1[i];
        if (axis2.param == ParamAxis::FAvg) f = v2[j];
        grid.cells[static_cast<std::size_t>(idx)] = classify_regime(p, f);
    }
    return grid;
}

}  // namespace parc
