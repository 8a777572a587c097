#include "parc/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace parc {

std::string to_string(ChaoticSystem system) {
    switch (system) {
        case ChaoticSystem::MackeyGlass: return "mackey_glass";
        case ChaoticSystem::Rossler: return "rossler";
        case ChaoticSystem::Lorenz: return "lorenz";
    }
    return "?";
}

ChaoticSystem chaotic_system_from_string(const std::string& name) {
    if (name == "mackey_glass" || name == "mackey-glass" || name == "mg")
        return ChaoticSystem::MackeyGlass;
    if (name == "rossler") return ChaoticSystem::Rossler;
    if (name == "lorenz") return ChaoticSystem::Lorenz;
    throw ConfigError("unknown chaotic system: " + name);
}

SeriesSpec SeriesSpec::defaults(ChaoticSystem system) {
    SeriesSpec spec;
    spec.system = system;
    switch (system) {
        case ChaoticSystem::MackeyGlass: spec.sample_interval = 1.0; break;
        case ChaoticSystem::Rossler: spec.sample_interval = 0.25; break;
        case ChaoticSystem::Lorenz: spec.sample_interval = 0.05; break;
    }
    return spec;
}

void SeriesSpec::validate() const {
    if (!(sample_interval > 0.0)) throw ConfigError("SeriesSpec: sample_interval must be > 0");
    if (substeps < 1) throw ConfigError("SeriesSpec: substeps must be >= 1");
    if (n_points > 0 && n_points <= transient_discard)
        throw ConfigError("SeriesSpec: n_points must exceed transient_discard");
}

namespace {

using Vec3 = std::array<double, 3>;

Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

template <typename Rhs>
std::vector<double> rk4_sampled(const SeriesSpec& spec, Vec3 v, Rhs f) {
    // Generates transient_discard + n_points samples and keeps the tail.
    if (spec.n_points == 0) return {};
    spec.validate();

    const double h = spec.sample_interval / spec.substeps;
    const std::size_t total = spec.n_points + spec.transient_discard;
    std::vector<double> out;
    out.reserve(spec.n_points);
    for (std::size_t s = 0; s < total; ++s) {
        for (int k = 0; k < spec.substeps; ++k) {
            const Vec3 k1 = f(v);
            const Vec3 k2 = f(v + 0.5 * h * k1);
            const Vec3 k3 = f(v + 0.5 * h * k2);
            const Vec3 k4 = f(v + h * k3);
            v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        if (!std::isfinite(v[0]) || !std::isfinite(v[1]) || !std::isfinite(v[2]))
            throw DivergenceError("benchmark series diverged at sample " + std::to_string(s));
        if (s >= spec.transient_discard) out.push_back(v[0]);
    }
    return out;
}

}  // namespace

std::vector<double> gen_lorenz(const SeriesSpec& spec) {
    const auto& p = spec.lorenz;
    return rk4_sampled(spec, p.init, [&p](const Vec3& v) -> Vec3 {
        return {p.sigma * (v[1] - v[0]), v[0] * (p.rho - v[2]) - v[1], v[0] * v[1] - p.beta * v[2]};
    });
}

std::vector<double> gen_rossler(const SeriesSpec& spec) {
    const auto& p = spec.rossler;
    return rk4_sampled(spec, p.init, [&p](const Vec3& v) -> Vec3 {
        return {-v[1] - v[2], v[0] + p.a * v[1], p.b + v[2] * (v[0] - p.c)};
    });
}

std::vector<double> gen_mackey_glass(const SeriesSpec& spec) {
    if (spec.n_points == 0) return {};
    spec.validate();
    const auto& p = spec.mackey_glass;

    const auto nonlinearity = [&p](double xd) {
        return p.beta * xd / (1.0 + std::pow(xd, p.exponent));
    };

    if (p.tau_delay == 0.0) {
        // Delay-free limit: plain scalar ODE.
        const auto& q = p;
        const double h = spec.sample_interval / spec.substeps;
        const std::size_t total = spec.n_points + spec.transient_discard;
        double x = q.history;
        std::vector<double> out;
        out.reserve(spec.n_points);
        auto f = [&](double xv) { return nonlinearity(xv) - q.gamma * xv; };
        for (std::size_t s = 0; s < total; ++s) {
            for (int k = 0; k < spec.substeps; ++k) {
                const double k1 = f(x);
                const double k2 = f(x + 0.5 * h * k1);
                const double k3 = f(x + 0.5 * h * k2);
                const double k4 = f(x + h * k3);
                x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            if (!std::isfinite(x))
                throw DivergenceError("mackey-glass diverged at sample " + std::to_string(s));
            if (s >= spec.transient_discard) out.push_back(x);
        }
        return out;
    }

    // Snap the internal step so it divides the delay exactly; the step target
    // is sample_interval / substeps. Samples must land on the step grid.
    const double h_target = spec.sample_interval / spec.substeps;
    const auto delay_steps =
        static_cast<std::size_t>(std::max<long long>(1, std::llround(p.tau_delay / h_target)));
    const double h = p.tau_delay / static_cast<double>(delay_steps);
    const double steps_per_sample_real = spec.sample_interval / h;
    const auto steps_per_sample = static_cast<std::size_t>(std::llround(steps_per_sample_real));
    if (steps_per_sample < 1 ||
        std::abs(steps_per_sample_real - static_cast<double>(steps_per_sample)) >
            1e-9 * steps_per_sample_real)
        throw ConfigError(
            "gen_mackey_glass: internal step cannot divide both the delay and the "
            "sample interval; adjust substeps or sample_interval");

    const std::size_t total_steps = (spec.n_points + spec.transient_discard) * steps_per_sample;
    const std::size_t m = delay_steps;
    std::vector<double> buf(total_steps + m + 1);
    for (std::size_t i = 0; i <= m; ++i) buf[i] = p.history;

    auto f = [&](double x, double xd) { return nonlinearity(xd) - p.gamma * x; };
    for (std::size_t i = m; i < total_steps + m; ++i) {
        const double x = buf[i];
        const double xd0 = buf[i - m];
        const double xd1 = buf[i - m + 1];
        const double xdh = 0.5 * (xd0 + xd1);  // linear interpolation at t + h/2
        const double k1 = f(x, xd0);
        const double k2 = f(x + 0.5 * h * k1, xdh);
        const double k3 = f(x + 0.5 * h * k2, xdh);
        const double k4 = f(x + h * k3, xd1);
        buf[i + 1] = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!std::isfinite(buf[i + 1]))
            throw DivergenceError("mackey-glass diverged at step " + std::to_string(i - m));
    }

    std::vector<double> out;
    out.reserve(spec.n_points);
    for (std::size_t s = spec.transient_discard; s < spec.n_points + spec.transient_discard; ++s)
        out.push_back(buf[m + (s + 1) * steps_per_sample]);
    return out;
}

std::vector<double> gen_series(const SeriesSpec& spec) {
    switch (spec.system) {
        case ChaoticSystem::MackeyGlass: return gen_mackey_glass(spec);
        case ChaoticSystem::Rossler: return gen_rossler(spec);
        case ChaoticSystem::Lorenz: return gen_lorenz(spec);
    }
    throw ConfigError("gen_series: unknown system");
}

NormalizedSeries normalize_unit(std::span<const double> raw) {
    if (raw.size() < 2) throw InsufficientDataError("normalize_unit: need at least 2 values");
    const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    if (!(*lo < *hi)) throw DegenerateError("normalize_unit: constant series has no range");
    NormalizedSeries out;
    out.raw_min = *lo;
    out.raw_max = *hi;
    out.values.resize(raw.size());
    const double span = *hi - *lo;
    for (std::size_t i = 0; i < raw.size(); ++i) out.values[i] = (raw[i] - *lo) / span;
    return out;
}

}  // namespace parc
