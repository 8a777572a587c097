#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "parc/errors.hpp"

namespace parc {

enum class ChaoticSystem { MackeyGlass, Rossler, Lorenz };

std::string to_string(ChaoticSystem system);
ChaoticSystem chaotic_system_from_string(const std::string& name);

struct LorenzParams {
    double sigma = 10.0, rho = 28.0, beta = 8.0 / 3.0;
    std::array<double, 3> init{1.0, 1.0, 1.0};
};

struct RosslerParams {
    double a = 0.2, b = 0.2, c = 5.7;
    std::array<double, 3> init{0.1, 0.0, 0.0};
};

struct MackeyGlassParams {
    double beta = 0.2, gamma = 0.1, exponent = 10.0;
    double tau_delay = 17.0;
    double history = 1.2;  // constant pre-history value
};

struct SeriesSpec {
    ChaoticSystem system = ChaoticSystem::MackeyGlass;
    std::size_t n_points = 2000;
    double sample_interval = 1.0;  // system time units between returned samples
    std::size_t transient_discard = 1000;
    int substeps = 10;  // internal RK4 steps per sample (step <= sample_interval/10)
    LorenzParams lorenz;
    RosslerParams rossler;
    MackeyGlassParams mackey_glass;

    static SeriesSpec defaults(ChaoticSystem system);
    void validate() const;
};

/// x-component of the Lorenz flow, fixed-step RK4, sampled after the
/// transient is discarded.
std::vector<double> gen_lorenz(const SeriesSpec& spec);

/// x-component of the Rossler flow.
std::vector<double> gen_rossler(const SeriesSpec& spec);

/// Mackey-Glass delay system, RK4 with linear interpolation on the delay
/// buffer; the internal step is snapped so it divides the delay exactly.
std::vector<double> gen_mackey_glass(const SeriesSpec& spec);

std::vector<double> gen_series(const SeriesSpec& spec);

struct NormalizedSeries {
    std::vector<double> values;  // in [0, 1]
    double raw_min = 0.0, raw_max = 0.0;
};

/// Affine map of the series onto [0,1]; raw extrema recorded so predictions
/// can be mapped back. Throws DegenerateError for constant input.
NormalizedSeries normalize_unit(std::span<const double> raw);

}  // namespace parc
