#pragma once

#include <optional>
#include <string>
#include <vector>

#include "parc/integrator.hpp"
#include "parc/model.hpp"

namespace parc {

enum class RegimeLabel { SubThreshold, Bistable, ParametricResonance, FrequencyComb };
enum class CombCharacter { Coherent, Chaotic };

/// Dynamical regime of a (params, drive) point. comb_character is only ever
/// present for FrequencyComb; the analytic classifier leaves it empty and
/// resolve_comb_character() fills it from a simulated trajectory.
struct Regime {
    RegimeLabel label = RegimeLabel::SubThreshold;
    std::optional<CombCharacter> comb_character;
};

std::string to_string(RegimeLabel label);
std::string to_string(const Regime& regime);
Regime regime_from_string(const std::string& text);

/// delta2 = delta1/2 + kappa
double delta2(double delta1, double kappa);

/// Drive threshold where the parametric branch comes into existence:
/// f_Arnold = |gamma21*delta1 + delta2| / 2.
double arnold_threshold(const ModelParams& params);

/// Drive level where the trivial branch loses stability:
/// f_upper = sqrt((1 + delta1^2)(gamma21^2 + delta2^2)) / 2.
/// Always >= arnold_threshold (Cauchy-Schwarz).
double upper_boundary(const ModelParams& params);

/// True when periodic amplitude modulation (a comb) can develop:
/// 2*delta1*delta2 <= -(1 + delta1^2 + 2*gamma21).
bool comb_condition(const ModelParams& params);

/// Closed-form classification. Ties resolve upward: f == f_Arnold is already
/// Bistable, f == f_upper still Bistable, above it ParametricResonance or
/// FrequencyComb depending on comb_condition.
Regime classify_regime(const ModelParams& params, double f);

struct CombDynamicsConfig {
    double line_fraction_threshold = 0.9;  // coherent iff line fraction >= this
    int top_k = 16;                        // number of spectral peaks absorbed
    int peak_half_width = 3;               // bins absorbed on each side of a peak
};

/// Discriminate coherent from chaotic comb dynamics by the fraction of AC
/// spectral energy captured by the strongest discrete lines. The trajectory
/// must hold >= 4096 equally spaced post-transient samples of psi2.
CombCharacter classify_comb_dynamics(const Trajectory& traj,
                                     const CombDynamicsConfig& cfg = {});

/// Steady-state probe used to resolve comb character and regime visuals:
/// integrates from the standard seed (psi1 = 0, psi2 = 1e-3) at constant f,
/// discards `transient` tau, then samples `n_samples` states over `window`.
Trajectory steady_state_window(const ModelParams& params, double f, const IntegratorConfig& cfg,
                               double transient = 200.0, double window = 256.0,
                               int n_samples = 4096);

/// classify_regime plus, for comb points, the simulated comb character.
Regime classify_regime_dynamics(const ModelParams& params, double f, const IntegratorConfig& cfg,
                                const CombDynamicsConfig& comb_cfg = {});

/// Which scalar a grid axis varies.
enum class ParamAxis { FAvg, Delta1, DeltaF, Kappa, Gamma21, DataRate };

std::string to_string(ParamAxis axis);
ParamAxis param_axis_from_string(const std::string& name);

struct AxisSpec {
    ParamAxis param = ParamAxis::FAvg;
    double min = 0.0;
    double max = 0.0;
    int steps = 1;

    std::vector<double> values() const;
    void validate() const;
};

struct RegimeGrid {
    AxisSpec axis1, axis2;  // axis1 indexes rows, axis2 columns
    std::vector<Regime> cells;

    const Regime& at(int i, int j) const {
        return cells[static_cast<std::size_t>(i) * static_cast<std::size_t>(axis2.steps) +
                     static_cast<std::size_t>(j)];
    }
};

/// Cell-by-cell analytic classification over two axes (f and/or model
/// parameters). Parallel over cells; assembly order is deterministic.
RegimeGrid regime_grid(const AxisSpec& axis1, const AxisSpec& axis2, const ModelParams& base,
                       double f_base, int num_threads = 0);

}  // namespace parc
