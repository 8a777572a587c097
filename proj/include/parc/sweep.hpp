#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "parc/benchmarks.hpp"
#include "parc/features.hpp"
#include "parc/readout.hpp"
#include "parc/regime.hpp"

namespace parc {

/// Everything one experiment needs: benchmark generation, oscillator
/// parameters, encoding, features, integration, split, readout, and up to
/// two sweep axes.
struct ExperimentConfig {
    std::vector<SeriesSpec> benchmarks{SeriesSpec::defaults(ChaoticSystem::MackeyGlass)};
    ModelParams model{-4.5, -9.0, 1.0};
    EncodingConfig encoding;
    FeatureConfig features;
    IntegratorConfig integrator;
    SplitSpec split;
    double lambda = 1e-3;
    CombDynamicsConfig comb;
    std::optional<AxisSpec> axis1, axis2;
    int workers = 0;  // sweep worker threads; 0 = all available

    void validate() const;
};

/// Full single-point pipeline result.
struct PointResult {
    struct BenchmarkEval {
        std::string name;
        double nmse = 0.0;
        std::string error;  // non-empty when this benchmark failed
        std::vector<double> truth, prediction;  // test window
        std::size_t retained_features = 0;
    };
    std::vector<BenchmarkEval> benchmarks;
    Regime regime;
    std::vector<double> trace_tau, trace_psi2_sq;  // steady-state |psi2|^2 trace
    std::vector<double> spectrum;                  // DFT magnitudes of the psi2 window
};

/// generate series -> encode -> reservoir -> preprocess -> fit -> predict ->
/// NMSE, for every configured benchmark (failures recorded per benchmark,
/// the rest continue). Also integrates the steady-state trace and spectrum
/// at the operating point.
PointResult run_point(const ExperimentConfig& cfg);

/// Supervised evaluation of one prepared series under one configuration.
/// When every reservoir feature is dropped as zero-variance the readout
/// falls back to the intercept-only model (mean predictor).
PointResult::BenchmarkEval evaluate_series(const std::string& name, const NormalizedSeries& series,
                                           const ExperimentConfig& cfg, int num_threads = 0);

struct SweepCell {
    double nmse = std::numeric_limits<double>::quiet_NaN();
    Regime regime;
    std::string failure;  // empty on success

    bool ok() const noexcept { return failure.empty(); }
};

struct SweepGrid {
    AxisSpec axis1, axis2;  // axis1 indexes rows (i), axis2 columns (j)
    std::vector<SweepCell> cells;
    std::uint64_t series_hash = 0;
    std::string benchmark_name;

    std::size_t index(std::size_t i, std::size_t j) const {
        return i * static_cast<std::size_t>(axis2.steps) + j;
    }
    const SweepCell& at(std::size_t i, std::size_t j) const { return cells[index(i, j)]; }
    bool any_failure() const;
};

/// Evaluate the first configured benchmark on every grid cell. The series is
/// generated once and shared across cells. Cells run in parallel over
/// `workers` threads; each cell is computed by one thread with a fixed
/// arithmetic order, so the grid is bit-identical for any worker count.
/// Diverging cells are retried once with 10x tighter tolerances before being
/// recorded as failures; failures never abort the sweep.
SweepGrid run_sweep(const ExperimentConfig& cfg);

/// Apply one axis value to a configuration copy.
void apply_axis_value(ExperimentConfig& cfg, ParamAxis axis, double value);

/// Grid CSV: two axis header rows, one row per cell
/// (i, j, axis values, nmse, log10_nmse, regime, failure).
void write_grid_csv(const SweepGrid& grid, const std::filesystem::path& path);
SweepGrid read_grid_csv(const std::filesystem::path& path);

/// JSON sidecar: config snapshot, series hash, format version. No
/// timestamps, so rerunning an identical config reproduces identical bytes.
void write_grid_meta(const SweepGrid& grid, const ExperimentConfig& cfg,
                     const std::filesystem::path& path);

/// Regime-only grid in the same CSV format (nmse fields left empty).
void write_regime_grid_csv(const RegimeGrid& grid, const std::filesystem::path& path);

}  // namespace parc
