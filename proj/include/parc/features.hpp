#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "parc/benchmarks.hpp"
#include "parc/integrator.hpp"
#include "parc/linalg.hpp"
#include "parc/model.hpp"

namespace parc {

/// How a normalized symbol stream maps onto the drive amplitude:
/// f(n) = f_avg + delta_f * (s(n) - 0.5), one constant drive per symbol.
struct EncodingConfig {
    double f_avg = 40.0;
    double delta_f = 5.0;
    /// Symbol period in tau units. data rate = gamma1_scale / symbol_duration.
    double symbol_duration = 1e5 / 2424.0;
    /// gamma_1 in s^-1; converts quoted data rates (samples/second) to tau.
    double gamma1_scale = 1e5;
    int warmup_symbols = 50;

    double data_rate() const { return gamma1_scale / symbol_duration; }
    void set_data_rate(double rate) { symbol_duration = gamma1_scale / rate; }

    void validate() const {
        if (!(symbol_duration > 0.0)) throw ConfigError("EncodingConfig: symbol_duration <= 0");
        if (delta_f < 0.0) throw ConfigError("EncodingConfig: delta_f must be >= 0");
        if (f_avg - 0.5 * delta_f < 0.0)
            throw ConfigError("EncodingConfig: drive would go negative (f_avg < delta_f/2)");
        if (!(gamma1_scale > 0.0)) throw ConfigError("EncodingConfig: gamma1_scale <= 0");
        if (warmup_symbols < 0) throw ConfigError("EncodingConfig: warmup_symbols < 0");
    }
};

struct FeatureConfig {
    int n_virtual_nodes = 512;
    int n_fft = 512;
    double epsilon = 1e-10;  // log-compression floor

    int dimension() const { return 2 * n_virtual_nodes + 2 * n_fft; }

    void validate() const {
        if (n_virtual_nodes < 1) throw ConfigError("FeatureConfig: n_virtual_nodes < 1");
        if (n_fft < 1 || n_fft > n_virtual_nodes)
            throw ConfigError("FeatureConfig: need 1 <= n_fft <= n_virtual_nodes");
        if (!(epsilon > 0.0)) throw ConfigError("FeatureConfig: epsilon <= 0");
    }
};

/// Eq-of-encoding for one symbol; s must lie in [0, 1].
double encode_symbol(double s, const EncodingConfig& cfg);

/// Starting state for every reservoir run: psi1 = 0, psi2 = 1e-3 (real).
/// The parametric branch is unreachable from exactly psi2 = 0.
EnvelopeState reservoir_seed();

/// Drive the oscillator with the encoded symbol stream and assemble one raw
/// feature row per symbol:
///   [ |psi1|^2 at the N_v node times | |psi2|^2 likewise |
///     first N_FFT DFT magnitudes of the psi1 node samples | same for psi2 ]
/// Node times are tau_start + k*T/N_v, k = 1..N_v (end-inclusive). The
/// envelope state carries across symbols; warm-up runs at constant f_avg.
/// Integration is sequential; the per-symbol feature pass is parallel.
Matrix run_reservoir(const NormalizedSeries& series, const ModelParams& params,
                     const EncodingConfig& enc, const FeatureConfig& feat,
                     const IntegratorConfig& integ, int num_threads = 0);

/// Training-set statistics, applied identically to any further matrix.
struct PreprocessState {
    std::vector<std::uint8_t> retained_mask;  // per raw column
    std::vector<double> column_means;         // per retained column
    std::vector<double> column_stds;          // per retained column
    double epsilon = 1e-10;

    std::size_t retained_count() const;
};

/// Columns whose log-compressed training standard deviation is at or below
/// this floor are treated as zero-variance and dropped: at 1e-5 in log10
/// units (~0.002% amplitude wiggle) a column carries integration noise, not
/// signal.
inline constexpr double kVarianceFloor = 1e-5;

struct PreprocessResult {
    Matrix train;
    Matrix test;
    PreprocessState state;
};

/// Log-compress (log10(|x| + eps)) both matrices, then standardize columns
/// to zero mean / unit variance using training-set statistics only.
/// Throws DegenerateFeaturesError when every column is zero-variance.
PreprocessResult preprocess(const Matrix& raw_train, const Matrix& raw_test,
                            const FeatureConfig& cfg);

/// Apply fitted preprocessing to new raw features.
Matrix apply_preprocess(const Matrix& raw, const PreprocessState& state);

}  // namespace parc
