#include "parc/features.hpp"

#include <cmath>

#include "parc/fft.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace parc {

double encode_symbol(double s, const EncodingConfig& cfg) {
    cfg.validate();
    if (!(s >= 0.0 && s <= 1.0))
        throw InvalidStateError("encode_symbol: symbol outside [0,1]: " + std::to_string(s));
    return cfg.f_avg + cfg.delta_f * (s - 0.5);
}

EnvelopeState reservoir_seed() {
    EnvelopeState s;
    s.psi1 = {0.0, 0.0};
    s.psi2 = {1e-3, 0.0};
    s.tau = 0.0;
    return s;
}

namespace {

// Advance one symbol on the node grid: nv node intervals, n_sub uniform
// steps each. Node samples are the exact interval-end states. A uniform,
// state-independent step grid keeps the numerical symbol map free of
// step-acceptance branches, so feature values cannot pick up adaptive step
// history: once the envelope has physically converged, node samples repeat
// bit-for-bit and their columns drop out as zero-variance.
void advance_symbol_on_grid(const Dopri5& stepper, EnvelopeState& state, const ModelParams& params,
                            double f, double node_duration, std::size_t nv, cplx* out1,
                            cplx* out2) {
    for (std::size_t k = 0; k < nv; ++k) {
        stepper.advance(state, params, f, node_duration);
        if (out1) {
            out1[k] = state.psi1;
            out2[k] = state.psi2;
        }
    }
}

// Smallest power-of-two sub-step count whose per-symbol endpoint error,
// estimated against a doubled grid, meets the configured tolerance. On
// chaotic trajectories the endpoint difference bottoms out at the
// sensitivity floor instead of converging; refinement stops once doubling
// no longer gains a factor of 4.
int calibrate_substeps(const IntegratorConfig& integ, const EnvelopeState& from,
                       const ModelParams& params, double f, double node_duration, std::size_t nv) {
    constexpr int kMaxSubsteps = 64;
    auto endpoint = [&](int n_sub, EnvelopeState& out) {
        IntegratorConfig c = integ;
        c.fixed_step = node_duration / n_sub;
        c.initial_step = std::min(c.initial_step, c.fixed_step);
        const Dopri5 stepper(c);
        EnvelopeState s = from;
        advance_symbol_on_grid(stepper, s, params, f, node_duration, nv, nullptr, nullptr);
        out = s;
        return true;
    };
    double prev_diff = std::numeric_limits<double>::infinity();
    bool have_coarse = false;
    EnvelopeState coarse;
    for (int n_sub = 1; n_sub < kMaxSubsteps; n_sub *= 2) {
        try {
            if (!have_coarse) endpoint(n_sub, coarse);
            EnvelopeState fine;
            endpoint(2 * n_sub, fine);
            const double scale = std::max({std::abs(fine.psi1), std::abs(fine.psi2), 1.0});
            const double diff =
                std::max(std::abs(coarse.psi1 - fine.psi1), std::abs(coarse.psi2 - fine.psi2));
            if (diff <= integ.rel_tol * scale + integ.abs_tol) return n_sub;
            if (n_sub >= 4 && diff >= 0.25 * prev_diff) return 2 * n_sub;
            prev_diff = diff;
            coarse = fine;
            have_coarse = true;
        } catch (const DivergenceError&) {
            have_coarse = false;
            prev_diff = std::numeric_limits<double>::infinity();
        }
    }
    return kMaxSubsteps;
}

}  // namespace

Matrix run_reservoir(const NormalizedSeries& series, const ModelParams& params,
                     const EncodingConfig& enc, const FeatureConfig& feat,
                     const IntegratorConfig& integ, int num_threads) {
    enc.validate();
    feat.validate();
    integ.validate();
    params.validate();
    if (series.values.empty()) throw InsufficientDataError("run_reservoir: empty series");

    const auto n_sym = series.values.size();
    const auto nv = static_cast<std::size_t>(feat.n_virtual_nodes);
    const double t_sym = enc.symbol_duration;
    const double node_dur = t_sym / static_cast<double>(nv);

    EnvelopeState state = reservoir_seed();

    // A caller-set fixed_step wins; otherwise calibrate the sub-step count at
    // the seed and again mid warm-up once transients have largely settled.
    int n_sub;
    if (integ.fixed_step > 0.0)
        n_sub = std::max(1, static_cast<int>(std::llround(node_dur / integ.fixed_step)));
    else
        n_sub = calibrate_substeps(integ, state, params, enc.f_avg, node_dur, nv);

    auto make_stepper = [&](int sub) {
        IntegratorConfig c = integ;
        c.fixed_step = node_dur / sub;
        c.initial_step = std::min(c.initial_step, c.fixed_step);
        return Dopri5(c);
    };
    Dopri5 stepper = make_stepper(n_sub);

    // Warm-up at constant operating point; node states are discarded.
    for (int w = 0; w < enc.warmup_symbols; ++w) {
        try {
            advance_symbol_on_grid(stepper, state, params, enc.f_avg, node_dur, nv, nullptr,
                                   nullptr);
        } catch (const DivergenceError& e) {
            throw ReservoirDivergenceError(std::string("reservoir diverged in warm-up: ") +
                                               e.what(),
                                           w - enc.warmup_symbols);
        }
        if (integ.fixed_step <= 0.0 && enc.warmup_symbols > 1 && w == enc.warmup_symbols / 2) {
            const int refined =
                calibrate_substeps(integ, state, params, enc.f_avg, node_dur, nv);
            if (refined > n_sub) {
                n_sub = refined;
                stepper = make_stepper(n_sub);
            }
        }
    }

    // Sequential pass: integrate symbol by symbol, keeping the complex node
    // samples. State carries across symbols with no reset.
    std::vector<cplx> nodes1(n_sym * nv), nodes2(n_sym * nv);
    for (std::size_t n = 0; n < n_sym; ++n) {
        const double f = encode_symbol(series.values[n], enc);
        try {
            advance_symbol_on_grid(stepper, state, params, f, node_dur, nv, &nodes1[n * nv],
                                   &nodes2[n * nv]);
        } catch (const DivergenceError& e) {
            throw ReservoirDivergenceError(
                std::string("reservoir diverged at symbol ") + std::to_string(n) + ": " + e.what(),
                static_cast<long>(n));
        }
    }

    // Parallel pass: per-symbol powers and spectra. Each row is written by
    // exactly one thread, so the result is independent of thread count.
    const auto nfft = static_cast<std::size_t>(feat.n_fft);
    Matrix out(n_sym, static_cast<std::size_t>(feat.dimension()));
#ifdef _OPENMP
    const int nt = num_threads > 0 ? num_threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
#endif
    for (long nn = 0; nn < static_cast<long>(n_sym); ++nn) {
        const auto n = static_cast<std::size_t>(nn);
        double* row = out.row(n);
        const std::span<const cplx> s1(nodes1.data() + n * nv, nv);
        const std::span<const cplx> s2(nodes2.data() + n * nv, nv);
        for (std::size_t k = 0; k < nv; ++k) {
            row[k] = std::norm(s1[k]);
            row[nv + k] = std::norm(s2[k]);
        }
        const std::vector<double> m1 = dft_magnitudes(s1, feat.n_fft);
        const std::vector<double> m2 = dft_magnitudes(s2, feat.n_fft);
        for (std::size_t j = 0; j < nfft; ++j) {
            row[2 * nv + j] = m1[j];
            row[2 * nv + nfft + j] = m2[j];
        }
    }
    return out;
}

std::size_t PreprocessState::retained_count() const {
    std::size_t n = 0;
    for (auto m : retained_mask) n += m ? 1 : 0;
    return n;
}

namespace {

Matrix log_compress(const Matrix& raw, double eps) {
    Matrix out(raw.rows(), raw.cols());
    const auto src = raw.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = std::log10(std::abs(src[i]) + eps);
    return out;
}

}  // namespace

PreprocessResult preprocess(const Matrix& raw_train, const Matrix& raw_test,
                            const FeatureConfig& cfg) {
    cfg.validate();
    if (raw_train.rows() < 2)
        throw InsufficientDataError("preprocess: need at least 2 training rows");
    if (raw_test.rows() > 0 && raw_test.cols() != raw_train.cols())
        throw InvalidStateError("preprocess: train/test column mismatch");

    const Matrix ltrain = log_compress(raw_train, cfg.epsilon);
    const Matrix ltest = log_compress(raw_test, cfg.epsilon);

    const std::size_t d = ltrain.cols(), n = ltrain.rows();
    PreprocessState st;
    st.epsilon = cfg.epsilon;
    st.retained_mask.assign(d, 0);

    std::vector<double> means(d, 0.0), stds(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = ltrain.row(i);
        for (std::size_t j = 0; j < d; ++j) means[j] += row[j];
    }
    for (std::size_t j = 0; j < d; ++j) means[j] /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = ltrain.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            const double dev = row[j] - means[j];
            stds[j] += dev * dev;
        }
    }
    std::size_t kept = 0;
    for (std::size_t j = 0; j < d; ++j) {
        stds[j] = std::sqrt(stds[j] / static_cast<double>(n));  // population std
        if (stds[j] > kVarianceFloor) {
            st.retained_mask[j] = 1;
            ++kept;
        }
    }
    if (kept == 0)
        throw DegenerateFeaturesError("preprocess: all columns have zero variance on train");

    st.column_means.reserve(kept);
    st.column_stds.reserve(kept);
    for (std::size_t j = 0; j < d; ++j) {
        if (!st.retained_mask[j]) continue;
        st.column_means.push_back(means[j]);
        st.column_stds.push_back(stds[j]);
    }

    auto standardize = [&](const Matrix& src) {
        Matrix out(src.rows(), kept);
        for (std::size_t i = 0; i < src.rows(); ++i) {
            const double* in = src.row(i);
            double* orow = out.row(i);
            std::size_t c = 0;
            for (std::size_t j = 0; j < d; ++j) {
                if (!st.retained_mask[j]) continue;
                orow[c] = (in[j] - st.column_means[c]) / st.column_stds[c];
                ++c;
            }
        }
        return out;
    };

    PreprocessResult res;
    res.train = standardize(ltrain);
    res.test = standardize(ltest);
    res.state = std::move(st);
    return res;
}

Matrix apply_preprocess(const Matrix& raw, const PreprocessState& state) {
    if (raw.cols() != state.retained_mask.size())
        throw InvalidStateError("apply_preprocess: column count mismatch");
    const std::size_t kept = state.retained_count();
    Matrix out(raw.rows(), kept);
    for (std::size_t i = 0; i < raw.rows(); ++i) {
        const double* in = raw.row(i);
        double* orow = out.row(i);
        std::size_t c = 0;
        for (std::size_t j = 0; j < raw.cols(); ++j) {
            if (!state.retained_mask[j]) continue;
            const double lv = std::log10(std::abs(in[j]) + state.epsilon);
            orow[c] = (lv - state.column_means[c]) / state.column_stds[c];
            ++c;
        }
    }
    return out;
}

}  // namespace parc
