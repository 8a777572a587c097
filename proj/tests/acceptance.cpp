// Acceptance suite: one pass/fail line per criterion, exit code equal to the
// number of failed criteria. Criteria 3-5 run full parameter-grid sweeps and
// dominate the runtime (tens of minutes on two cores).

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <string>
#include <vector>

#include "parc/fft.hpp"
#include "parc/io.hpp"
#include "parc/regime.hpp"
#include "parc/sweep.hpp"

using namespace parc;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void info(const std::string& line) {
    std::printf("       info: %s\n", line.c_str());
    std::fflush(stdout);
}

struct Lcg {
    std::uint64_t s;
    explicit Lcg(std::uint64_t seed) : s(seed) {}
    double uniform(double lo, double hi) {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return lo + (hi - lo) * (static_cast<double>(s >> 11) / 9007199254740992.0);
    }
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

ExperimentConfig defaults_config() { return ExperimentConfig{}; }

// ---------------------------------------------------------------- criterion 1

void criterion1() {
    bool pass = true;
    std::string detail;

    const struct {
        double f, delta1, f_arnold;
        RegimeLabel label;
    } cases[] = {
        {40.0, -4.5, 7.875, RegimeLabel::ParametricResonance},
        {40.0, 4.5, 1.125, RegimeLabel::FrequencyComb},
        {20.0, 2.0, 3.0, RegimeLabel::FrequencyComb},
    };
    for (const auto& c : cases) {
        const ModelParams p{c.delta1, -9.0, 1.0};
        const Regime r = classify_regime(p, c.f);
        if (r.label != c.label) {
            pass = false;
            detail += fmt("label mismatch at (%g, %g); ", c.f, c.delta1);
        }
        if (std::abs(arnold_threshold(p) - c.f_arnold) > 1e-12) {
            pass = false;
            detail += fmt("f_Arnold(%g) = %.15g != %.15g; ", c.delta1, arnold_threshold(p),
                          c.f_arnold);
        }
    }
    if (pass)
        detail = "PR/FC/FC labels and f_Arnold = 7.875, 1.125, 3.0 all match to 1e-12";
    report(1, "regime-classifier exactness", pass, detail);
}

// ---------------------------------------------------------------- criterion 2

struct PointScores {
    double mg, rossler, lorenz;
};

PointScores eval_point(double f_avg, double delta1) {
    ExperimentConfig cfg = defaults_config();
    cfg.encoding.f_avg = f_avg;
    cfg.model.delta1 = delta1;
    cfg.benchmarks = {SeriesSpec::defaults(ChaoticSystem::MackeyGlass),
                      SeriesSpec::defaults(ChaoticSystem::Rossler),
                      SeriesSpec::defaults(ChaoticSystem::Lorenz)};
    const PointResult res = run_point(cfg);
    PointScores s{};
    for (const auto& b : res.benchmarks) {
        if (!b.error.empty()) throw Error("criterion 2 pipeline failed: " + b.error);
        const double l = std::log10(b.nmse);
        if (b.name == "mackey_glass") s.mg = l;
        else if (b.name == "rossler") s.rossler = l;
        else s.lorenz = l;
    }
    return s;
}

void criterion2() {
    const PointScores pr = eval_point(40.0, -4.5);
    const PointScores cc = eval_point(40.0, 4.5);
    const PointScores chc = eval_point(20.0, 2.0);

    bool pass = true;
    std::string detail;
    auto ordered = [&](const char* name, double a, double b, double c) {
        if (!(a < b && b < c)) {
            pass = false;
            detail += fmt("%s ordering broken (%.3f, %.3f, %.3f); ", name, a, b, c);
        }
    };
    ordered("mackey_glass", pr.mg, cc.mg, chc.mg);
    ordered("rossler", pr.rossler, cc.rossler, chc.rossler);
    ordered("lorenz", pr.lorenz, cc.lorenz, chc.lorenz);
    if (!(pr.mg <= -2.0)) {
        pass = false;
        detail += fmt("PR mackey-glass log10(NMSE) = %.3f > -2.0; ", pr.mg);
    }
    if (pass)
        detail = fmt("PR < coherent < chaotic on all three benchmarks; PR mackey-glass %.2f",
                     pr.mg);
    report(2, "regime ordering of prediction quality", pass, detail);

    // The reported figures are calibration targets, not gates: benchmark
    // coefficients, sampling intervals and the time scale gamma_1 are free
    // parameters here.
    const struct {
        const char* name;
        double got, reported;
    } targets[] = {
        {"PR  mackey_glass", pr.mg, -3.19},   {"PR  rossler", pr.rossler, -2.16},
        {"PR  lorenz", pr.lorenz, -1.58},     {"CC  mackey_glass", cc.mg, -2.41},
        {"CC  rossler", cc.rossler, -0.07},   {"CC  lorenz", cc.lorenz, -0.51},
        {"ChC mackey_glass", chc.mg, -0.71},  {"ChC rossler", chc.rossler, 0.58},
        {"ChC lorenz", chc.lorenz, -0.06},
    };
    for (const auto& t : targets)
        info(fmt("%s: log10(NMSE) = %+.3f, reported %+.2f (%s +-1.0)", t.name, t.got, t.reported,
                 std::abs(t.got - t.reported) <= 1.0 ? "within" : "outside"));
}

// ------------------------------------------------------- criteria 3 and 4

ExperimentConfig grid_config(double gamma21) {
    ExperimentConfig cfg = defaults_config();
    cfg.encoding.delta_f = 0.0;
    cfg.model.gamma21 = gamma21;
    cfg.axis1 = AxisSpec{ParamAxis::FAvg, 0.0, 50.0, 21};
    cfg.axis2 = AxisSpec{ParamAxis::Delta1, -10.0, 10.0, 21};
    return cfg;
}

void criterion3(const SweepGrid& grid) {
    bool pass = true;
    std::string detail;

    double min_nmse = std::numeric_limits<double>::infinity();
    for (const auto& c : grid.cells)
        if (c.ok()) min_nmse = std::min(min_nmse, c.nmse);

    // Cells attaining the exact minimum: at delta_f = 0 every cell whose
    // reservoir output is constant collapses to the identical intercept-only
    // readout, so the minimum is typically a large exact tie.
    std::size_t tied = 0;
    bool pr_attains = false;
    for (const auto& c : grid.cells) {
        if (c.ok() && c.nmse == min_nmse) {
            ++tied;
            if (c.regime.label == RegimeLabel::ParametricResonance) pr_attains = true;
        }
    }
    if (!pr_attains) {
        pass = false;
        detail += fmt("minimum NMSE %.6g not attained by any PR cell (%zu tied); ", min_nmse,
                      tied);
    }

    std::vector<double> pr_cells, chaotic_cells;
    for (const auto& c : grid.cells) {
        if (!c.ok()) continue;
        if (c.regime.label == RegimeLabel::ParametricResonance) pr_cells.push_back(c.nmse);
        if (c.regime.label == RegimeLabel::FrequencyComb &&
            c.regime.comb_character == CombCharacter::Chaotic)
            chaotic_cells.push_back(c.nmse);
    }
    if (pr_cells.empty() || chaotic_cells.empty()) {
        pass = false;
        detail += "grid lacks PR or chaotic-comb cells; ";
    } else if (!(median(pr_cells) < median(chaotic_cells))) {
        pass = false;
        detail += fmt("median PR %.4g !< median chaotic %.4g; ", median(pr_cells),
                      median(chaotic_cells));
    }
    if (pass)
        detail = fmt("min NMSE %.6g attained in PR (%zu-way tie); median PR %.4g < chaotic %.4g",
                     min_nmse, tied, median(pr_cells), median(chaotic_cells));
    report(3, "sweep-map structure (21x21, delta_f = 0)", pass, detail);
}

void criterion4(const SweepGrid& grid_g1) {
    auto count_low = [](const SweepGrid& g) {
        std::size_t n = 0;
        for (const auto& c : g.cells)
            if (c.ok() && std::log10(c.nmse) < -1.0) ++n;
        return n;
    };
    const std::size_t c1 = count_low(grid_g1);

    const SweepGrid g5 = run_sweep(grid_config(5.0));
    const SweepGrid g20 = run_sweep(grid_config(20.0));
    const std::size_t c5 = count_low(g5), c20 = count_low(g20);

    bool pass = c1 >= c5 && c5 >= c20;
    std::string detail = fmt("cells with log10(NMSE) < -1 across gamma21 {1,5,20}: %zu, %zu, %zu",
                             c1, c5, c20);

    // Second clause: at the largest damping where the whole grid realizes
    // sub-threshold dynamics (every cell below the upper stability boundary,
    // so the seeded trivial branch is what the reservoir sees), nothing may
    // beat NMSE = 0.5. None of {1,5,20} suppresses the whole grid -- the
    // upper boundary at delta1 = 0 is sqrt(gamma21^2+81)/2 < 50 until
    // gamma21 ~ 99.6 -- so a gamma21 = 120 grid supplies the check.
    auto whole_grid_subthreshold = [](const ExperimentConfig& cfg) {
        for (double f : cfg.axis1->values())
            for (double d1 : cfg.axis2->values()) {
                ModelParams p = cfg.model;
                p.delta1 = d1;
                if (f > upper_boundary(p)) return false;
            }
        return true;
    };
    for (double g : {1.0, 5.0, 20.0})
        if (whole_grid_subthreshold(grid_config(g)))
            detail += fmt("; unexpected: whole grid sub-threshold at gamma21=%g", g);

    const ExperimentConfig cfg120 = grid_config(120.0);
    if (!whole_grid_subthreshold(cfg120)) {
        pass = false;
        detail += "; gamma21=120 grid is not fully sub-threshold";
    } else {
        const SweepGrid g120 = run_sweep(cfg120);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : g120.cells)
            if (c.ok()) best = std::min(best, c.nmse);
        if (!(best > 0.5)) {
            pass = false;
            detail += fmt("; sub-threshold grid best NMSE %.4g beats 0.5", best);
        } else {
            detail += fmt("; whole-grid sub-threshold at gamma21=120: best NMSE %.4g > 0.5", best);
        }
    }
    report(4, "damping trend", pass, detail);
}

// ---------------------------------------------------------------- criterion 5

void criterion5() {
    const double rates[] = {24240.0, 242400.0, 2424000.0};
    double best[3];
    for (int i = 0; i < 3; ++i) {
        ExperimentConfig cfg = defaults_config();
        cfg.encoding.set_data_rate(rates[i]);
        cfg.axis1 = AxisSpec{ParamAxis::FAvg, 20.0, 50.0, 4};
        cfg.axis2 = AxisSpec{ParamAxis::Delta1, -6.0, 4.5, 5};
        const SweepGrid grid = run_sweep(cfg);
        best[i] = std::numeric_limits<double>::infinity();
        for (const auto& c : grid.cells)
            if (c.ok()) best[i] = std::min(best[i], c.nmse);
    }
    const bool pass = best[1] < best[0] && best[1] < best[2];
    report(5, "data-rate trend", pass,
           fmt("best grid log10(NMSE) over rates {2.4e4, 2.4e5, 2.4e6}: %.3f, %.3f, %.3f%s",
               std::log10(best[0]), std::log10(best[1]), std::log10(best[2]),
               pass ? " (intermediate rate wins)" : ""));
}

// ---------------------------------------------------------------- criterion 6

std::vector<double> ridge_oracle(const Matrix& x, const std::vector<double>& y, double lambda) {
    const std::size_t d = x.cols();
    std::vector<std::vector<double>> a(d, std::vector<double>(2 * d, 0.0));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            double s = i == j ? lambda : 0.0;
            for (std::size_t r = 0; r < x.rows(); ++r) s += x(r, i) * x(r, j);
            a[i][j] = s;
        }
        a[i][d + i] = 1.0;
    }
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < d; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[piv], a[col]);
        const double p = a[col][col];
        for (std::size_t c = 0; c < 2 * d; ++c) a[col][c] /= p;
        for (std::size_t r = 0; r < d; ++r) {
            if (r == col) continue;
            const double m = a[r][col];
            for (std::size_t c = 0; c < 2 * d; ++c) a[r][c] -= m * a[col][c];
        }
    }
    std::vector<double> xty(d, 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t j = 0; j < d; ++j) xty[j] += x(r, j) * y[r];
    std::vector<double> w(d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) w[i] += a[i][d + j] * xty[j];
    return w;
}

std::vector<double> naive_dft(const std::vector<cplx>& x, int n_fft) {
    std::vector<double> mags(static_cast<std::size_t>(n_fft));
    for (int j = 0; j < n_fft; ++j) {
        long double re = 0.0L, im = 0.0L;
        for (std::size_t m = 0; m < x.size(); ++m) {
            const auto idx = (static_cast<std::size_t>(j) * m) % x.size();
            const double ang =
                -2.0 * std::numbers::pi * static_cast<double>(idx) / static_cast<double>(x.size());
            const double c = std::cos(ang), s = std::sin(ang);
            re += static_cast<long double>(x[m].real()) * c - x[m].imag() * s;
            im += static_cast<long double>(x[m].real()) * s + x[m].imag() * c;
        }
        mags[static_cast<std::size_t>(j)] = static_cast<double>(std::sqrt(re * re + im * im));
    }
    return mags;
}

void criterion6() {
    bool pass = true;
    std::string detail;
    Lcg rng(101);

    // ridge vs dense normal-equation oracle
    double worst_ridge = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 15 + static_cast<std::size_t>(rng.uniform(0, 25));
        const std::size_t d = 3 + static_cast<std::size_t>(rng.uniform(0, 9));
        Matrix x(n, d);
        for (double& v : x.data()) v = rng.uniform(-1, 1);
        std::vector<double> y(n);
        for (double& v : y) v = rng.uniform(-1, 1);
        const double lambda = std::pow(10.0, rng.uniform(-5, 0));
        const RidgeModel m = ridge_fit(x, y, lambda);
        const auto oracle = ridge_oracle(x, y, lambda);
        for (std::size_t j = 0; j < d; ++j)
            worst_ridge = std::max(
                worst_ridge, std::abs(m.weights[j] - oracle[j]) / (std::abs(oracle[j]) + 1.0));
    }
    if (worst_ridge >= 1e-8) {
        pass = false;
        detail += fmt("ridge oracle mismatch %.2e; ", worst_ridge);
    }

    // dft vs brute force
    double worst_dft = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = rep % 3 == 0 ? 512 : (rep % 3 == 1 ? 128 : 96);
        std::vector<cplx> x(n);
        for (auto& v : x) v = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const auto fast = dft_magnitudes(x, static_cast<int>(n));
        const auto slow = naive_dft(x, static_cast<int>(n));
        for (std::size_t j = 0; j < n; ++j)
            worst_dft = std::max(worst_dft, std::abs(fast[j] - slow[j]));
    }
    if (worst_dft >= 1e-12) {
        pass = false;
        detail += fmt("dft oracle mismatch %.2e; ", worst_dft);
    }

    // integrator order: fixed-step h^5 scaling over one decade
    const ModelParams pr{-4.5, -9.0, 1.0};
    EnvelopeState start;
    start.psi2 = {1e-3, 0.0};
    IntegratorConfig tight;
    tight.rel_tol = 1e-13;
    tight.abs_tol = 1e-15;
    Dopri5 ref_stepper(tight);
    ref_stepper.advance(start, pr, 40.0, 0.5);
    EnvelopeState ref = start;
    ref_stepper.advance(ref, pr, 40.0, 1.0);
    auto err_at = [&](double h) {
        IntegratorConfig c;
        c.fixed_step = h;
        c.initial_step = h;
        Dopri5 st(c);
        EnvelopeState s = start;
        st.advance(s, pr, 40.0, 1.0);
        return std::max(std::abs(s.psi1 - ref.psi1), std::abs(s.psi2 - ref.psi2));
    };
    const double order = std::log10(err_at(1.0 / 40) / err_at(1.0 / 400));
    if (!(order > 5.0 - 0.61 && order < 5.0 + 0.61)) {
        pass = false;
        detail += fmt("integrator order %.2f outside 5 +- log10(4); ", order);
    }

    // sub-threshold fixed-point residual
    double worst_resid = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const ModelParams p{rng.uniform(-8, 8), rng.uniform(-10, 2), rng.uniform(0.1, 5)};
        const double f = rng.uniform(0, 50);
        const Derivatives d = rhs(subthreshold_fixed_point(p, f), p, f);
        worst_resid = std::max(worst_resid,
                               std::max(std::abs(d.dpsi1), std::abs(d.dpsi2)) / (1.0 + f));
    }
    if (worst_resid >= 1e-12) {
        pass = false;
        detail += fmt("fixed-point residual %.2e; ", worst_resid);
    }

    if (pass)
        detail = fmt("ridge %.1e (<1e-8); dft %.1e (<1e-12); order %.2f; residual %.1e (<1e-12)",
                     worst_ridge, worst_dft, order, worst_resid);
    report(6, "numerical-kernel oracles", pass, detail);
}

// ---------------------------------------------------------------- criterion 7

void criterion7() {
    bool pass = true;
    std::string detail;

    ExperimentConfig small = defaults_config();
    small.benchmarks.front().n_points = 140;
    small.benchmarks.front().transient_discard = 40;
    small.encoding.warmup_symbols = 10;
    small.features.n_virtual_nodes = 64;
    small.features.n_fft = 32;
    small.split.washout = 20;

    const NormalizedSeries series = normalize_unit(gen_series(small.benchmarks.front()));

    // causality: a future symbol cannot change past feature rows
    {
        NormalizedSeries s2 = series;
        s2.values[100] = 1.0 - s2.values[100];
        const Matrix a =
            run_reservoir(series, small.model, small.encoding, small.features, small.integrator);
        const Matrix b =
            run_reservoir(s2, small.model, small.encoding, small.features, small.integrator);
        bool prefix_equal = true;
        for (std::size_t r = 0; r < 100 && prefix_equal; ++r)
            prefix_equal = std::memcmp(a.row(r), b.row(r), a.cols() * sizeof(double)) == 0;
        const bool diverges_after =
            std::memcmp(a.row(100), b.row(100), a.cols() * sizeof(double)) != 0;
        if (!prefix_equal || !diverges_after) {
            pass = false;
            detail += "causality violated; ";
        }
    }

    // state continuity: symbol-chained reservoir follows one continuous
    // piecewise-drive integration within 10x rel_tol
    {
        NormalizedSeries s5;
        s5.values.assign(series.values.begin(), series.values.begin() + 5);
        const Matrix m =
            run_reservoir(s5, small.model, small.encoding, small.features, small.integrator);
        EnvelopeState state = reservoir_seed();
        Dopri5 stepper(small.integrator);
        for (int w = 0; w < small.encoding.warmup_symbols; ++w)
            stepper.advance(state, small.model, small.encoding.f_avg,
                            small.encoding.symbol_duration);
        bool ok = true;
        for (std::size_t n = 0; n < 5; ++n) {
            stepper.advance(state, small.model, encode_symbol(s5.values[n], small.encoding),
                            small.encoding.symbol_duration);
            const double got = m(n, static_cast<std::size_t>(small.features.n_virtual_nodes) - 1);
            const double want = std::norm(state.psi1);
            if (std::abs(got - want) > 10.0 * small.integrator.rel_tol * std::max(1.0, want))
                ok = false;
        }
        if (!ok) {
            pass = false;
            detail += "state continuity beyond 10x rel_tol; ";
        }
    }

    // determinism: the full pipeline reproduces NMSE bit-identically
    {
        const auto e1 = evaluate_series("mackey_glass", series, small);
        const auto e2 = evaluate_series("mackey_glass", series, small);
        if (std::memcmp(&e1.nmse, &e2.nmse, sizeof(double)) != 0) {
            pass = false;
            detail += "pipeline not deterministic; ";
        }
    }

    // NMSE scale invariance
    {
        Lcg rng(7);
        std::vector<double> truth(64), pred(64);
        for (std::size_t i = 0; i < 64; ++i) {
            truth[i] = rng.uniform(0, 1);
            pred[i] = rng.uniform(0, 1);
        }
        const double base = nmse(truth, pred);
        std::vector<double> st(64), sp(64);
        for (std::size_t i = 0; i < 64; ++i) {
            st[i] = -3.7 * truth[i] + 11.0;
            sp[i] = -3.7 * pred[i] + 11.0;
        }
        if (std::abs(nmse(st, sp) - base) > 1e-12) {
            pass = false;
            detail += "nmse not scale invariant; ";
        }
    }

    // preprocess idempotence on train
    {
        Lcg rng(9);
        Matrix train(40, 8);
        for (double& v : train.data()) v = std::exp(rng.uniform(-6, 3));
        Matrix none(0, 8);
        const PreprocessResult res = preprocess(train, none, small.features);
        bool ok = true;
        for (std::size_t j = 0; j < res.train.cols(); ++j) {
            double mean = 0.0, var = 0.0;
            for (std::size_t i = 0; i < res.train.rows(); ++i) mean += res.train(i, j);
            mean /= static_cast<double>(res.train.rows());
            for (std::size_t i = 0; i < res.train.rows(); ++i) {
                const double d = res.train(i, j) - mean;
                var += d * d;
            }
            const double sd = std::sqrt(var / static_cast<double>(res.train.rows()));
            for (std::size_t i = 0; i < res.train.rows(); ++i)
                if (std::abs((res.train(i, j) - mean) / sd - res.train(i, j)) > 1e-10) ok = false;
        }
        if (!ok) {
            pass = false;
            detail += "preprocess not idempotent; ";
        }
    }

    if (pass)
        detail =
            "causality, state continuity, determinism, NMSE scale-invariance, preprocess "
            "idempotence all hold";
    report(7, "pipeline invariant suite", pass, detail);
}

// ---------------------------------------------------------------- criterion 8

void criterion8() {
    const ModelParams p{-4.5, -9.0, 1.0};
    const double f = 15.0;  // f_Arnold = 7.875 < 15 < f_upper = 26.03
    const IntegratorConfig cfg;
    Dopri5 stepper(cfg);

    EnvelopeState from_seed;
    from_seed.psi2 = {1e-3, 0.0};
    stepper.advance(from_seed, p, f, 200.0);

    EnvelopeState from_branch;
    from_branch.psi2 = {1e-3, 0.0};
    stepper.advance(from_branch, p, 40.0, 200.0);  // settle on the parametric branch
    stepper.advance(from_branch, p, f, 200.0);     // then walk it down into the band

    const double a = std::abs(from_seed.psi2);
    const double b = std::abs(from_branch.psi2);
    const bool pass = std::abs(b - a) > 1e-2;
    report(8, "bistability demonstration", pass,
           fmt("|psi2| from seed %.3g vs from branch continuation %.3g at f = 15 (gap %.3g)", a, b,
               std::abs(b - a)));
}

}  // namespace

int main() {
    std::printf("acceptance suite: two-mode parametric reservoir\n");
    criterion1();
    criterion2();
    const SweepGrid grid_g1 = run_sweep(grid_config(1.0));
    criterion3(grid_g1);
    criterion4(grid_g1);
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures;
}
