#include "parc/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "parc/fft.hpp"
#include "parc/io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace parc {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Matrix drop_last_row(const Matrix& m) {
    Matrix out(m.rows() - 1, m.cols());
    std::copy(m.data().begin(), m.data().begin() + static_cast<long>(out.data().size()),
              out.data().begin());
    return out;
}

nlohmann::json series_spec_json(const SeriesSpec& s) {
    nlohmann::json j;
    j["system"] = to_string(s.system);
    j["n_points"] = s.n_points;
    j["sample_interval"] = s.sample_interval;
    j["transient_discard"] = s.transient_discard;
    j["substeps"] = s.substeps;
    j["lorenz"] = {{"sigma", s.lorenz.sigma}, {"rho", s.lorenz.rho}, {"beta", s.lorenz.beta},
                   {"init", s.lorenz.init}};
    j["rossler"] = {{"a", s.rossler.a}, {"b", s.rossler.b}, {"c", s.rossler.c},
                    {"init", s.rossler.init}};
    j["mackey_glass"] = {{"beta", s.mackey_glass.beta},
                         {"gamma", s.mackey_glass.gamma},
                         {"exponent", s.mackey_glass.exponent},
                         {"tau_delay", s.mackey_glass.tau_delay},
                         {"history", s.mackey_glass.history}};
    return j;
}

nlohmann::json axis_json(const AxisSpec& a) {
    return {{"param", to_string(a.param)}, {"min", a.min}, {"max", a.max}, {"steps", a.steps}};
}

nlohmann::json config_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    for (const auto& b : cfg.benchmarks) j["benchmarks"].push_back(series_spec_json(b));
    j["model"] = {{"delta1", cfg.model.delta1},
                  {"kappa", cfg.model.kappa},
                  {"gamma21", cfg.model.gamma21}};
    j["encoding"] = {{"f_avg", cfg.encoding.f_avg},
                     {"delta_f", cfg.encoding.delta_f},
                     {"symbol_duration", cfg.encoding.symbol_duration},
                     {"gamma1_scale", cfg.encoding.gamma1_scale},
                     {"warmup_symbols", cfg.encoding.warmup_symbols}};
    j["features"] = {{"n_virtual_nodes", cfg.features.n_virtual_nodes},
                     {"n_fft", cfg.features.n_fft},
                     {"epsilon", cfg.features.epsilon}};
    j["integrator"] = {{"rel_tol", cfg.integrator.rel_tol},
                       {"abs_tol", cfg.integrator.abs_tol},
                       {"initial_step", cfg.integrator.initial_step},
                       {"max_step", cfg.integrator.max_step},
                       {"blow_up_bound", cfg.integrator.blow_up_bound},
                       {"fixed_step", cfg.integrator.fixed_step}};
    j["split"] = {{"washout", cfg.split.washout}, {"train_fraction", cfg.split.train_fraction}};
    j["lambda"] = cfg.lambda;
    if (cfg.axis1) j["axis1"] = axis_json(*cfg.axis1);
    if (cfg.axis2) j["axis2"] = axis_json(*cfg.axis2);
    j["workers"] = cfg.workers;
    return j;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (benchmarks.empty()) throw ConfigError("ExperimentConfig: no benchmark configured");
    for (const auto& b : benchmarks) b.validate();
    model.validate();
    encoding.validate();
    features.validate();
    integrator.validate();
    split.validate();
    if (!(lambda > 0.0)) throw ConfigError("ExperimentConfig: lambda must be > 0");
    if (axis1) axis1->validate();
    if (axis2) axis2->validate();
    if (workers < 0) throw ConfigError("ExperimentConfig: workers must be >= 0");
}

void apply_axis_value(ExperimentConfig& cfg, ParamAxis axis, double value) {
    switch (axis) {
        case ParamAxis::FAvg: cfg.encoding.f_avg = value; break;
        case ParamAxis::Delta1: cfg.model.delta1 = value; break;
        case ParamAxis::DeltaF: cfg.encoding.delta_f = value; break;
        case ParamAxis::Kappa: cfg.model.kappa = value; break;
        case ParamAxis::Gamma21: cfg.model.gamma21 = value; break;
        case ParamAxis::DataRate: cfg.encoding.set_data_rate(value); break;
    }
}

PointResult::BenchmarkEval evaluate_series(const std::string& name, const NormalizedSeries& series,
                                           const ExperimentConfig& cfg, int num_threads) {
    PointResult::BenchmarkEval eval;
    eval.name = name;

    const Matrix raw = run_reservoir(series, cfg.model, cfg.encoding, cfg.features,
                                     cfg.integrator, num_threads);
    const std::vector<double> targets = make_targets(series);
    const Matrix aligned = drop_last_row(raw);
    SupervisedSplit sup = split(aligned, targets, cfg.split);

    Matrix x_train, x_test;
    PreprocessState state;
    try {
        PreprocessResult pre = preprocess(sup.x_train, sup.x_test, cfg.features);
        x_train = std::move(pre.train);
        x_test = std::move(pre.test);
        state = std::move(pre.state);
    } catch (const DegenerateFeaturesError&) {
        // Constant reservoir output: the intercept column below is all that
        // remains and the readout reduces to the mean predictor.
        x_train = Matrix(sup.x_train.rows(), 0);
        x_test = Matrix(sup.x_test.rows(), 0);
        state.retained_mask.assign(aligned.cols(), 0);
        state.epsilon = cfg.features.epsilon;
    }

    RidgeModel model = ridge_fit(with_intercept(x_train), sup.y_train, cfg.lambda, num_threads);
    model.preprocess_state = state;
    eval.retained_features = state.retained_count();
    eval.prediction = predict(model, with_intercept(x_test));
    eval.truth = sup.y_test;
    eval.nmse = nmse(eval.truth, eval.prediction);
    return eval;
}

PointResult run_point(const ExperimentConfig& cfg) {
    cfg.validate();
    PointResult result;

    for (const auto& spec : cfg.benchmarks) {
        const std::string name = to_string(spec.system);
        try {
            const NormalizedSeries series = normalize_unit(gen_series(spec));
            result.benchmarks.push_back(evaluate_series(name, series, cfg));
        } catch (const Error& e) {
            PointResult::BenchmarkEval eval;
            eval.name = name;
            eval.error = e.what();
            result.benchmarks.push_back(std::move(eval));
        }
    }

    // Steady-state trace and spectrum at the operating point, for regime
    // visualization and the comb-character verdict.
    try {
        const Trajectory traj = steady_state_window(cfg.model, cfg.encoding.f_avg, cfg.integrator);
        result.regime = classify_regime(cfg.model, cfg.encoding.f_avg);
        if (result.regime.label == RegimeLabel::FrequencyComb)
            result.regime.comb_character = classify_comb_dynamics(traj, cfg.comb);
        result.trace_tau.reserve(traj.samples.size());
        result.trace_psi2_sq.reserve(traj.samples.size());
        std::vector<cplx> psi2(traj.samples.size());
        for (std::size_t k = 0; k < traj.samples.size(); ++k) {
            result.trace_tau.push_back(traj.samples[k].tau);
            result.trace_psi2_sq.push_back(std::norm(traj.samples[k].psi2));
            psi2[k] = traj.samples[k].psi2;
        }
        result.spectrum = dft_magnitudes(psi2, static_cast<int>(psi2.size()));
    } catch (const Error&) {
        result.regime = classify_regime(cfg.model, cfg.encoding.f_avg);
    }
    return result;
}

bool SweepGrid::any_failure() const {
    for (const auto& c : cells)
        if (!c.ok()) return true;
    return false;
}

SweepGrid run_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    if (!cfg.axis1) throw ConfigError("run_sweep: axis1 is required");

    SweepGrid grid;
    grid.axis1 = *cfg.axis1;
    if (cfg.axis2) {
        grid.axis2 = *cfg.axis2;
    } else {
        // Degenerate second axis pinned at the configured delta1.
        grid.axis2 = AxisSpec{ParamAxis::Delta1, cfg.model.delta1, cfg.model.delta1, 1};
    }
    const auto v1 = grid.axis1.values();
    const auto v2 = grid.axis2.values();
    grid.cells.assign(v1.size() * v2.size(), SweepCell{});

    // One shared input series for every cell.
    const SeriesSpec& bench = cfg.benchmarks.front();
    grid.benchmark_name = to_string(bench.system);
    const NormalizedSeries series = normalize_unit(gen_series(bench));
    grid.series_hash = hash_series(series.values);

#ifdef _OPENMP
    const int workers = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
#else
    const int workers = 1;
#endif
    const int inner_threads = workers > 1 ? 1 : 0;
    const long total = static_cast<long>(grid.cells.size());

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
#endif
    for (long idx = 0; idx < total; ++idx) {
        const std::size_t i = static_cast<std::size_t>(idx) / v2.size();
        const std::size_t j = static_cast<std::size_t>(idx) % v2.size();
        ExperimentConfig cell_cfg = cfg;
        cell_cfg.axis1.reset();
        cell_cfg.axis2.reset();
        apply_axis_value(cell_cfg, grid.axis1.param, v1[i]);
        apply_axis_value(cell_cfg, grid.axis2.param, v2[j]);

        SweepCell cell;
        try {
            cell.regime = classify_regime_dynamics(cell_cfg.model, cell_cfg.encoding.f_avg,
                                                   cell_cfg.integrator, cell_cfg.comb);
        } catch (const Error&) {
            cell.regime = classify_regime(cell_cfg.model, cell_cfg.encoding.f_avg);
        }
        try {
            cell_cfg.encoding.validate();
            try {
                cell.nmse =
                    evaluate_series(grid.benchmark_name, series, cell_cfg, inner_threads).nmse;
            } catch (const ReservoirDivergenceError&) {
                // Retry once with 10x tighter tolerances.
                ExperimentConfig tight = cell_cfg;
                tight.integrator.rel_tol *= 0.1;
                tight.integrator.abs_tol *= 0.1;
                cell.nmse = evaluate_series(grid.benchmark_name, series, tight, inner_threads).nmse;
            }
        } catch (const ReservoirDivergenceError& e) {
            cell.failure = std::string("divergence: ") + e.what();
        } catch (const DegenerateError& e) {
            cell.failure = std::string("degenerate: ") + e.what();
        } catch (const Error& e) {
            cell.failure = e.what();
        }
        grid.cells[static_cast<std::size_t>(idx)] = std::move(cell);
    }
    return grid;
}

namespace {

void write_axis_row(std::ofstream& os, const char* tag, const AxisSpec& axis) {
    os << tag << "," << to_string(axis.param);
    for (double v : axis.values()) os << "," << fmt17(v);
    os << "\n";
}

// failure tags share the CSV row; keep them single-field
std::string sanitize_csv_field(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

}  // namespace

void write_grid_csv(const SweepGrid& grid, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    write_axis_row(os, "axis1", grid.axis1);
    write_axis_row(os, "axis2", grid.axis2);
    os << "i,j," << to_string(grid.axis1.param) << "," << to_string(grid.axis2.param)
       << ",nmse,log10_nmse,regime,failure\n";
    const auto v1 = grid.axis1.values();
    const auto v2 = grid.axis2.values();
    for (std::size_t i = 0; i < v1.size(); ++i) {
        for (std::size_t j = 0; j < v2.size(); ++j) {
            const SweepCell& c = grid.at(i, j);
            os << i << "," << j << "," << fmt17(v1[i]) << "," << fmt17(v2[j]) << ",";
            if (c.ok() && std::isfinite(c.nmse))
                os << fmt17(c.nmse) << "," << fmt17(std::log10(c.nmse));
            else
                os << ",";
            os << "," << to_string(c.regime) << "," << sanitize_csv_field(c.failure) << "\n";
        }
    }
    if (!os) throw Error("failed writing " + path.string());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

AxisSpec parse_axis_row(const std::string& line, const char* tag) {
    const auto f = split_csv_line(line);
    if (f.size() < 3 || f[0] != tag) throw Error("grid csv: malformed axis row");
    AxisSpec a;
    a.param = param_axis_from_string(f[1]);
    a.steps = static_cast<int>(f.size()) - 2;
    a.min = std::stod(f[2]);
    a.max = std::stod(f.back());
    return a;
}

}  // namespace

SweepGrid read_grid_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open " + path.string());
    std::string line;
    SweepGrid grid;
    if (!std::getline(is, line)) throw Error("grid csv: empty file");
    grid.axis1 = parse_axis_row(line, "axis1");
    if (!std::getline(is, line)) throw Error("grid csv: missing axis2");
    grid.axis2 = parse_axis_row(line, "axis2");
    if (!std::getline(is, line)) throw Error("grid csv: missing header");
    grid.cells.assign(static_cast<std::size_t>(grid.axis1.steps) *
                          static_cast<std::size_t>(grid.axis2.steps),
                      SweepCell{});
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() < 8) throw Error("grid csv: short row: " + line);
        const auto i = static_cast<std::size_t>(std::stoul(f[0]));
        const auto j = static_cast<std::size_t>(std::stoul(f[1]));
        SweepCell c;
        if (!f[4].empty()) c.nmse = std::stod(f[4]);
        c.regime = regime_from_string(f[6]);
        c.failure = f[7];
        grid.cells.at(grid.index(i, j)) = std::move(c);
    }
    return grid;
}

void write_grid_meta(const SweepGrid& grid, const ExperimentConfig& cfg,
                     const std::filesystem::path& path) {
    nlohmann::json j;
    j["format"] = "parc-grid-meta-v1";
    j["benchmark"] = grid.benchmark_name;
    char hash[32];
    std::snprintf(hash, sizeof hash, "0x%016llx",
                  static_cast<unsigned long long>(grid.series_hash));
    j["series_hash"] = hash;
    j["config"] = config_json(cfg);
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    os << j.dump(2) << "\n";
}

void write_regime_grid_csv(const RegimeGrid& grid, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    write_axis_row(os, "axis1", grid.axis1);
    write_axis_row(os, "axis2", grid.axis2);
    os << "i,j," << to_string(grid.axis1.param) << "," << to_string(grid.axis2.param)
       << ",nmse,log10_nmse,regime,failure\n";
    const auto v1 = grid.axis1.values();
    const auto v2 = grid.axis2.values();
    for (std::size_t i = 0; i < v1.size(); ++i)
        for (std::size_t j = 0; j < v2.size(); ++j)
            os << i << "," << j << "," << fmt17(v1[i]) << "," << fmt17(v2[j]) << ",,,"
               << to_string(grid.at(static_cast<int>(i), static_cast<int>(j))) << ",\n";
    if (!os) throw Error("failed writing " + path.string());
}

}  // namespace parc
